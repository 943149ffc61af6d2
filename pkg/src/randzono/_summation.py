"""Deterministic compensated reductions.

Chunk partials are exactly rounded (``math.fsum``); partials are then combined
in chunk order with Kahan compensation. Results therefore depend only on the
chunk size, never on how many workers produced the partials.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

import numpy as np

T = TypeVar("T")


class KahanSum:
    """Running compensated sum."""

    __slots__ = ("total", "_c")

    def __init__(self, start: float = 0.0):
        self.total = float(start)
        self._c = 0.0

    def add(self, value: float) -> None:
        y = value - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t

    def __float__(self) -> float:
        return self.total


class KahanArray:
    """Elementwise compensated sum over a fixed-shape float array."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self._c = np.zeros(shape)

    def add(self, values: np.ndarray) -> None:
        y = values - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


def ordered_map(fn: Callable[[T], object], items: Iterable[T], threads: int = 1) -> Iterator:
    """Map ``fn`` over ``items`` preserving input order, optionally on a thread pool."""
    if threads <= 1:
        return map(fn, items)
    pool = ThreadPoolExecutor(max_workers=threads)
    try:
        results = list(pool.map(fn, items))
    finally:
        pool.shutdown()
    return iter(results)


def chunked_sum(partial: Callable[[T], np.ndarray], chunks: Iterable[T], threads: int = 1) -> float:
    """Sum the arrays ``partial(chunk)`` over ``chunks`` reproducibly."""
    acc = KahanSum()
    for values in ordered_map(lambda c: math.fsum(partial(c)), chunks, threads):
        acc.add(values)
    return acc.total
