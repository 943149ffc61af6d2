"""Exact valuations of zonotopes generated by segments from the origin.

A zonotope here is ``scale * (seg(g_1) + ... + seg(g_n))`` where ``seg(g)`` is
the segment from the origin to ``g``. Degree-j valuations of such bodies
reduce to sums over j-subsets of generators, which this module enumerates
exactly (up to a term budget) with deterministic compensated reduction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from randzono._summation import KahanArray, chunked_sum

DEFAULT_TERM_BUDGET = 10**8
CHUNK_TERMS = 1 << 14
INT128_MAX = (1 << 127) - 1
# pivots in [-GRAM_CLAMP * trace, 0) are treated as exact zeros
GRAM_CLAMP = 1e-12
# Schur pivots within this many ulps of the original diagonal entry are rounding residue
GRAM_REL_ULPS = 8


class DomainError(ValueError):
    """Input outside an operation's domain."""


class CapacityError(RuntimeError):
    """Exact enumeration would exceed the configured term budget."""


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient, restricted to the signed 128-bit range."""
    if k < 0 or n < 0 or k > n:
        return 0
    value = math.comb(n, k)
    if value > INT128_MAX:
        raise OverflowError(f"C({n},{k}) exceeds the 128-bit integer range")
    return value


def as_vectors(vectors, d: int | None = None) -> np.ndarray:
    """Coerce to a finite ``(n, d)`` float array."""
    try:
        arr = np.asarray(vectors, dtype=float)
    except (TypeError, ValueError):
        raise DomainError("vectors must share one dimension and be numeric") from None
    if arr.size == 0:
        if d is None:
            d = arr.shape[-1] if arr.ndim == 2 else 0
        arr = arr.reshape(0, d)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DomainError(f"expected a list of vectors, got shape {arr.shape}")
    if d is not None and arr.shape[1] != d:
        raise DomainError(f"dimension mismatch: expected {d}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("vectors must have finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class Zonotope:
    """The body ``scale * (seg(g_1) + ... + seg(g_n))``.

    ``generators`` has shape ``(n, d)``; ``n`` may be 0, in which case the
    body is the origin.
    """

    generators: np.ndarray
    scale: float = 1.0

    def __init__(self, generators, scale: float = 1.0, d: int | None = None):
        gens = as_vectors(generators, d)
        if gens.shape[1] < 1:
            raise DomainError("dimension must be at least 1")
        scale = float(scale)
        if not (math.isfinite(scale) and scale >= 0):
            raise DomainError(f"scale must be finite and nonnegative, got {scale}")
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "scale", scale)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    @property
    def n(self) -> int:
        return self.generators.shape[0]

    @classmethod
    def point(cls, d: int) -> "Zonotope":
        return cls(np.zeros((0, d)))

    def with_generator(self, x) -> "Zonotope":
        """The body ``self + seg(x)`` with ``x`` entering unscaled."""
        x = as_vectors(x, self.dim)
        if self.scale == 0:
            return Zonotope(x, 1.0)
        return Zonotope(np.vstack([self.generators, x / self.scale]), self.scale)

    def rescaled(self, scale: float) -> "Zonotope":
        return Zonotope(self.generators, scale)


@dataclass(frozen=True, eq=False)
class ValuationSpec:
    """A degree-j valuation: the intrinsic volume V_j, or the mixed volume
    ``V(K[j], seg(y_{j+1}), ..., seg(y_d))`` with fixed segment vectors."""

    kind: str
    j: int
    fixed_segments: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    def __post_init__(self):
        if self.kind not in ("intrinsic", "mixed"):
            raise DomainError(f"unknown valuation kind {self.kind!r}")
        if int(self.j) != self.j or self.j < 1:
            raise DomainError(f"degree j must be a positive integer, got {self.j}")
        object.__setattr__(self, "j", int(self.j))
        fixed = np.asarray(self.fixed_segments, dtype=float)
        if self.kind == "intrinsic":
            if fixed.size:
                raise DomainError("intrinsic valuations take no fixed segments")
            fixed = np.zeros((0, 0))
        else:
            if fixed.size == 0:
                fixed = np.zeros((0, self.j))
            fixed = as_vectors(fixed)
            if fixed.shape[1] != self.j + fixed.shape[0]:
                raise DomainError(
                    f"mixed valuation of degree {self.j} in R^{fixed.shape[1]} needs "
                    f"{fixed.shape[1] - self.j} fixed segments, got {fixed.shape[0]}"
                )
        fixed.setflags(write=False)
        object.__setattr__(self, "fixed_segments", fixed)

    @classmethod
    def intrinsic(cls, j: int) -> "ValuationSpec":
        return cls("intrinsic", j)

    @classmethod
    def mixed(cls, j: int, fixed_segments) -> "ValuationSpec":
        return cls("mixed", j, fixed_segments)

    @property
    def dim(self) -> int | None:
        """Ambient dimension if the spec pins it (mixed kind), else None."""
        if self.kind == "mixed":
            return self.fixed_segments.shape[1]
        return None

    def check_dim(self, d: int) -> None:
        if self.j > d:
            raise DomainError(f"degree j={self.j} exceeds dimension d={d}")
        if self.dim is not None and self.dim != d:
            raise DomainError(f"valuation lives in R^{self.dim}, body in R^{d}")

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "j": self.j}
        if self.kind == "mixed":
            out["fixed_segments"] = self.fixed_segments.tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ValuationSpec":
        try:
            return cls(data.get("kind", "intrinsic"), data["j"], data.get("fixed_segments", ()))
        except KeyError as exc:
            raise DomainError(f"valuation spec missing field {exc}") from None


@dataclass(frozen=True)
class BallGeometry:
    """Unit-ball volumes ``kappa[0..d]``."""

    d: int
    kappa: tuple[float, ...]

    def __getitem__(self, k: int) -> float:
        return self.kappa[k]

    def sphere_area(self) -> float:
        return self.d * self.kappa[self.d]


def unit_ball_volumes(d: int) -> BallGeometry:
    """kappa_k for k = 0..d via kappa_k = kappa_{k-2} * 2 pi / k."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    kappa = [1.0, 2.0]
    for k in range(2, d + 1):
        kappa.append(kappa[k - 2] * 2.0 * math.pi / k)
    return BallGeometry(d, tuple(kappa[: d + 1]))


def kappa(k: int) -> float:
    """Volume of the unit ball in R^k (k >= 0)."""
    if k == 0:
        return 1.0
    return unit_ball_volumes(k)[k]


# --------------------------------------------------------------------------
# parallelepiped volumes


def gram_volumes(vectors: np.ndarray) -> np.ndarray:
    """j-volumes of the parallelepipeds spanned by ``vectors[..., :j, :]``.

    ``vectors`` has shape ``(..., j, d)``. For j < d each volume is
    ``sqrt(det(G))`` for the Gram matrix ``G``, using symmetric elimination
    with diagonal pivoting; square systems use ``|det|`` directly.
    """
    vectors = np.asarray(vectors, dtype=float)
    batch_shape = vectors.shape[:-2]
    j, d = vectors.shape[-2:]
    flat = vectors.reshape(-1, j, d)
    if j == 1:
        return np.sqrt(np.einsum("bkd,bkd->b", flat, flat)).reshape(batch_shape)
    if j == d == 2:
        a, b = flat[:, 0], flat[:, 1]
        return np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]).reshape(batch_shape)
    if j == d:
        return np.abs(np.linalg.det(flat)).reshape(batch_shape)
    A = flat @ flat.transpose(0, 2, 1)
    m = A.shape[0]
    rows = np.arange(m)
    floor = -GRAM_CLAMP * np.trace(A, axis1=1, axis2=2)
    residue = GRAM_REL_ULPS * j * np.finfo(float).eps * np.diagonal(A, axis1=1, axis2=2)
    det = np.ones(m)
    active = np.ones((m, j), dtype=bool)
    for _ in range(j):
        diag = np.where(active, np.diagonal(A, axis1=1, axis2=2), -np.inf)
        k = np.argmax(diag, axis=1)
        pivot = diag[rows, k]
        if np.any(pivot < floor):
            raise FloatingPointError("Gram matrix is numerically indefinite")
        pivot = np.where(pivot <= residue[rows, k], 0.0, pivot)
        det *= pivot
        active[rows, k] = False
        safe = np.where(pivot > 0, pivot, 1.0)
        col = A[rows, :, k] / safe[:, None]
        col[pivot <= 0] = 0.0
        A = A - col[:, :, None] * A[rows, k, :][:, None, :]
    return np.sqrt(det).reshape(batch_shape)


def parallelepiped_volume(vectors) -> float:
    """j-volume of ``seg(x_1) + ... + seg(x_j)``, i.e. ``sqrt(det(G^T G))``."""
    arr = as_vectors(vectors)
    j, d = arr.shape
    if j < 1:
        raise DomainError("need at least one vector")
    if j > d:
        raise DomainError(f"{j} vectors in R^{d}: j must not exceed d")
    return float(gram_volumes(arr[None])[0])


# --------------------------------------------------------------------------
# subset enumeration


def combination_chunks(n: int, k: int, chunk: int = CHUNK_TERMS) -> Iterator[np.ndarray]:
    """Lexicographic k-subsets of range(n) as ``(c, k)`` index arrays."""
    it = itertools.combinations(range(n), k)
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(it, chunk)), dtype=np.intp
        )
        if flat.size == 0 and k > 0:
            return
        yield flat.reshape(-1, k)
        if k == 0:
            return


def _check_budget(terms: int, budget: int | None) -> None:
    budget = DEFAULT_TERM_BUDGET if budget is None else budget
    if terms > budget:
        raise CapacityError(
            f"exact enumeration needs {terms} terms, above the budget of {budget}; "
            "use a Monte Carlo or subsampled estimator instead"
        )


class _Summand:
    """Per-subset term of a valuation on segments, up to the global scale.

    Intrinsic: the j-volume of the subset. Mixed: (j!/d!) |det(subset, Y)|,
    computed as (j!/d!) vol(Y) times the j-volume of the subset projected onto
    the orthogonal complement of span(Y).
    """

    def __init__(self, spec: ValuationSpec, d: int):
        spec.check_dim(d)
        self.spec = spec
        self.j = spec.j
        self.factor = 1.0
        self.basis = None
        if spec.kind == "mixed" and spec.fixed_segments.shape[0] > 0:
            Y = spec.fixed_segments
            q, r = np.linalg.qr(Y.T, mode="complete")
            vol_y = float(gram_volumes(Y[None])[0])
            self.factor = vol_y * math.factorial(self.j) / math.factorial(d)
            self.basis = q[:, Y.shape[0]:]

    def project(self, vectors: np.ndarray) -> np.ndarray:
        if self.basis is None:
            return vectors
        return vectors @ self.basis

    def volumes(self, projected_subsets: np.ndarray) -> np.ndarray:
        vols = gram_volumes(projected_subsets)
        return vols * self.factor if self.factor != 1.0 else vols


def valuation(
    Z: Zonotope,
    spec: ValuationSpec,
    *,
    budget: int | None = None,
    threads: int = 1,
) -> float:
    """phi(Z) for a degree-j valuation, by exact enumeration of j-subsets.

    Returns 0 when Z has fewer than j generators or zero scale. The scale is
    factored out and applied once, as ``scale**j``.
    """
    summand = _Summand(spec, Z.dim)
    j = spec.j
    if Z.n < j or Z.scale == 0.0 or summand.factor == 0.0:
        return 0.0
    _check_budget(binom(Z.n, j), budget)
    P = summand.project(Z.generators)
    total = chunked_sum(lambda idx: summand.volumes(P[idx]), combination_chunks(Z.n, j), threads)
    return Z.scale**j * total


def valuation_batch(generators: np.ndarray, spec: ValuationSpec, scale: float = 1.0) -> np.ndarray:
    """phi for a batch of equal-size zonotopes.

    ``generators`` has shape ``(B, n, d)``; returns ``(B,)``. Intended for
    small n (the j-subset loop runs in Python).
    """
    G = np.asarray(generators, dtype=float)
    B, n, d = G.shape
    summand = _Summand(spec, d)
    j = spec.j
    if n < j or scale == 0.0 or summand.factor == 0.0:
        return np.zeros(B)
    P = summand.project(G)
    acc = KahanArray(B)
    for idx in itertools.combinations(range(n), j):
        acc.add(summand.volumes(P[:, idx, :]))
    return scale**j * acc.total


def valuation_increment(
    Z: Zonotope,
    points,
    spec: ValuationSpec,
    *,
    budget: int | None = None,
    batch_terms: int = 1 << 16,
) -> np.ndarray:
    """``phi(seg(x) + Z) - phi(Z)`` for each row ``x`` of ``points``.

    Only subsets containing the new segment change, so this costs
    C(n, j-1) terms per point.
    """
    X = as_vectors(points, Z.dim)
    summand = _Summand(spec, Z.dim)
    j = spec.j
    m = X.shape[0]
    if summand.factor == 0.0 or m == 0:
        return np.zeros(m)
    PX = summand.project(X)
    if j == 1:
        return summand.volumes(PX[:, None, :])
    if Z.n < j - 1 or Z.scale == 0.0:
        return np.zeros(m)
    _check_budget(binom(Z.n, j - 1), budget)
    PG = summand.project(Z.generators)
    per_chunk = max(1, batch_terms // max(m, 1))
    acc = KahanArray(m)
    for idx in combination_chunks(Z.n, j - 1, per_chunk):
        sub = PG[idx]  # (c, j-1, k)
        stacked = np.concatenate(
            [
                np.broadcast_to(PX[:, None, None, :], (m, sub.shape[0], 1, PX.shape[1])),
                np.broadcast_to(sub[None], (m,) + sub.shape),
            ],
            axis=2,
        )
        acc.add(summand.volumes(stacked).sum(axis=1))
    return Z.scale ** (j - 1) * acc.total


# --------------------------------------------------------------------------
# support functions


def support_function(Z: Zonotope, u) -> float:
    """h(Z, u) = scale * sum_i max(<g_i, u>, 0)."""
    return float(support_values(Z, np.asarray(u, dtype=float)[None])[0])


def support_values(Z: Zonotope, directions) -> np.ndarray:
    """Support function of Z at each row of ``directions``."""
    U = as_vectors(directions, Z.dim)
    if Z.n == 0 or Z.scale == 0.0:
        return np.zeros(U.shape[0])
    step = max(1, (1 << 20) // U.shape[0])
    acc = KahanArray(U.shape[0])
    for start in range(0, Z.n, step):
        acc.add(np.maximum(U @ Z.generators[start : start + step].T, 0.0).sum(axis=1))
    return Z.scale * acc.total


def hausdorff_upper_bound(A: Zonotope, B, directions) -> float:
    """Largest support-function gap over the supplied unit directions.

    This is a lower bound on the Hausdorff distance that tightens as the
    direction set is refined; report it together with the direction count.
    ``B`` may also be a callable mapping a direction array to support values.
    """
    U = as_vectors(directions, A.dim)
    if U.shape[0] == 0:
        raise DomainError("need at least one direction")
    hb = B(U) if callable(B) else support_values(B, U)
    return float(np.max(np.abs(support_values(A, U) - hb)))


def direction_grid(d: int, count: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Unit directions: equal angles on the circle, a Fibonacci lattice on S^2,
    seeded uniform directions for d > 3, and {+1, -1} for d = 1."""
    if count < 1:
        raise DomainError("direction count must be positive")
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        t = 2 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(t), np.sin(t)])
    if d == 3:
        i = np.arange(count) + 0.5
        z = 1 - 2 * i / count
        r = np.sqrt(1 - z * z)
        phi = np.pi * (3 - math.sqrt(5)) * i
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    if rng is None:
        raise DomainError("seeded generator required for d > 3")
    g = rng.standard_normal((count, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


# --------------------------------------------------------------------------
# balls


def ball_intrinsic_volume(d: int, j: int, R: float) -> float:
    """V_j(R B^d) = C(d, j) kappa_d / kappa_{d-j} R^j."""
    if not 0 <= j <= d:
        raise DomainError(f"need 0 <= j <= d, got j={j}, d={d}")
    if R < 0:
        raise DomainError("radius must be nonnegative")
    if j == 0:
        return 1.0
    return binom(d, j) * kappa(d) / kappa(d - j) * R**j


def segment_plus_ball_intrinsic(x, R: float, j: int) -> float:
    """V_j(seg(x) + R B^d); only V_0 = 1 and V_1 = |x| of the segment enter."""
    x = np.asarray(x, dtype=float).ravel()
    d = x.size
    if not 1 <= j <= d:
        raise DomainError(f"need 1 <= j <= d, got j={j}, d={d}")
    if R < 0:
        raise DomainError("radius must be nonnegative")
    norm = float(np.linalg.norm(x))
    value = ball_intrinsic_volume(d, j, R)
    value += binom(d - 1, j - 1) * kappa(d - 1) / kappa(d - j) * norm * R ** (j - 1)
    return value


def ball_valuation(spec: ValuationSpec, d: int, R: float) -> float:
    """phi(R B^d) for either valuation kind.

    For the mixed kind, phi(K) = (j!/d!) vol(Y) V_j(K projected onto span(Y)^perp).
    """
    spec.check_dim(d)
    if spec.kind == "intrinsic":
        return ball_intrinsic_volume(d, spec.j, R)
    summand = _Summand(spec, d)
    return summand.factor * kappa(spec.j) * R**spec.j


def ball_valuation_increment(spec: ValuationSpec, points, R: float) -> np.ndarray:
    """``phi(seg(x) + R B^d) - phi(R B^d)`` for each row of ``points``."""
    X = as_vectors(points)
    d = X.shape[1]
    spec.check_dim(d)
    j = spec.j
    if spec.kind == "intrinsic":
        coeff = binom(d - 1, j - 1) * kappa(d - 1) / kappa(d - j) * R ** (j - 1)
        return coeff * np.linalg.norm(X, axis=1)
    summand = _Summand(spec, d)
    PX = summand.project(X)
    return summand.factor * kappa(j - 1) * R ** (j - 1) * np.linalg.norm(PX, axis=1)


# --------------------------------------------------------------------------
# subset identity


def subset_identity_sides(
    generators, spec: ValuationSpec, p: int, *, budget: int | None = None
) -> tuple[float, float]:
    """Both sides of phi(sum of n segments) = C(n-j, p-j)^-1 sum over p-subsets."""
    G = as_vectors(generators)
    n, d = G.shape
    j = spec.j
    spec.check_dim(d)
    if not j <= p <= n:
        raise DomainError(f"need j <= p <= n, got j={j}, p={p}, n={n}")
    _check_budget(binom(n, p) * binom(p, j), budget)
    lhs = valuation(Zonotope(G), spec, budget=budget)
    total = KahanArray(())
    for idx in combination_chunks(n, p, max(1, CHUNK_TERMS // max(1, binom(p, j)))):
        vals = valuation_batch(G[idx], spec)
        total.add(math.fsum(vals))
    rhs = float(total.total) / binom(n - j, p - j)
    return lhs, rhs


def subset_identity_residual(
    generators, spec: ValuationSpec, p: int, *, budget: int | None = None
) -> float:
    """|LHS - RHS| of the p-subset averaging identity, both sides enumerated."""
    lhs, rhs = subset_identity_sides(generators, spec, p, budget=budget)
    return abs(lhs - rhs)


def ustat_scaling(n: int, j: int, p: int) -> Fraction:
    """Exact n^-j C(n-j, p-j)^-1 C(n, p), the factor turning U_n^(p) into phi(Z_n)."""
    if not j <= p <= n:
        raise DomainError(f"need j <= p <= n, got j={j}, p={p}, n={n}")
    return Fraction(binom(n, p), n**j * binom(n - j, p - j))
