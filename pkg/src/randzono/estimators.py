"""U-statistics, Monte Carlo expectations, and the CLT pipeline for phi(Z_n).

Every Monte Carlo routine splits its replications into fixed-size blocks,
each drawing from its own child stream of the caller's ``SeedSpec``. Blocks
are reduced in index order, so results do not depend on ``threads``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

from randzono._summation import ordered_map
from randzono.core import (
    CapacityError,
    DomainError,
    ValuationSpec,
    Zonotope,
    _check_budget,
    ball_valuation,
    ball_valuation_increment,
    binom,
    combination_chunks,
    direction_grid,
    kappa,
    support_values,
    ustat_scaling,
    valuation,
    valuation_batch,
    valuation_increment,
)
from randzono.distributions import (
    GAUSSIAN_ZONOID_RADIUS,
    PRINTED_GAUSSIAN_RADIUS,
    DistributionSpec,
    SeedSpec,
    draw,
    gaussian_norm_moments,
    origin_in_support,
    sample,
    sphere_zonoid_radius,
    support_rank,
    zonoid_exact_discrete,
)

BLOCK = 4096
# stream tags under a caller's seed
_REPS, _ZETA, _SURROGATE = 0, 1, 2


@dataclass(frozen=True)
class EstimateResult:
    mean: float
    stderr: float
    n_samples: int
    seed: SeedSpec | None = None

    @classmethod
    def from_values(cls, values, seed: SeedSpec | None = None) -> "EstimateResult":
        values = np.asarray(values, dtype=float)
        n = values.size
        if n < 2:
            raise DomainError("need at least two samples for a standard error")
        mean = math.fsum(values) / n
        var = math.fsum((values - mean) ** 2) / (n - 1)
        return cls(mean, math.sqrt(var / n), n, seed)

    def z_score(self, target: float) -> float:
        diff = self.mean - target
        if self.stderr == 0.0:
            return 0.0 if abs(diff) <= 1e-12 * max(1.0, abs(target)) else math.copysign(math.inf, diff)
        return diff / self.stderr

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": None if self.seed is None else self.seed.to_dict(),
        }


def _blocked(fn, total: int, seed: SeedSpec, threads: int = 1, block: int = BLOCK) -> np.ndarray:
    """Concatenate ``fn(rng, count)`` over fixed blocks with per-block streams."""
    sizes = [min(block, total - start) for start in range(0, total, block)]

    def run(i):
        return np.asarray(fn(seed.child(i).generator(), sizes[i]), dtype=float)

    parts = list(ordered_map(run, range(len(sizes)), threads))
    return np.concatenate(parts) if parts else np.zeros(0)


# --------------------------------------------------------------------------
# kernels and U-statistics


@dataclass(frozen=True)
class KernelContext:
    """The kernel h(x_1..x_p) = phi(seg(x_1) + ... + seg(x_p)) of order p."""

    spec: ValuationSpec
    p: int

    def __post_init__(self):
        if self.p < self.spec.j:
            raise DomainError(f"kernel order p={self.p} is below the degree j={self.spec.j}")


@dataclass(frozen=True)
class Subsample:
    """Average h over ``m`` uniformly drawn p-subsets, drawn with replacement."""

    m: int
    seed: SeedSpec


def kernel_h(ctx: KernelContext, points) -> float:
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] != ctx.p:
        raise DomainError(f"kernel of order {ctx.p} needs exactly {ctx.p} points")
    return valuation(Zonotope(points), ctx.spec)


def random_subsets(rng: np.random.Generator, n: int, p: int, m: int) -> np.ndarray:
    """``(m, p)`` array of uniform p-subsets of range(n), sorted within rows."""
    if p > n:
        raise DomainError("subset size exceeds the sample")
    out = np.sort(rng.integers(0, n, size=(m, p)), axis=1)
    bad = np.any(out[:, 1:] == out[:, :-1], axis=1) if p > 1 else np.zeros(m, bool)
    while bad.any():
        redo = np.sort(rng.integers(0, n, size=(int(bad.sum()), p)), axis=1)
        out[bad] = redo
        bad = np.any(out[:, 1:] == out[:, :-1], axis=1)
    return out


def u_statistic(ctx: KernelContext, sample_points, mode="exact", *, budget: int | None = None) -> float:
    """U_n^(p)(h): the mean of h over p-subsets of the sample.

    ``mode`` is ``"exact"`` (all C(n, p) subsets, subject to the term budget)
    or a :class:`Subsample`.
    """
    X = np.asarray(sample_points, dtype=float)
    n = X.shape[0]
    p = ctx.p
    if n < p:
        raise DomainError(f"sample of size {n} is smaller than the kernel order {p}")
    per_kernel = binom(p, ctx.spec.j)
    if isinstance(mode, Subsample):
        if mode.m < 1:
            raise DomainError("subsample size must be positive")
        idx = random_subsets(mode.seed.generator(), n, p, mode.m)
        vals = np.concatenate(
            [valuation_batch(X[idx[s : s + BLOCK]], ctx.spec) for s in range(0, mode.m, BLOCK)]
        )
        return math.fsum(vals) / mode.m
    if mode != "exact":
        raise DomainError(f"unknown U-statistic mode {mode!r}")
    _check_budget(binom(n, p) * per_kernel, budget)
    chunk = max(1, (1 << 14) // per_kernel)
    total = math.fsum(
        math.fsum(valuation_batch(X[idx], ctx.spec)) for idx in combination_chunks(n, p, chunk)
    )
    return total / binom(n, p)


def valuation_of_Zn_via_ustat(ctx: KernelContext, sample_points, mode="exact", **kw) -> float:
    """phi(Z_n) from the order-p U-statistic of the sample."""
    X = np.asarray(sample_points, dtype=float)
    n = X.shape[0]
    if n < ctx.spec.j:
        return 0.0
    return float(ustat_scaling(n, ctx.spec.j, ctx.p)) * u_statistic(ctx, X, mode, **kw)


def theorem1_factor(j: int, p: int) -> Fraction:
    """p! / (p^j (p-j)!), exactly."""
    if not 1 <= j <= p:
        raise DomainError(f"need 1 <= j <= p, got j={j}, p={p}")
    return Fraction(math.factorial(p), p**j * math.factorial(p - j))


def theorem1_prediction(phi_at_ZX: float, j: int, p: int) -> float:
    """Predicted E phi(Z_p) given phi(Z_X)."""
    return float(theorem1_factor(j, p)) * phi_at_ZX


# --------------------------------------------------------------------------
# zonoid surrogates


@dataclass(frozen=True, eq=False)
class Surrogate:
    """A stand-in for Z_X: an exact zonotope, a centered ball, or an empirical Z_n.

    ``error`` is zero for exact sources; for the empirical source it is the
    largest standard error of h(seg(X), u) / sqrt(n) over a direction grid.
    """

    kind: str
    d: int
    zonotope: Zonotope | None = None
    radius: float | None = None
    error: float = 0.0
    n: int | None = None

    def phi(self, spec: ValuationSpec, *, budget: int | None = None) -> float:
        if self.radius is not None:
            return ball_valuation(spec, self.d, self.radius)
        return valuation(self.zonotope, spec, budget=budget)

    def increment(self, spec: ValuationSpec, points, *, budget: int | None = None) -> np.ndarray:
        """phi(seg(x) + Z_X) - phi(Z_X) per point."""
        if self.radius is not None:
            return ball_valuation_increment(spec, points, self.radius)
        return valuation_increment(self.zonotope, points, spec, budget=budget)

    def support(self, directions) -> np.ndarray:
        U = np.asarray(directions, dtype=float)
        if self.radius is not None:
            return self.radius * np.linalg.norm(U, axis=1)
        return support_values(self.zonotope, U)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "d": self.d, "error": self.error}
        if self.radius is not None:
            out["radius"] = self.radius
        if self.n is not None:
            out["n"] = self.n
        if self.zonotope is not None and self.kind == "exact_discrete":
            out["generators"] = self.zonotope.generators.tolist()
        return out


def empirical_surrogate(dist: DistributionSpec, n: int, seed: SeedSpec, n_directions: int = 64) -> Surrogate:
    X = sample(dist, n, seed)
    U = direction_grid(dist.d, n_directions, seed.child(1).generator())
    pos = np.maximum(X @ U.T, 0.0)
    err = float(np.max(pos.std(axis=0, ddof=1)) / math.sqrt(n)) if n > 1 else math.inf
    return Surrogate("empirical", dist.d, zonotope=Zonotope(X, 1.0 / n), error=err, n=n)


def surrogate_for(
    dist: DistributionSpec,
    seed: SeedSpec | None = None,
    *,
    kind: str = "auto",
    n_empirical: int = 10**5,
) -> Surrogate:
    """Best available Z_X: exact discrete, then closed-form ball, then empirical."""
    if kind == "auto":
        if dist.kind == "discrete":
            kind = "exact_discrete"
        elif dist.kind in ("gaussian_std", "uniform_sphere"):
            kind = "ball"
        else:
            kind = "empirical"
    if kind == "exact_discrete":
        return Surrogate(kind, dist.d, zonotope=zonoid_exact_discrete(dist))
    if kind == "ball":
        if dist.kind == "gaussian_std":
            return Surrogate("gaussian_ball", dist.d, radius=GAUSSIAN_ZONOID_RADIUS)
        if dist.kind == "uniform_sphere":
            return Surrogate("sphere_ball", dist.d, radius=sphere_zonoid_radius(dist.d, dist.radius))
        raise DomainError(f"no closed-form zonoid for {dist.kind}")
    if kind == "empirical":
        if seed is None:
            raise DomainError("empirical surrogate needs a seed")
        return empirical_surrogate(dist, n_empirical, seed)
    raise DomainError(f"unknown surrogate kind {kind!r}")


# --------------------------------------------------------------------------
# Theorem-1 style expectations


def estimate_expected_valuation_Zp(
    dist: DistributionSpec,
    ctx: KernelContext,
    reps: int,
    seed: SeedSpec,
    *,
    threads: int = 1,
) -> EstimateResult:
    """Monte Carlo mean of phi(Z_p), Z_p = (1/p)(seg(X_1) + ... + seg(X_p))."""
    if reps < 2:
        raise DomainError("need at least two replications")
    ctx.spec.check_dim(dist.d)
    p = ctx.p

    def block(rng, count):
        return valuation_batch(draw(dist, (count, p), rng), ctx.spec) / p**ctx.spec.j

    return EstimateResult.from_values(_blocked(block, reps, seed, threads), seed)


@dataclass(frozen=True)
class Theorem1Report:
    estimate: EstimateResult
    prediction: float
    z_score: float
    phi_ZX: float
    factor: Fraction
    surrogate: Surrogate

    @property
    def passed(self) -> bool:
        return abs(self.z_score) < 4

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate.to_dict(),
            "prediction": self.prediction,
            "z_score": self.z_score,
            "phi_ZX": self.phi_ZX,
            "factor": str(self.factor),
            "surrogate": self.surrogate.to_dict(),
            "passed": self.passed,
        }


def verify_theorem1(
    dist: DistributionSpec,
    spec: ValuationSpec,
    p: int,
    reps: int,
    seed: SeedSpec,
    *,
    surrogate: Surrogate | None = None,
    threads: int = 1,
) -> Theorem1Report:
    """Compare a Monte Carlo E phi(Z_p) with p!/(p^j (p-j)!) phi(Z_X)."""
    ctx = KernelContext(spec, p)
    if surrogate is None:
        surrogate = surrogate_for(dist, seed.child(_SURROGATE))
    phi_zx = surrogate.phi(spec)
    factor = theorem1_factor(spec.j, p)
    prediction = float(factor) * phi_zx
    est = estimate_expected_valuation_Zp(dist, ctx, reps, seed.child(_REPS), threads=threads)
    return Theorem1Report(est, prediction, est.z_score(prediction), phi_zx, factor, surrogate)


def expected_valuation_discrete_exact(dist: DistributionSpec, spec: ValuationSpec, p: int) -> float:
    """E phi(Z_p) for a discrete law by enumerating all atom p-tuples."""
    if dist.kind != "discrete":
        raise DomainError("exact enumeration needs a discrete law")
    k = dist.atoms.shape[0]
    _check_budget(k**p, None)
    idx = np.array(np.meshgrid(*[np.arange(k)] * p, indexing="ij")).reshape(p, -1).T
    weights = np.prod(dist.probs[idx], axis=1)
    vals = valuation_batch(dist.atoms[idx], spec, 1.0 / p)
    return math.fsum(weights * vals)


def gaussian_radius_oracle(n_samples: int, seed: SeedSpec, *, threads: int = 1) -> EstimateResult:
    """Monte Carlo estimate of E max(N, 0) for standard normal N."""

    def block(rng, count):
        return np.maximum(rng.standard_normal(count), 0.0)

    return EstimateResult.from_values(_blocked(block, n_samples, seed, threads, block=1 << 16), seed)


@dataclass(frozen=True)
class VitaleReport:
    """E|det| of a d x d standard normal matrix against d! V_d(Z_X)."""

    d: int
    determinant: EstimateResult
    radius_oracle: EstimateResult
    target_library: float
    target_oracle: float
    target_printed: float

    @property
    def z_score(self) -> float:
        return self.determinant.z_score(self.target_oracle)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "determinant": self.determinant.to_dict(),
            "radius_oracle": self.radius_oracle.to_dict(),
            "radius_library": GAUSSIAN_ZONOID_RADIUS,
            "radius_printed": PRINTED_GAUSSIAN_RADIUS,
            "target_library": self.target_library,
            "target_oracle": self.target_oracle,
            "target_printed": self.target_printed,
            "z_score": self.z_score,
            "z_score_printed": self.determinant.z_score(self.target_printed),
        }


def vitale_check(
    d: int, reps: int, seed: SeedSpec, *, oracle_samples: int = 10**7, threads: int = 1
) -> VitaleReport:
    spec = ValuationSpec.intrinsic(d)
    dist = DistributionSpec.gaussian(d)

    def block(rng, count):
        return valuation_batch(draw(dist, (count, d), rng), spec)

    det = EstimateResult.from_values(_blocked(block, reps, seed.child(_REPS), threads), seed)
    oracle = gaussian_radius_oracle(oracle_samples, seed.child(_SURROGATE), threads=threads)

    def target(R):
        return math.factorial(d) * ball_valuation(spec, d, R)

    return VitaleReport(
        d, det, oracle, target(GAUSSIAN_ZONOID_RADIUS), target(oracle.mean), target(PRINTED_GAUSSIAN_RADIUS)
    )


# --------------------------------------------------------------------------
# projection h_1 and zeta_1


def h1(spec: ValuationSpec, x, ZX) -> float | np.ndarray:
    """(j-1)! [phi(seg(x) + Z_X) - phi(Z_X)].

    ``ZX`` is a :class:`Zonotope` or a :class:`Surrogate`; ``x`` may be one
    vector or an ``(m, d)`` array, giving a float or an array.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x[None] if single else x
    if isinstance(ZX, Zonotope):
        inc = valuation_increment(ZX, pts, spec)
    else:
        inc = ZX.increment(spec, pts)
    out = math.factorial(spec.j - 1) * inc
    return float(out[0]) if single else out


@dataclass(frozen=True)
class Zeta1Result:
    zeta1: EstimateResult
    centering: EstimateResult
    theta: float

    @property
    def degenerate(self) -> bool:
        """No evidence that zeta_1 > 0 at the 3-stderr level."""
        floor = 1e-12 * max(1.0, self.theta**2)
        return self.zeta1.mean - 3 * self.zeta1.stderr <= floor

    def to_dict(self) -> dict:
        return {
            "zeta1": self.zeta1.to_dict(),
            "centering": self.centering.to_dict(),
            "theta": self.theta,
            "degenerate": self.degenerate,
        }


def zeta1_mc(
    dist: DistributionSpec,
    spec: ValuationSpec,
    surrogate: Surrogate,
    reps: int,
    seed: SeedSpec,
    *,
    threads: int = 1,
) -> Zeta1Result:
    """Monte Carlo zeta_1 = E (h_1(X) - theta)^2 with theta = j! phi(Z_X)."""
    if reps < 2:
        raise DomainError("need at least two replications")
    theta = math.factorial(spec.j) * surrogate.phi(spec)

    def block(rng, count):
        return h1(spec, draw(dist, (count,), rng), surrogate) - theta

    centered = _blocked(block, reps, seed, threads)
    return Zeta1Result(
        EstimateResult.from_values(centered**2, seed),
        EstimateResult.from_values(centered, seed),
        theta,
    )


def zeta1_gaussian_closed_form(d: int, j: int, R: float = GAUSSIAN_ZONOID_RADIUS) -> tuple[float, float, float]:
    """(a, b, zeta_1) for standard Gaussian X and phi = V_j, so h~_1(x) = a(|x| - b)."""
    if not 1 <= j <= d:
        raise DomainError(f"need 1 <= j <= d, got j={j}, d={d}")
    a = math.factorial(d - 1) / math.factorial(d - j) * kappa(d - 1) / kappa(d - j) * R ** (j - 1)
    b = d * kappa(d) / kappa(d - 1) * R
    mean_norm, second = gaussian_norm_moments(d)
    return a, b, a * a * (second - 2 * b * mean_norm + b * b)


# --------------------------------------------------------------------------
# support preconditions for a nondegenerate limit


@dataclass(frozen=True)
class Lemma41Diagnosis:
    passed: bool
    reasons: tuple[str, ...]
    origin_in_support: bool
    support_rank: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "reasons": list(self.reasons),
            "origin_in_support": self.origin_in_support,
            "support_rank": self.support_rank,
        }


def lemma41_precheck(dist: DistributionSpec, j: int, spec: ValuationSpec | None = None) -> Lemma41Diagnosis:
    """Check that supp(X) contains o and is not inside a (j-1)-dimensional subspace."""
    reasons = []
    origin = origin_in_support(dist)
    rank = support_rank(dist)
    if not origin:
        reasons.append("origin: the support of X does not contain the origin")
    if rank < j:
        reasons.append(f"rank: the support of X spans dimension {rank} < j = {j}")
    if spec is not None and spec.kind == "mixed" and spec.fixed_segments.shape[0]:
        if valuation(Zonotope(spec.fixed_segments), ValuationSpec.intrinsic(spec.fixed_segments.shape[0])) == 0:
            reasons.append("valuation: fixed segments are linearly dependent, phi vanishes identically")
    return Lemma41Diagnosis(not reasons, tuple(reasons), origin, rank)


# --------------------------------------------------------------------------
# CLT experiment


@dataclass
class CltReport:
    deviations: np.ndarray
    empirical_variance: float
    predicted_variance: float
    ks_statistic: float | None
    n: int
    reps: int
    phi_ZX: float
    zeta1: float
    zeta1_stderr: float
    zeta1_source: str
    surrogate: Surrogate
    lemma41: Lemma41Diagnosis
    degenerate: bool
    j: int
    variance_rel_tol: float = 0.10
    ks_coefficient: float = 1.63
    path: str = "exact"
    extras: dict = field(default_factory=dict)

    @property
    def variance_ratio(self) -> float | None:
        if self.predicted_variance <= 0:
            return None
        return self.empirical_variance / self.predicted_variance

    @property
    def ustat_variance(self) -> float:
        """(j / j!)^2 zeta_1: the limit variance implied by Hoeffding's CLT and
        phi(Z_n) ~ U_n / j!; coincides with the headline prediction at j = 1."""
        return (self.j / math.factorial(self.j)) ** 2 * self.zeta1

    @property
    def variance_tolerance(self) -> float:
        if self.zeta1 <= 0:
            return self.variance_rel_tol
        return self.variance_rel_tol + 3 * self.zeta1_stderr / self.zeta1

    @property
    def ks_critical(self) -> float:
        return self.ks_coefficient / math.sqrt(self.reps)

    @property
    def passed(self) -> bool:
        if self.degenerate or self.variance_ratio is None:
            return False
        return abs(self.variance_ratio - 1) <= self.variance_tolerance and self.ks_statistic < self.ks_critical

    def to_dict(self) -> dict:
        ratio = self.variance_ratio
        ustat = self.ustat_variance
        return {
            "n": self.n,
            "reps": self.reps,
            "j": self.j,
            "path": self.path,
            "phi_ZX": self.phi_ZX,
            "zeta1": self.zeta1,
            "zeta1_stderr": self.zeta1_stderr,
            "zeta1_source": self.zeta1_source,
            "surrogate": self.surrogate.to_dict(),
            "lemma41": self.lemma41.to_dict(),
            "degenerate": self.degenerate,
            "deviation_mean": math.fsum(self.deviations) / max(1, self.reps),
            "empirical_variance": self.empirical_variance,
            "predicted_variance": self.predicted_variance,
            "variance_ratio": ratio,
            "variance_tolerance": self.variance_tolerance,
            "ustat_variance": ustat,
            "variance_ratio_ustat": self.empirical_variance / ustat if ustat > 0 else None,
            "ks_statistic": self.ks_statistic,
            "ks_critical": self.ks_critical,
            "passed": self.passed,
            **self.extras,
        }


def clt_experiment(
    dist: DistributionSpec,
    spec: ValuationSpec,
    n: int,
    reps: int,
    seed: SeedSpec,
    *,
    surrogate: Surrogate | None = None,
    subsample: int | None = None,
    zeta1_reps: int = 10**5,
    budget: int | None = None,
    threads: int = 1,
    variance_rel_tol: float = 0.10,
    ks_coefficient: float = 1.63,
) -> CltReport:
    """Sample sqrt(n)(phi(Z_n) - phi(Z_X)) over ``reps`` replications and
    compare with N(0, (j! j)^2 zeta_1)."""
    if reps < 2:
        raise DomainError("need at least two replications")
    if n < 1:
        raise DomainError("n must be positive")
    spec.check_dim(dist.d)
    j = spec.j
    if surrogate is None:
        surrogate = surrogate_for(dist, seed.child(_SURROGATE))
    phi_zx = surrogate.phi(spec)
    diagnosis = lemma41_precheck(dist, j, spec)

    if subsample is None:
        _check_budget(binom(n, j), budget)
        path = "exact"
    else:
        path = f"subsample(m={subsample})"
    scaling = float(ustat_scaling(n, j, j)) if n >= j else 0.0

    def one(rep):
        rng = seed.child(_REPS).child(rep).generator()
        X = draw(dist, (n,), rng)
        if subsample is None:
            phi = valuation(Zonotope(X), spec, budget=budget) / n**j
        elif n < j:
            phi = 0.0
        else:
            idx = random_subsets(rng, n, j, subsample)
            phi = scaling * math.fsum(valuation_batch(X[idx], spec)) / subsample
        return math.sqrt(n) * (phi - phi_zx)

    deviations = np.fromiter(ordered_map(one, range(reps), threads), dtype=float, count=reps)
    mean = math.fsum(deviations) / reps
    emp_var = math.fsum((deviations - mean) ** 2) / (reps - 1)

    if dist.kind == "gaussian_std" and spec.kind == "intrinsic" and surrogate.kind == "gaussian_ball":
        zeta, zeta_se, source = zeta1_gaussian_closed_form(dist.d, j)[2], 0.0, "closed_form"
        degenerate = zeta <= 0
    else:
        zr = zeta1_mc(dist, spec, surrogate, zeta1_reps, seed.child(_ZETA), threads=threads)
        zeta, zeta_se, source = zr.zeta1.mean, zr.zeta1.stderr, "monte_carlo"
        degenerate = zr.degenerate
    predicted = (math.factorial(j) * j) ** 2 * zeta
    ks = None
    if not degenerate and predicted > 0:
        ks = float(stats.kstest(deviations, "norm", args=(0.0, math.sqrt(predicted))).statistic)
    return CltReport(
        deviations=deviations,
        empirical_variance=emp_var,
        predicted_variance=predicted,
        ks_statistic=ks,
        n=n,
        reps=reps,
        phi_ZX=phi_zx,
        zeta1=zeta,
        zeta1_stderr=zeta_se,
        zeta1_source=source,
        surrogate=surrogate,
        lemma41=diagnosis,
        degenerate=degenerate,
        j=j,
        variance_rel_tol=variance_rel_tol,
        ks_coefficient=ks_coefficient,
        path=path,
    )


__all__ = [
    "BLOCK",
    "CapacityError",
    "CltReport",
    "EstimateResult",
    "KernelContext",
    "Lemma41Diagnosis",
    "Subsample",
    "Surrogate",
    "Theorem1Report",
    "VitaleReport",
    "Zeta1Result",
    "clt_experiment",
    "estimate_expected_valuation_Zp",
    "expected_valuation_discrete_exact",
    "gaussian_radius_oracle",
    "h1",
    "kernel_h",
    "lemma41_precheck",
    "surrogate_for",
    "theorem1_factor",
    "theorem1_prediction",
    "u_statistic",
    "valuation_of_Zn_via_ustat",
    "verify_theorem1",
    "vitale_check",
    "zeta1_gaussian_closed_form",
    "zeta1_mc",
]
