import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from randzono.core import (
    CapacityError,
    DomainError,
    ValuationSpec,
    Zonotope,
    ball_intrinsic_volume,
    kappa,
    ustat_scaling,
    valuation,
)
from randzono.distributions import (
    GAUSSIAN_ZONOID_RADIUS as R,
    DistributionSpec,
    SeedSpec,
    gaussian_norm_moments,
    sample,
    zonoid_exact_discrete,
)
from randzono.estimators import (
    EstimateResult,
    KernelContext,
    Subsample,
    clt_experiment,
    estimate_expected_valuation_Zp,
    expected_valuation_discrete_exact,
    h1,
    kernel_h,
    lemma41_precheck,
    random_subsets,
    surrogate_for,
    theorem1_factor,
    theorem1_prediction,
    u_statistic,
    valuation_of_Zn_via_ustat,
    verify_theorem1,
    zeta1_gaussian_closed_form,
    zeta1_mc,
)

V = ValuationSpec.intrinsic
E1E2 = DistributionSpec.discrete([[1, 0], [0, 1]])
GAUSS2 = DistributionSpec.gaussian(2)


def test_estimate_result_stderr():
    r = EstimateResult.from_values([1.0, 2.0, 3.0, 4.0])
    assert r.mean == 2.5
    assert r.stderr == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)
    with pytest.raises(DomainError):
        EstimateResult.from_values([1.0])
    assert EstimateResult(1.0, 0.0, 5).z_score(1.0) == 0.0
    assert EstimateResult(1.0, 0.0, 5).z_score(0.5) == math.inf


# ---------------------------------------------------------------- kernels


def test_kernel_h_examples():
    assert kernel_h(KernelContext(V(2), 2), [[1, 0], [0, 1]]) == pytest.approx(1.0)
    assert kernel_h(KernelContext(V(2), 3), [[1, 0], [0, 1], [1, 1]]) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        KernelContext(V(3), 2)
    with pytest.raises(DomainError):
        kernel_h(KernelContext(V(2), 3), [[1, 0], [0, 1]])


def test_u_statistic_exact_by_hand():
    X = np.array([[1.0, 0.2], [-0.5, 2.0], [0.3, -1.0], [2.0, 2.0]])
    dets = [abs(np.linalg.det(np.array([X[a], X[b]]))) for a, b in itertools.combinations(range(4), 2)]
    assert u_statistic(KernelContext(V(2), 2), X) == pytest.approx(sum(dets) / 6, rel=1e-13)
    assert u_statistic(KernelContext(V(2), 4), X) == pytest.approx(kernel_h(KernelContext(V(2), 4), X))
    with pytest.raises(DomainError):
        u_statistic(KernelContext(V(2), 5), X)


def test_u_statistic_budget():
    X = np.random.default_rng(0).standard_normal((30, 3))
    with pytest.raises(CapacityError):
        u_statistic(KernelContext(V(2), 5), X, budget=10**4)


def test_subsampled_u_statistic_is_unbiased():
    X = np.random.default_rng(1).standard_normal((10, 2))
    ctx = KernelContext(V(2), 3)
    exact = u_statistic(ctx, X)
    all_h = [kernel_h(ctx, X[list(c)]) for c in itertools.combinations(range(10), 3)]
    m = 20000
    est = u_statistic(ctx, X, Subsample(m, SeedSpec(5)))
    assert abs(est - exact) < 4 * np.std(all_h) / math.sqrt(m)
    assert est == u_statistic(ctx, X, Subsample(m, SeedSpec(5)))


def test_random_subsets_uniform():
    idx = random_subsets(np.random.default_rng(2), 7, 3, 70000)
    assert np.all(np.diff(idx, axis=1) > 0)
    counts = np.bincount(idx.ravel(), minlength=7) / 70000
    np.testing.assert_allclose(counts, 3 / 7, atol=0.01)
    pairs = {tuple(r) for r in idx[:5000]}
    assert len(pairs) == math.comb(7, 3)


def test_valuation_via_ustat_agrees_for_all_p():
    X = np.random.default_rng(3).standard_normal((8, 3))
    direct = valuation(Zonotope(X, 1 / 8), V(2))
    for p in range(2, 9):
        assert valuation_of_Zn_via_ustat(KernelContext(V(2), p), X) == pytest.approx(direct, rel=1e-10)
    whole = kernel_h(KernelContext(V(2), 8), X) / 8**2
    assert valuation_of_Zn_via_ustat(KernelContext(V(2), 8), X) == pytest.approx(whole, rel=1e-14)
    assert valuation_of_Zn_via_ustat(KernelContext(V(3), 3), X[:2]) == 0.0


def test_valuation_via_ustat_mixed():
    X = np.random.default_rng(4).standard_normal((7, 3))
    spec = ValuationSpec.mixed(2, [[0.2, -1.0, 0.4]])
    direct = valuation(Zonotope(X, 1 / 7), spec)
    for p in range(2, 8):
        assert valuation_of_Zn_via_ustat(KernelContext(spec, p), X) == pytest.approx(direct, rel=1e-10)


# ---------------------------------------------------------------- expectation of phi(Z_p)


@pytest.mark.parametrize("j,p,factor", [(1, 1, 1), (1, 5, 1), (2, 2, Fraction(1, 2)), (2, 3, Fraction(2, 3)), (3, 3, Fraction(2, 9))])
def test_theorem1_factor(j, p, factor):
    assert theorem1_factor(j, p) == factor
    assert theorem1_prediction(3.0, j, p) == pytest.approx(3.0 * float(factor))


def test_theorem1_factor_domain():
    with pytest.raises(DomainError):
        theorem1_factor(3, 2)


@pytest.mark.parametrize("j,p", [(j, p) for p in range(1, 5) for j in range(1, p + 1)])
def test_prediction_factor_limit(j, p):
    exact = ustat_scaling(10**6, j, p)
    limit = Fraction(math.factorial(p - j), math.factorial(p))
    assert abs(exact / limit - 1) < Fraction(1, 10**4)


def test_discrete_brute_force_expectation():
    # four equiprobable outcome pairs; only the mixed ones give area 1/4
    total = Fraction(0)
    for a, b in itertools.product([(1, 0), (0, 1)], repeat=2):
        area = Fraction(abs(a[0] * b[1] - a[1] * b[0]), 4)
        total += Fraction(1, 4) * area
    assert total == Fraction(1, 8)
    assert expected_valuation_discrete_exact(E1E2, V(2), 2) == 0.125
    phi_zx = valuation(zonoid_exact_discrete(E1E2), V(2))
    assert abs(theorem1_prediction(phi_zx, 2, 2) - 0.125) < 1e-14


def test_discrete_exact_expectation_matches_theorem1_generally():
    spec = DistributionSpec.discrete([[1, 0, 0], [0.5, 1, 0], [0, -1, 2], [0, 0, 0]], [0.1, 0.2, 0.3, 0.4])
    Z = zonoid_exact_discrete(spec)
    for j in (1, 2, 3):
        for p in range(j, 5):
            exact = expected_valuation_discrete_exact(spec, V(j), p)
            assert exact == pytest.approx(theorem1_prediction(valuation(Z, V(j)), j, p), rel=1e-12)


def test_estimate_discrete_mc():
    est = estimate_expected_valuation_Zp(E1E2, KernelContext(V(2), 2), 10**5, SeedSpec(10))
    assert abs(est.mean - 0.125) < 3 * est.stderr


def test_estimate_single_atom_has_zero_variance():
    a = [1.5, -0.5]
    est = estimate_expected_valuation_Zp(DistributionSpec.discrete([a]), KernelContext(V(1), 3), 100, SeedSpec(1))
    assert est.stderr == 0.0
    assert est.mean == pytest.approx(np.linalg.norm(a), rel=1e-15)


def test_estimate_gaussian_j1():
    est = estimate_expected_valuation_Zp(GAUSS2, KernelContext(V(1), 3), 10**5, SeedSpec(12))
    assert abs(est.mean - ball_intrinsic_volume(2, 1, R)) < 3 * est.stderr


def test_estimate_independent_of_threads():
    ctx = KernelContext(V(2), 3)
    a = estimate_expected_valuation_Zp(GAUSS2, ctx, 20000, SeedSpec(3))
    b = estimate_expected_valuation_Zp(GAUSS2, ctx, 20000, SeedSpec(3), threads=3)
    assert a == b


def test_verify_theorem1_discrete():
    rep = verify_theorem1(E1E2, V(2), 2, 10**5, SeedSpec(13))
    assert rep.prediction == 0.125
    assert abs(rep.z_score) < 3
    assert rep.surrogate.kind == "exact_discrete"


def test_verify_theorem1_j1_consistent_across_p():
    cube = DistributionSpec("uniform_cube", 2, radius=1.0)
    means = []
    for p in (1, 2, 4):
        rep = verify_theorem1(cube, V(1), p, 40000, SeedSpec(14 + p))
        means.append(rep.estimate)
        assert rep.surrogate.kind == "empirical"
    for a, b in itertools.combinations(means, 2):
        assert abs(a.mean - b.mean) < 3 * math.hypot(a.stderr, b.stderr)


def test_verify_theorem1_mixed_gaussian():
    spec = ValuationSpec.mixed(2, [[0.0, 0.0, 1.0]])
    rep = verify_theorem1(DistributionSpec.gaussian(3), spec, 3, 10**5, SeedSpec(15))
    assert abs(rep.z_score) < 4


# ---------------------------------------------------------------- h1 and zeta1


def test_h1_at_origin_vanishes():
    for sur in (surrogate_for(GAUSS2), surrogate_for(E1E2)):
        assert h1(V(1), [0.0, 0.0], sur) == 0.0
        assert h1(V(2), [0.0, 0.0], sur) == 0.0


def test_h1_discrete_example():
    assert h1(V(2), [1.0, 1.0], zonoid_exact_discrete(E1E2)) == pytest.approx(1.0)


@pytest.mark.parametrize("d,j", [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2)])
def test_h1_gaussian_formula(d, j):
    x = np.linspace(0.3, 1.7, d)
    a = math.factorial(d - 1) / math.factorial(d - j) * kappa(d - 1) / kappa(d - j) * R ** (j - 1)
    assert h1(V(j), x, surrogate_for(DistributionSpec.gaussian(d))) == pytest.approx(a * np.linalg.norm(x), rel=1e-13)


@pytest.mark.parametrize("d,j", [(2, 2), (3, 2)])
def test_h1_ball_path_matches_empirical_zonoid(d, j):
    dist = DistributionSpec.gaussian(d)
    emp = surrogate_for(dist, SeedSpec(16), kind="empirical", n_empirical=2 * 10**5)
    x = np.array([[0.5] + [1.0] * (d - 1), [-2.0] + [0.1] * (d - 1)])
    np.testing.assert_allclose(h1(V(j), x, emp), h1(V(j), x, surrogate_for(dist)), rtol=0.01)


def test_h1_accepts_zonotope_and_surrogate():
    Z = zonoid_exact_discrete(E1E2)
    x = np.array([[1.0, 2.0], [0.5, -1.0]])
    np.testing.assert_array_equal(h1(V(2), x, Z), h1(V(2), x, surrogate_for(E1E2)))


def test_zeta1_closed_form_examples():
    a, b, z = zeta1_gaussian_closed_form(2, 1)
    assert a == 1.0
    assert b == pytest.approx(math.pi * R, rel=1e-15)
    assert z == pytest.approx(2 - 2 * b * gaussian_norm_moments(2)[0] + b * b, rel=1e-14)
    assert z == pytest.approx(2 - math.pi / 2, rel=1e-12)
    for d in range(1, 8):
        assert zeta1_gaussian_closed_form(d, 1)[0] == pytest.approx(1.0, rel=1e-15)
        for j in range(1, d + 1):
            a, b, z = zeta1_gaussian_closed_form(d, j)
            m1, m2 = gaussian_norm_moments(d)
            assert b == pytest.approx(m1, rel=1e-13)
            assert z == pytest.approx(a * a * (m2 - m1 * m1), rel=1e-9)


def test_zeta1_mc_gaussian_d2_j1():
    res = zeta1_mc(GAUSS2, V(1), surrogate_for(GAUSS2), 2 * 10**5, SeedSpec(17))
    assert abs(res.zeta1.mean - (2 - math.pi / 2)) < 3 * res.zeta1.stderr
    assert abs(res.centering.mean) < 4 * res.centering.stderr
    assert not res.degenerate


def test_zeta1_mc_discrete_against_enumeration():
    dist = DistributionSpec.discrete([[0, 0], [1, 0], [1, 1], [-1, 2]], [0.1, 0.2, 0.3, 0.4])
    sur = surrogate_for(dist)
    for j in (1, 2):
        theta = math.factorial(j) * sur.phi(V(j))
        exact = sum(p * (h1(V(j), x, sur) - theta) ** 2 for x, p in zip(dist.atoms, dist.probs))
        centre = sum(p * (h1(V(j), x, sur) - theta) for x, p in zip(dist.atoms, dist.probs))
        assert abs(centre) < 1e-12
        res = zeta1_mc(dist, V(j), sur, 10**5, SeedSpec(18 + j))
        assert abs(res.zeta1.mean - exact) < 4 * res.zeta1.stderr
        assert abs(res.centering.mean) < 4 * res.centering.stderr


def test_zeta1_single_atom_at_origin_is_degenerate():
    dist = DistributionSpec.discrete([[0.0, 0.0]])
    res = zeta1_mc(dist, V(1), surrogate_for(dist), 100, SeedSpec(0))
    assert res.theta == 0.0 and res.zeta1.mean == 0.0
    assert res.degenerate
    assert not lemma41_precheck(dist, 1).passed


@pytest.mark.parametrize(
    "dist,j",
    [
        (GAUSS2, 1),
        (GAUSS2, 2),
        (DistributionSpec("uniform_cube", 2, radius=1.0), 2),
        (DistributionSpec.discrete([[0, 0], [1, 0], [0, 1]]), 2),
        (DistributionSpec.discrete([[0, 0], [1, 0], [1, 1]], [0.25, 0.25, 0.5]), 1),
    ],
)
def test_variance_positive_when_lemma_holds(dist, j):
    assert lemma41_precheck(dist, j).passed
    sur = surrogate_for(dist, SeedSpec(1), n_empirical=500)
    res = zeta1_mc(dist, V(j), sur, 20000, SeedSpec(19))
    assert res.zeta1.mean - 3 * res.zeta1.stderr > 0
    if dist.kind != "uniform_cube":
        # the empirical surrogate's own sample is not X's law, so centering is only approximate there
        assert abs(res.centering.mean) < 4 * res.centering.stderr


# ---------------------------------------------------------------- support preconditions


def test_lemma41_examples():
    assert lemma41_precheck(DistributionSpec.discrete([[1, 0], [0, 1], [0, 0]]), 2).passed
    diag = lemma41_precheck(DistributionSpec.discrete([[1, 0], [2, 0]]), 2)
    assert not diag.passed
    assert any(r.startswith("rank") for r in diag.reasons)
    for j in (1, 2, 3):
        assert lemma41_precheck(DistributionSpec.gaussian(3), j).passed
    sphere = lemma41_precheck(DistributionSpec("uniform_sphere", 3), 2)
    assert not sphere.passed and sphere.reasons[0].startswith("origin")
    mixed = ValuationSpec.mixed(1, [[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
    assert not lemma41_precheck(DistributionSpec.gaussian(3), 1, mixed).passed


# ---------------------------------------------------------------- CLT


def test_clt_discrete_j1_variance():
    dist = DistributionSpec.discrete([[0, 0], [1, 0], [1, 1]], [0.25, 0.25, 0.5])
    rep = clt_experiment(dist, V(1), 400, 1500, SeedSpec(20), zeta1_reps=10**5)
    assert rep.zeta1_source == "monte_carlo"
    assert abs(rep.variance_ratio - 1) <= rep.variance_tolerance
    assert rep.passed


def test_clt_spec_example_e1e2_is_degenerate_for_j1():
    # |X| = 1 almost surely, so zeta_1 = Var|X| = 0 and every deviation is 0
    rep = clt_experiment(E1E2, V(1), 50, 20, SeedSpec(21), zeta1_reps=1000)
    assert rep.degenerate
    assert not np.any(rep.deviations)


def test_clt_single_atom():
    dist = DistributionSpec.discrete([[1.0, 0.0]])
    rep = clt_experiment(dist, V(1), 37, 30, SeedSpec(22), zeta1_reps=100)
    assert rep.degenerate and not rep.passed
    assert np.all(rep.deviations == 0.0)
    assert rep.ks_statistic is None
    assert rep.zeta1 == 0.0


def test_clt_validation():
    with pytest.raises(DomainError):
        clt_experiment(GAUSS2, V(1), 10, 1, SeedSpec(0))
    with pytest.raises(CapacityError):
        clt_experiment(GAUSS2, V(2), 10**5, 10, SeedSpec(0), budget=10**6)


def test_clt_subsample_path_j2():
    rep = clt_experiment(GAUSS2, V(2), 400, 300, SeedSpec(23), subsample=20000)
    assert rep.path.startswith("subsample")
    # limit variance of the U-statistic form, (j/j!)^2 zeta_1, plus subsampling noise
    assert 0.6 < rep.to_dict()["variance_ratio_ustat"] < 1.6


def test_clt_independent_of_threads():
    a = clt_experiment(GAUSS2, V(1), 100, 64, SeedSpec(24))
    b = clt_experiment(GAUSS2, V(1), 100, 64, SeedSpec(24), threads=4)
    assert a.deviations.tobytes() == b.deviations.tobytes()


def test_strong_law_trajectory():
    # fixed seed; nested prefixes of one sample stream
    X = sample(GAUSS2, 10**4, SeedSpec(2025))
    target = ball_intrinsic_volume(2, 1, R)
    errors = [abs(valuation(Zonotope(X[:n], 1 / n), V(1)) - target) for n in (10, 100, 1000, 10**4)]
    decreasing = sum(b < a for a, b in zip(errors, errors[1:]))
    assert decreasing >= 2
    assert errors[-1] < 5 * math.sqrt(zeta1_gaussian_closed_form(2, 1)[2] / 10**4)
