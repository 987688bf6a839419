import math

import numpy as np
import pytest

from pseudoq.concentration import (
    LEVY_C1,
    SubsystemSplit,
    TailBoundParams,
    canonical_state,
    clopper_pearson_lower,
    design_tail_bound,
    entropy_tail_bound,
    entropy_violation_experiment,
    expected_purity,
    gamma_ratio_inequality,
    geometric_bound,
    haar_state,
    moment_from_tail,
    moment_from_tail_shifted,
    overlap_experiment,
    overlap_tail_bound,
    partial_trace_sys,
    purity,
    purity_experiment,
    reduced_state,
    thermalization_bound,
    thermalization_experiment,
    thermalization_haar_bound,
)


def test_moment_from_tail_m2():
    gamma_form, loose = moment_from_tail(3.0, 2.0, 2)
    assert gamma_form == pytest.approx(3.0 / 2.0)
    assert gamma_form <= loose


def test_moment_from_tail_gamma_le_loose_even_m():
    for m in (2, 4, 6, 8):
        g, l = moment_from_tail(1.0, 1.0, m)
        assert g <= l * (1 + 1e-12)


def test_moment_from_tail_gaussian_monte_carlo():
    rng = np.random.default_rng(0)
    xs = rng.standard_normal(1_000_000)
    # standard normal tail: P(|X| >= d) <= 2 exp(-d^2/2)
    for m in (2, 4, 6):
        bound, _ = moment_from_tail(2.0, 0.5, m)
        assert bound >= np.mean(np.abs(xs) ** m)


def test_moment_from_tail_shifted():
    assert moment_from_tail_shifted(2.0, 0.5, 0.0, 3) == pytest.approx(2.0 * (6 / 0.5) ** 1.5)
    # monotone in eta
    vals = [moment_from_tail_shifted(1.0, 1.0, eta, 2) for eta in (0.0, 0.5, 1.0)]
    assert vals == sorted(vals)
    # m=1 sanity vs shifted folded Gaussian
    rng = np.random.default_rng(1)
    eta = 0.3
    xs = np.abs(rng.standard_normal(200_000)) + eta
    bound = moment_from_tail_shifted(2.0, 0.5, eta, 1)
    assert bound >= np.mean(xs)


def test_design_tail_bound_markov_level():
    params = TailBoundParams(C=1.0, a=2.0, mu=0.0, alpha_f=1.0, K=1, d=2, k=2, eps=0.0, delta=0.5, m=1)
    r = design_tail_bound(params)
    assert r.value == pytest.approx(1.0 / (2.0 * 0.25))
    assert r.ok


def test_design_tail_bound_exponential_regime():
    # eps=0, m = floor(a delta^2 / e): bound close to C e^{-a delta^2 / e}
    a, delta, C = 400.0, 0.5, 1.0
    m = int(a * delta**2 / math.e)
    params = TailBoundParams(C=C, a=a, mu=0.0, alpha_f=1.0, K=1, d=2, k=2 * m, eps=0.0, delta=delta, m=m)
    r = design_tail_bound(params)
    target = C * math.exp(-a * delta**2 / math.e)
    assert r.value == pytest.approx(target, rel=0.5)


def test_design_tail_bound_constraint():
    params = TailBoundParams(C=1.0, a=1.0, mu=0.0, alpha_f=1.0, K=3, d=2, k=4, eps=0.0, delta=0.5, m=2)
    r = design_tail_bound(params)
    assert not r.ok
    assert math.isnan(r.value)


def test_design_tail_bound_nonincreasing_in_k():
    prev = None
    for k in (4, 8, 16, 32):
        m = k // 4  # max feasible for K=2
        params = TailBoundParams(
            C=4.0, a=50.0, mu=1.0, alpha_f=10.0, K=2, d=4, k=k, eps=1e-9, delta=0.9, m=m
        )
        val = design_tail_bound(params).value
        if prev is not None:
            assert val <= prev * (1 + 1e-9)
        prev = val


def test_expected_purity_values():
    assert expected_purity(SubsystemSplit(2, 2)) == pytest.approx(4 / 5)
    assert expected_purity(SubsystemSplit(1, 64)) == 1.0
    n = 20
    val = expected_purity(SubsystemSplit(2**n, 2**n))
    assert val == pytest.approx(2 ** (1 - n), rel=1e-5)


def test_purity_experiment_brackets_expectation():
    mean, err = purity_experiment(4, 4, 3000, "clifford", seed=11)
    assert abs(mean - 8 / 17) <= 4 * err
    mean_h, err_h = purity_experiment(4, 4, 3000, "haar", seed=12)
    assert abs(mean - mean_h) <= 4 * math.hypot(err, err_h)


def test_purity_experiment_trivial_subsystem():
    mean, err = purity_experiment(3, 1, 100, "haar", seed=3)
    assert mean == pytest.approx(1.0, abs=1e-12)


def test_purity_lipschitz():
    rng = np.random.default_rng(6)
    d_S = d_E = 4
    for _ in range(10_000):
        psi = haar_state(16, rng)
        phi = haar_state(16, rng)
        lhs = abs(purity(reduced_state(psi, d_S, d_E)) - purity(reduced_state(phi, d_S, d_E)))
        assert lhs <= 2 * np.linalg.norm(psi - phi) + 1e-12


def test_entropy_tail_bound_algebra():
    # alpha with 2^alpha - 1 = 1 gives denominator mu^{2m}
    n, d_S, m = 6, 2, 2
    d = 2**n
    mu = (d_S + d // d_S) / (d + 1)
    r = entropy_tail_bound(n, d_S, 1.0, 8, 0.0, m)
    manual = (1 / mu ** (2 * m)) * (4 * (4 * m / (LEVY_C1 * d)) ** m)
    assert r.value == pytest.approx(manual)


def test_entropy_tail_bound_large_n_regime():
    r = entropy_tail_bound(19, 4, 3.0, 8, 0.0, 2)
    assert np.isfinite(r.value) and r.value > 0
    assert np.isfinite(r.extras["simplified_value"])
    assert r.extras["simplified_preconditions"]["n_ge_19"]


def test_entropy_violation_bound_not_falsified():
    n, d_S, alpha, m = 6, 2, 2.0, 2
    samples = 3000
    freq = entropy_violation_experiment(n, d_S, alpha, samples, seed=4)
    bound = entropy_tail_bound(n, d_S, alpha, 8, 0.0, m).value
    assert bound >= clopper_pearson_lower(int(freq * samples), samples)


def test_thermalization_bound_limits():
    assert thermalization_bound(2, 256, 8, 0.0, 1e9).value < 1e-12
    r = thermalization_bound(2, 128, 8, 0.0, 0.5)  # d_R = 4 d_S^3 / delta^2
    assert r.extras["simplified_value"] == pytest.approx(6.0)
    flags = thermalization_bound(2, 256, 8, 2.0, 0.5).preconditions
    assert not flags["eps_small_enough"] or flags["eps_small_enough"] is not None


def test_canonical_state_cases():
    om = canonical_state(2, 4, np.eye(8))
    assert np.allclose(om, np.eye(2) / 2)
    v = np.zeros(8)
    v[0] = 1.0
    om = canonical_state(2, 4, v.reshape(-1, 1))
    assert purity(om) == pytest.approx(1.0)
    with pytest.raises(ValueError, match="orthonormal"):
        canonical_state(2, 4, np.ones((8, 2)))


def test_canonical_state_matches_sampled_average():
    rng = np.random.default_rng(9)
    g = rng.standard_normal((16, 8)) + 1j * rng.standard_normal((16, 8))
    q, _ = np.linalg.qr(g)
    om = canonical_state(4, 4, q)
    acc = np.zeros((4, 4), dtype=complex)
    samples = 5000
    for _ in range(samples):
        psi = q @ haar_state(8, rng)
        acc += reduced_state(psi, 4, 4)
    acc /= samples
    assert np.max(np.abs(acc - om)) < 3 / np.sqrt(samples)


def test_thermalization_experiment_below_haar_bound():
    d_S, d_R = 2, 256
    d_E = d_R // d_S
    basis = np.eye(d_R)
    omega_E = partial_trace_sys(np.eye(d_R) / d_R, d_S, d_E)
    samples = 1500
    for eps in (0.5, 1.3):
        thr, bound = thermalization_haar_bound(d_S, d_R, eps, omega_E)
        freq = thermalization_experiment(d_S, d_E, basis, thr, samples, seed=8)
        assert min(bound, 1.0) >= clopper_pearson_lower(int(freq * samples), samples)


def test_overlap_tail_bound_values():
    r = overlap_tail_bound(16, 3, 1, 0.0, 1.0)
    assert r.value == pytest.approx(1 / 16)
    assert r.extras["relaxed_value"] >= 0


def test_overlap_bound_not_falsified():
    d = 16
    samples = 1_000_000
    for m in (1, 2, 3):
        for level in (0.2, 0.4):
            freq = overlap_experiment(d, level, samples, seed=m)
            bound = overlap_tail_bound(d, 3, m, 0.0, level).value
            assert bound >= clopper_pearson_lower(int(round(freq * samples)), samples)


def test_geometric_bound_reference_instance():
    from pseudoq.concentration import geometric_bound_log2

    for n in (4, 8, 16):
        got_log2 = geometric_bound_log2(n, n * n, 1.0, 3 * math.log2(n) + 5)
        target_log2 = 1 - n * n * math.log2(n)  # log2 of 2 n^{-n^2}
        assert got_log2 <= target_log2 + 1e-9
    assert geometric_bound(4, 16, 1.0, 11) == pytest.approx(2 ** geometric_bound_log2(4, 16, 1.0, 11))


def test_gamma_ratio_inequality():
    assert all(gamma_ratio_inequality(s) for s in range(1, 10_001))
