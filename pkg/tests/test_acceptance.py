"""Acceptance suite: one test per criterion, each printing a pass/fail line
with its runtime against the stated budget.  Tolerances are pinned here."""

import math
import time

import numpy as np

RNG_SEED = 20240810


class Criterion:
    def __init__(self, name: str, budget_s: float):
        self.name = name
        self.budget = budget_s
        self.t0 = time.time()

    def done(self, ok: bool, detail: str = ""):
        elapsed = time.time() - self.t0
        status = "PASS" if ok and elapsed < self.budget else "FAIL"
        print(f"[{status}] {self.name}: {detail} ({elapsed:.1f}s / budget {self.budget:.0f}s)")
        assert ok, detail
        assert elapsed < self.budget, f"budget exceeded: {elapsed:.1f}s >= {self.budget}s"


def test_haar_moment_cross_check():
    crit = Criterion("Haar moment cross-check (d in {2,4,8}, 1e-10)", 10)
    from pseudoq.haar_moments import ghat_closed_form, ghat_from_gram_route

    worst = 0.0
    for d in (2, 4, 8):
        err = float(np.max(np.abs(ghat_closed_form(d, 2).entries - ghat_from_gram_route(d, 2).entries)))
        worst = max(worst, err)
    crit.done(worst < 1e-10, f"max entry error {worst:.2e}")


def test_exact_two_design():
    crit = Criterion("Exact 2-design: exhaustive n=1 Clifford ensemble", 1)
    from pseudoq.clifford import enumerate_group
    from pseudoq.haar_moments import EnsembleSpec, TableauDescriptor, design_distance

    ens = EnsembleSpec.uniform([TableauDescriptor(t) for t in enumerate_group(1)])
    dist = design_distance(ens, 2, "OPNORM")
    crit.done(dist < 1e-9, f"OPNORM distance {dist:.2e}")


def test_zero_chain_stationary_and_gap_band():
    crit = Criterion("Zero chain: stationary residual (n in 2..512) + n*gap band", 60)
    from pseudoq.chains import gap_scan, zero_chain, zero_stationary

    worst_res = 0.0
    for n in range(2, 513):
        pi = zero_stationary(n)
        res = float(np.max(np.abs(pi @ zero_chain(n).P - pi)))
        worst_res = max(worst_res, res)
    rows = gap_scan([64, 91, 128, 181, 256, 362, 512])
    ngaps = [r[2] for r in rows]
    band_ok = max(ngaps) / min(ngaps) < 1.1 / 0.9  # within +/-10% of the band center
    crit.done(
        worst_res < 1e-12 and band_ok,
        f"residual {worst_res:.2e}; n*gap in [{min(ngaps):.4f}, {max(ngaps):.4f}]",
    )


def test_lumpability():
    crit = Criterion("Lumpability: full diagonal chain lumps exactly (n in 2..4)", 30)
    from pseudoq.chains import lumpability_check

    worst = max(lumpability_check(n) for n in (2, 3, 4))
    crit.done(worst < 1e-12, f"max lumping error {worst:.2e}")


def test_mixing_scaling():
    crit = Criterion("Mixing scaling: tau(0.01)/(n ln n) band (n in 16..256)", 120)
    from pseudoq.chains import mixing_scan

    rows = mixing_scan([16, 32, 64, 128, 256], 0.01)
    ratios = [r[2] for r in rows]
    band_ok = max(ratios) / min(ratios) < 1.15 / 0.85  # within +/-15% of the band center
    crit.done(band_ok, f"tau/(n ln n) in [{min(ratios):.3f}, {max(ratios):.3f}]")


def test_circuit_convergence():
    crit = Criterion("Circuit convergence: exact k=2 at n=3", 60)
    from pseudoq.random_circuit import CircuitModel, exact_opnorm_distances

    lengths = list(range(0, 201))
    dists = exact_opnorm_distances(CircuitModel(3), lengths)
    monotone = all(dists[i + 1] <= dists[i] + 1e-15 for i in range(5, len(dists) - 1))
    crit.done(
        dists[200] < 0.01 and monotone,
        f"distance at 200: {dists[200]:.2e}; monotone after 5: {monotone}",
    )


def test_tpe_two_path_agreement():
    crit = Criterion("TPE two-path agreement + proven bound", 120)
    from pseudoq.tpe import lambda_A, lambda_A_bound

    r16 = lambda_A(16, 1, method="restricted")
    d16 = lambda_A(16, 1, method="dense")
    err1 = abs(r16.lam - d16.lam)
    r8 = lambda_A(8, 2, method="restricted")
    d8 = lambda_A(8, 2, method="dense")
    err2 = abs(r8.lam - d8.lam)
    bound_ok = all(lambda_A(N, 1).lam <= lambda_A_bound(N, 1) for N in (2048, 4096))
    crit.done(
        err1 < 1e-9 and err2 < 1e-7 and bound_ok,
        f"(N=16,k=1) err {err1:.1e}; (N=8,k=2) err {err2:.1e} (lam={r8.lam:.6f}); bound ok {bound_ok}",
    )


def test_mobius_suite():
    crit = Criterion("Mobius suite: inverse (m<=6), |mu| sums (m<=8), Stirling (N=16)", 30)
    from pseudoq.partitions import (
        coarsenings,
        mobius,
        mobius_matrix,
        partitions,
        stirling_relation_check,
        zeta_matrix,
    )

    ok = True
    for m in range(2, 7):
        parts = partitions(m)
        z = np.array(zeta_matrix(parts), dtype=np.int64)
        mu = np.array(mobius_matrix(parts), dtype=np.int64)
        ok &= bool(np.array_equal(z @ mu, np.eye(len(parts), dtype=np.int64)))
    for m in range(2, 9):
        for p in partitions(m):
            if sum(abs(mobius(p, q)) for q in coarsenings(p)) != math.factorial(p.size):
                ok = False
    for m in range(2, 7):
        ok &= stirling_relation_check(m, 16)
    crit.done(ok, "matrix inverse, factorial sums and Stirling relation all exact")


def test_purity_bracket():
    crit = Criterion("Purity: Clifford n=4, d_S=4, 1e4 samples brackets 8/17", 60)
    from pseudoq.concentration import purity_experiment

    mean, err = purity_experiment(4, 4, 10_000, "clifford", seed=RNG_SEED)
    dev = abs(mean - 8 / 17)
    crit.done(dev <= 4 * err, f"mean {mean:.5f} vs 8/17={8/17:.5f} ({dev/max(err,1e-12):.1f} sigma)")


def test_bound_falsification_suite():
    crit = Criterion("Bound falsification: purity tail, overlap d=16, thermalization d_R=256", 600)
    from pseudoq.concentration import (
        clopper_pearson_lower,
        overlap_experiment,
        overlap_tail_bound,
        partial_trace_sys,
        purity_tail_bound,
        purity_tail_experiment,
        thermalization_bound,
        thermalization_experiment,
        thermalization_haar_bound,
    )

    details = []
    ok = True

    # purity tail (Haar states are an exact design: eps=0, any feasible m)
    samples = 20_000
    for delta in (0.2, 0.35):
        freq = purity_tail_experiment(16, 4, delta, samples, seed=RNG_SEED + 1)
        bound = purity_tail_bound(16, delta, 8, 0.0, 2).value
        lower = clopper_pearson_lower(int(round(freq * samples)), samples)
        ok &= bound >= lower
        details.append(f"purity(d=0.{int(delta*100)}): emp {freq:.1e} <= bound {bound:.1e}")

    # state overlap, d=16, one million samples
    samples = 1_000_000
    for m in (1, 2, 3):
        for level in (0.2, 0.4):
            freq = overlap_experiment(16, level, samples, seed=RNG_SEED + m)
            bound = overlap_tail_bound(16, 3, m, 0.0, level).value
            lower = clopper_pearson_lower(int(round(freq * samples)), samples)
            ok &= bound >= lower
    details.append("overlap m in {1,2,3} ok")

    # small-universe thermalization: full 256-dim universe, d_S = 2
    d_S, d_R = 2, 256
    d_E = d_R // d_S
    basis = np.eye(d_R)
    omega_E = partial_trace_sys(np.eye(d_R) / d_R, d_S, d_E)
    samples = 2_000
    for eps in (0.6, 1.3):
        thr, haar_bound = thermalization_haar_bound(d_S, d_R, eps, omega_E)
        freq = thermalization_experiment(d_S, d_E, basis, thr, samples, seed=RNG_SEED + 5)
        lower = clopper_pearson_lower(int(round(freq * samples)), samples)
        ok &= haar_bound >= lower
        design = thermalization_bound(d_S, d_R, 8, 0.0, thr).value
        ok &= design >= lower
        details.append(f"thermal(eps={eps}): emp {freq:.1e} <= haar {haar_bound:.2f}")

    crit.done(ok, "; ".join(details))


def test_clifford_learning_bulk():
    crit = Criterion("Clifford learning: 1e3 tableaux per n in 2..8, exact + counters", 60)
    from pseudoq.clifford import sample_uniform
    from pseudoq.learning import AdjointView, TableauOracle, distance, distance_tableaux, learn_clifford

    rng = np.random.default_rng(RNG_SEED)
    trials = 1000
    failures = 0
    worst_d = 0.0
    for n in range(2, 9):
        for t in range(trials):
            tab = sample_uniform(n, rng)
            oc = TableauOracle(tab)
            got = learn_clifford(oc, AdjointView(oc), n)
            exact = got == tab and oc.queries == (2 * n + 1, 2 * n)
            failures += not exact
            # D = 0 exactly for equal tableaux (identical conjugation action);
            # dense spot-check at small n ties the identity to the matrix level
            d = distance_tableaux(got, tab).value
            if n <= 4 and t < 25:
                d = max(d, 0.0 if got == tab else distance(got.to_unitary(), tab.to_unitary()).value)
            worst_d = max(worst_d, d)
    crit.done(failures == 0 and worst_d < 1e-9, f"failures {failures}/7000; worst D {worst_d:.1e}")


def test_pauli_learning_bulk():
    crit = Criterion("Pauli learning: deterministic 1-query, 1e3 trials, n <= 10", 10)
    from pseudoq.learning import PauliOracle, learn_pauli
    from pseudoq.pauli import PauliString

    rng = np.random.default_rng(RNG_SEED + 1)
    failures = 0
    for _ in range(1000):
        n = int(rng.integers(1, 11))
        p = PauliString.from_index(n, int(rng.integers(4**n)))
        oc = PauliOracle(p)
        got = learn_pauli(oc, n)
        if (got.x_mask, got.z_mask) != (p.x_mask, p.z_mask) or oc.queries != (1, 0):
            failures += 1
    crit.done(failures == 0, f"failures {failures}/1000")


def test_c3_learning():
    crit = Criterion("C3 learning at n in {1,2}: recovery + exact counters", 60)
    from pseudoq.clifford import sample_uniform
    from pseudoq.learning import AdjointView, DenseOracle, distance, learn_ck

    rng = np.random.default_rng(RNG_SEED + 2)
    t_gate = np.diag([1.0, np.exp(1j * np.pi / 4)])
    ok = True
    detail = []
    for n in (1, 2):
        t_expect = ((2 * n) ** 3 - 1) // (2 * n - 1)
        tp_expect = (2 * n) ** 2
        worst = 0.0
        for _ in range(10):
            c = sample_uniform(n, rng).to_unitary()
            layer = t_gate
            for _ in range(n - 1):
                layer = np.kron(layer, np.eye(2))
            u = c @ layer
            oc = DenseOracle(u)
            desc = learn_ck(oc, AdjointView(oc), 3, n)
            d = distance(desc.to_unitary(), u).value
            worst = max(worst, d)
            ok &= d < 1e-6 and oc.queries == (t_expect, tp_expect)
        detail.append(f"n={n}: counters ({t_expect},{tp_expect}), worst D {worst:.1e}")
    crit.done(ok, "; ".join(detail))


def test_clifford_testing_promise():
    crit = Criterion("Clifford testing: 200 CLOSE + 200 FAR trials at eps=0.3, delta=0.05", 600)
    from pseudoq.clifford import sample_uniform
    from pseudoq.learning import AdjointView, DenseOracle, closest_clifford_distance
    from pseudoq.learning import test_clifford as clifford_property_test

    rng = np.random.default_rng(RNG_SEED + 3)
    eps, delta, trials = 0.3, 0.05, 200

    close_correct = 0
    for _ in range(trials):
        c = sample_uniform(2, rng).to_unitary()
        oc = DenseOracle(c)
        close_correct += clifford_property_test(oc, AdjointView(oc), eps, delta, rng) == "CLOSE"

    def far_instance(c):
        def candidate(theta):
            return c @ np.kron(np.diag([1.0, np.exp(1j * theta)]), np.eye(2))

        lo, hi = 0.0, math.pi / 2
        for _ in range(30):
            mid = (lo + hi) / 2
            if closest_clifford_distance(candidate(mid), 2) <= eps:
                lo = mid
            else:
                hi = mid
        for scale in (1.01, 1.02, 1.05):
            u = candidate(hi * scale)
            d = closest_clifford_distance(u, 2)
            if eps < d < 1 / 3:
                return u
        return None

    far_correct = 0
    far_total = 0
    while far_total < trials:
        c = sample_uniform(2, rng).to_unitary()
        u = far_instance(c)
        if u is None:
            continue
        far_total += 1
        oc = DenseOracle(u)
        far_correct += clifford_property_test(oc, AdjointView(oc), eps, delta, rng) == "FAR"

    ok = close_correct >= 0.95 * trials and far_correct >= 0.95 * trials
    crit.done(ok, f"CLOSE {close_correct}/{trials}, FAR {far_correct}/{trials}")
