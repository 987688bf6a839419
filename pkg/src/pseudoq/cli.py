"""Command-line front end: every experiment as a subcommand with seeded
reproducibility, CSV/JSON emission and a run manifest per invocation.

Exit codes: 0 success, 2 precondition/promise violation, 1 internal error,
64 usage error.  PSEUDOQ_THREADS caps the worker count of parallel scans.
"""

from __future__ import annotations

import argparse
import concurrent.futures as cf
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._rng import stream, stream_seed

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PRECONDITION = 2
EXIT_USAGE = 64

FLOAT_FMT = "%.17g"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return FLOAT_FMT % value
    return str(value)


def worker_count() -> int:
    cap = os.environ.get("PSEUDOQ_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


class Run:
    """Output directory handling plus the manifest written next to each CSV."""

    def __init__(self, args, subcommand: str):
        self.subcommand = subcommand
        self.seed = args.seed
        self.fmt = args.format
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.params = {
            k: v for k, v in sorted(vars(args).items()) if k not in ("func",)
        }
        self.outputs = []

    def rng(self, label: str):
        return stream(self.seed, label)

    def write_csv(self, name: str, header, rows) -> Path:
        path = self.out / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        self.outputs.append(str(path))
        return path

    def write_json(self, name: str, obj) -> Path:
        path = self.out / f"{name}.json"
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.outputs.append(str(path))
        return path

    def finish(self) -> None:
        manifest = {
            "subcommand": self.subcommand,
            "parameters": self.params,
            "master_seed": self.seed,
            "tool_version": __version__,
            "float_format": FLOAT_FMT,
            "outputs": sorted(self.outputs),
        }
        with open(self.out / f"{self.subcommand}.manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")


CHAIN_HEADER = ["n", "chain", "gap", "n_times_gap", "tau_eps", "eps"]


def cmd_gap_scan(args) -> int:
    from .chains import accelerated_chain, spectral_gap, zero_chain, zero_stationary

    run = Run(args, "gap-scan")
    ns = _n_grid(args.n_min, args.n_max, args.points)

    def one(n):
        if args.chain == "zero":
            g = spectral_gap(zero_chain(n), zero_stationary(n))
        else:
            g = spectral_gap(accelerated_chain(n))
        return (n, args.chain, g, n * g, "", "")

    with cf.ThreadPoolExecutor(max_workers=worker_count()) as ex:
        rows = list(ex.map(one, ns))
    run.write_csv("gap-scan", CHAIN_HEADER, rows)
    run.finish()
    return EXIT_OK


def cmd_mixing_scan(args) -> int:
    from .chains import mixing_time, spectral_gap, zero_chain, zero_stationary

    run = Run(args, "mixing-scan")
    ns = _n_grid(args.n_min, args.n_max, args.points)

    def one(n):
        c = zero_chain(n)
        pi = zero_stationary(n)
        tau = mixing_time(c, pi, args.eps)
        g = spectral_gap(c, pi)
        return (n, "zero", g, n * g, tau, args.eps)

    with cf.ThreadPoolExecutor(max_workers=worker_count()) as ex:
        rows = list(ex.map(one, ns))
    run.write_csv("mixing-scan", CHAIN_HEADER, rows)
    run.finish()
    return EXIT_OK


def _n_grid(n_min: int, n_max: int, points: int):
    if n_min < 2 or n_max < n_min:
        raise UsageError("need 2 <= n-min <= n-max")
    if points <= 1:
        return [n_min]
    grid = np.unique(
        np.round(np.geomspace(n_min, n_max, points)).astype(int)
    )
    return [int(n) for n in grid]


def cmd_circuit_converge(args) -> int:
    from .random_circuit import CircuitModel, convergence_scan

    run = Run(args, "circuit-converge")
    model = CircuitModel(args.n, args.gate_source)
    lengths = list(range(0, args.max_length + 1, args.step))
    rows = []
    if args.method == "exact":
        scan = convergence_scan(model, 2, lengths, method="exact")
        for t, val, err in scan:
            rows.append((args.n, 2, args.gate_source, t, "OPNORM", val, err, args.seed))
    else:
        scan = convergence_scan(
            model, args.k, lengths, samples=args.samples,
            rng=run.rng("circuit-converge"), method="mc",
        )
        for t, val, err in scan:
            rows.append((args.n, args.k, args.gate_source, t, "OPNORM", val, err, args.seed))
    run.write_csv(
        "circuit-converge",
        ["n", "k", "gate_source", "length", "metric", "value", "stderr", "seed"],
        rows,
    )
    run.finish()
    return EXIT_OK


def cmd_design_check(args) -> int:
    from .clifford import enumerate_group, sample_uniform
    from .haar_moments import EnsembleSpec, TableauDescriptor, design_distance

    run = Run(args, "design-check")
    rows = []
    for metric in ("OPNORM", "TRACE", "MONOMIAL_MAX"):
        if args.ensemble == "clifford-exhaustive":
            if args.n > 2:
                raise PreconditionError("exhaustive Clifford enumeration capped at n=2")
            tabs = list(enumerate_group(args.n))
        else:
            rng = run.rng("design-check")
            tabs = [sample_uniform(args.n, rng) for _ in range(args.samples)]
        ens = EnsembleSpec.uniform([TableauDescriptor(t) for t in tabs])
        val = design_distance(ens, args.k, metric)
        rows.append((args.n, args.k, len(tabs), metric, val, 0.0))
    run.write_csv(
        "design-check",
        ["n", "k", "length_or_size", "metric", "value", "stderr"],
        rows,
    )
    run.finish()
    return EXIT_OK


class PreconditionError(Exception):
    pass


def cmd_tpe_lambda(args) -> int:
    from .tpe import lambda_A, lambda_A_bound

    run = Run(args, "tpe-lambda")
    rows = []
    for method in args.methods.split(","):
        rep = lambda_A(args.N, args.k, method=method.strip())
        b = lambda_A_bound(args.N, args.k)
        rows.append(
            (args.N, args.k, rep.method, rep.lam, "", "", "", b, rep.lam <= b)
        )
    run.write_csv(
        "tpe-lambda",
        ["N", "k", "method", "lambda_A", "lambda_C", "p", "lambda_Q", "bound_rhs", "bound_satisfied"],
        rows,
    )
    run.finish()
    return EXIT_OK


def cmd_tpe_quantum(args) -> int:
    from .haar_moments import EnsembleSpec, PermutationDescriptor
    from .tpe import quantum_tpe_lambda

    run = Run(args, "tpe-quantum")
    rng = run.rng("tpe-quantum")
    perms = [
        PermutationDescriptor(tuple(int(x) for x in rng.permutation(args.N)), args.N)
        for _ in range(args.degree)
    ]
    ens = EnsembleSpec.uniform(perms)
    rep = quantum_tpe_lambda(ens, args.p, args.N, args.k)
    d = rep.details
    rows = [
        (args.N, args.k, rep.method, d["lambda_A"], d["lambda_C"], args.p,
         rep.lam, d["bound_rhs"], d["bound_satisfied"])
    ]
    run.write_csv(
        "tpe-quantum",
        ["N", "k", "method", "lambda_A", "lambda_C", "p", "lambda_Q", "bound_rhs", "bound_satisfied"],
        rows,
    )
    run.finish()
    return EXIT_OK


EXPERIMENT_HEADER = ["experiment", "params", "bound", "empirical_freq", "samples", "seed"]


def cmd_bound_eval(args) -> int:
    from .concentration import (
        SubsystemSplit,
        expected_purity,
        geometric_bound,
        moment_from_tail,
        overlap_tail_bound,
        purity_tail_bound,
        thermalization_bound,
    )

    run = Run(args, "bound-eval")
    rows = []
    gamma_m, loose_m = moment_from_tail(args.C, args.a, args.m)
    rows.append(("moment_from_tail", f"C={args.C};a={args.a};m={args.m}", gamma_m, "", "", ""))
    r = purity_tail_bound(args.d, args.delta, args.k, args.eps, args.m)
    rows.append(
        ("purity_tail", f"d={args.d};delta={args.delta};k={args.k};eps={args.eps};m={args.m}",
         r.value, "", "", "")
    )
    r = overlap_tail_bound(args.d, args.k, args.m, args.eps, args.delta)
    rows.append(
        ("overlap_tail", f"d={args.d};delta={args.delta};k={args.k};eps={args.eps};m={args.m}",
         r.value, "", "", "")
    )
    r = thermalization_bound(args.d_S, args.d_R, args.k, args.eps, args.delta)
    ok = all(r.preconditions.values())
    rows.append(
        ("thermalization", f"d_S={args.d_S};d_R={args.d_R};k={args.k};eps={args.eps};delta={args.delta}",
         r.value, "", "", "")
    )
    rows.append(
        ("thermalization_simplified",
         f"d_S={args.d_S};d_R={args.d_R};k={args.k};preconditions_ok={ok}",
         r.extras["simplified_value"], "", "", "")
    )
    n_qubits = int(math.log2(args.d))
    rows.append(
        ("geometric", f"n={n_qubits};k={args.k};eps={args.eps};delta={args.delta}",
         geometric_bound(max(n_qubits, 2), args.k, args.eps, args.delta), "", "", "")
    )
    rows.append(
        ("expected_purity", f"d_S={args.d_S};d_E={args.d // args.d_S}",
         expected_purity(SubsystemSplit(args.d_S, args.d // args.d_S)), "", "", "")
    )
    run.write_csv("bound-eval", EXPERIMENT_HEADER, rows)
    run.finish()
    return EXIT_OK


def cmd_purity_exp(args) -> int:
    from .concentration import (
        SubsystemSplit,
        expected_purity,
        purity_experiment,
        purity_tail_bound,
        purity_tail_experiment,
    )

    run = Run(args, "purity-exp")
    mean, err = purity_experiment(
        args.n, args.d_S, args.samples, args.ensemble, seed=stream_seed(args.seed, "purity")
    )
    mu = expected_purity(SubsystemSplit(args.d_S, 2**args.n // args.d_S))
    rows = [
        ("purity_mean", f"n={args.n};d_S={args.d_S};ensemble={args.ensemble}",
         mu, mean, args.samples, args.seed),
    ]
    freq = purity_tail_experiment(
        2**args.n, args.d_S, args.delta, args.samples, seed=stream_seed(args.seed, "purity-tail")
    )
    bound = purity_tail_bound(2**args.n, args.delta, args.k, 0.0, args.m)
    rows.append(
        ("purity_tail", f"d={2**args.n};delta={args.delta};k={args.k};m={args.m}",
         bound.value, freq, args.samples, args.seed)
    )
    run.write_csv("purity-exp", EXPERIMENT_HEADER, rows)
    run.finish()
    within = abs(mean - mu) <= 4 * err
    return EXIT_OK if within else EXIT_PRECONDITION


def cmd_thermal_exp(args) -> int:
    from .concentration import (
        partial_trace_sys,
        thermalization_bound,
        thermalization_experiment,
        thermalization_haar_bound,
    )

    run = Run(args, "thermal-exp")
    d_S, d_E = args.d_S, args.d_R // args.d_S
    if d_S * d_E != args.d_R:
        raise PreconditionError("d_R must be divisible by d_S (full-space restriction)")
    basis = np.eye(d_S * d_E)
    omega_E = partial_trace_sys(basis @ basis.conj().T / args.d_R, d_S, d_E)
    thr, haar_bound = thermalization_haar_bound(d_S, args.d_R, args.eps, omega_E)
    freq = thermalization_experiment(
        d_S, d_E, basis, thr, args.samples, seed=stream_seed(args.seed, "thermal")
    )
    design = thermalization_bound(d_S, args.d_R, args.k, 0.0, thr)
    rows = [
        ("thermal_haar", f"d_S={d_S};d_R={args.d_R};eps={args.eps};threshold={thr}",
         haar_bound, freq, args.samples, args.seed),
        ("thermal_design", f"d_S={d_S};d_R={args.d_R};k={args.k};delta={thr}",
         design.value, freq, args.samples, args.seed),
    ]
    run.write_csv("thermal-exp", EXPERIMENT_HEADER, rows)
    run.finish()
    return EXIT_OK if haar_bound >= freq else EXIT_PRECONDITION


def cmd_learn_clifford(args) -> int:
    from .clifford import sample_uniform
    from .learning import AdjointView, TableauOracle, distance_tableaux, learn_clifford

    run = Run(args, "learn-clifford")
    rng = run.rng("learn-clifford")
    successes = 0
    queries = None
    recovered_json = None
    dists = []
    for _ in range(args.trials):
        tab = sample_uniform(args.n, rng)
        oc = TableauOracle(tab)
        got = learn_clifford(oc, AdjointView(oc), args.n)
        ok = got == tab and oc.queries == (2 * args.n + 1, 2 * args.n)
        successes += ok
        queries = oc.queries
        recovered_json = json.loads(got.to_json())
        dists.append(distance_tableaux(got, tab).value)
    result = {
        "recovered": recovered_json,
        "queries_forward": queries[0],
        "queries_adjoint": queries[1],
        "success": f"{successes}/{args.trials}",
        "distances": {"max": max(dists), "min": min(dists)},
    }
    run.write_json("learn-clifford", result)
    run.finish()
    return EXIT_OK if successes == args.trials else EXIT_PRECONDITION


def cmd_learn_ck(args) -> int:
    from .clifford import sample_uniform
    from .learning import AdjointView, DenseOracle, distance, learn_ck

    run = Run(args, "learn-ck")
    rng = run.rng("learn-ck")
    n, k = args.n, args.k
    t_gate = np.diag([1.0, np.exp(1j * np.pi / 4)])
    successes = 0
    queries = None
    dists = []
    for _ in range(args.trials):
        c = sample_uniform(n, rng).to_unitary()
        t_layer = t_gate
        for _ in range(n - 1):
            t_layer = np.kron(t_layer, np.eye(2))
        u = c @ t_layer
        oc = DenseOracle(u)
        desc = learn_ck(oc, AdjointView(oc), k, n)
        d = distance(desc.to_unitary(), u).value
        dists.append(d)
        t_expect = ((2 * n) ** k - 1) // (2 * n - 1) if n > 0 else 0
        tp_expect = (2 * n) ** (k - 1)
        ok = d < 1e-6 and oc.queries == (t_expect, tp_expect)
        successes += ok
        queries = oc.queries
    result = {
        "recovered": "ck-tree",
        "level": k,
        "queries_forward": queries[0],
        "queries_adjoint": queries[1],
        "success": f"{successes}/{args.trials}",
        "distances": {"max": max(dists)},
    }
    run.write_json("learn-ck", result)
    run.finish()
    return EXIT_OK if successes == args.trials else EXIT_PRECONDITION


def cmd_test_clifford(args) -> int:
    from .clifford import sample_uniform
    from .learning import AdjointView, DenseOracle, test_clifford

    run = Run(args, "test-clifford")
    rng = run.rng("test-clifford")
    correct = 0
    for _ in range(args.trials):
        c = sample_uniform(args.n, rng).to_unitary()
        if args.instance == "close":
            u, want = c, "CLOSE"
        else:
            u, want = _far_instance(c, args.eps), "FAR"
        oc = DenseOracle(u)
        verdict = test_clifford(oc, AdjointView(oc), args.eps, args.delta, rng)
        correct += verdict == want
    result = {
        "instance": args.instance,
        "eps": args.eps,
        "delta": args.delta,
        "success": f"{correct}/{args.trials}",
    }
    run.write_json("test-clifford", result)
    run.finish()
    return EXIT_OK if correct >= (1 - args.delta) * args.trials else EXIT_PRECONDITION


def _far_instance(c: np.ndarray, eps: float) -> np.ndarray:
    """Rotate one qubit phase until the closest-Clifford distance sits in (eps, 1/3)."""
    from .learning import closest_clifford_distance

    n = int(np.log2(c.shape[0]))

    def candidate(theta):
        r = np.diag([1.0, np.exp(1j * theta)])
        for _ in range(n - 1):
            r = np.kron(r, np.eye(2))
        return c @ r

    lo, hi = 0.0, math.pi / 2
    for _ in range(40):
        mid = (lo + hi) / 2
        if closest_clifford_distance(candidate(mid), n) <= eps:
            lo = mid
        else:
            hi = mid
    for scale in (1.01, 1.02, 1.05):
        u = candidate(hi * scale)
        d = closest_clifford_distance(u, n)
        if eps < d < 1 / 3:
            return u
    raise PreconditionError("could not land a FAR instance inside the promise window")


def cmd_selftest(args) -> int:
    run = Run(args, "selftest")
    checks = _selftest_checks()
    failures = 0
    lines = []
    for name, fn in checks:
        t0 = time.time()
        try:
            fn()
            status = "PASS"
        except Exception as exc:  # noqa: BLE001 - report and continue
            status = f"FAIL ({exc})"
            failures += 1
        line = f"[{status.split()[0]:4}] {name} ({time.time() - t0:.2f}s)"
        print(line)
        lines.append(line)
    run.write_json("selftest", {"checks": lines, "failures": failures})
    run.finish()
    return EXIT_OK if failures == 0 else EXIT_INTERNAL


def _selftest_checks():
    import numpy as np

    def swap_identity():
        from .pauli import swap_decomposition_check

        assert swap_decomposition_check(4) < 1e-12

    def clifford_group():
        from .clifford import CliffordTableau, compose, invert, sample_uniform

        rng = np.random.default_rng(0)
        for n in (1, 2, 3):
            t = sample_uniform(n, rng)
            assert compose(t, invert(t)) == CliffordTableau.identity(n)

    def exact_two_design():
        from .clifford import enumerate_group
        from .haar_moments import EnsembleSpec, TableauDescriptor, design_distance

        ens = EnsembleSpec.uniform([TableauDescriptor(t) for t in enumerate_group(1)])
        assert design_distance(ens, 2, "OPNORM") < 1e-9

    def zero_chain_fixed_vector():
        from .chains import zero_chain, zero_stationary

        for n in (2, 16, 128):
            pi = zero_stationary(n)
            assert np.max(np.abs(pi @ zero_chain(n).P - pi)) < 1e-12

    def mobius_inverse():
        from .partitions import mobius_matrix, partitions, zeta_matrix

        parts = partitions(4)
        z = np.array(zeta_matrix(parts))
        mu = np.array(mobius_matrix(parts))
        assert np.array_equal(z @ mu, np.eye(len(parts), dtype=int))

    def lumping():
        from .chains import lumpability_check

        assert lumpability_check(3) < 1e-12

    def pauli_learning():
        from .learning import AdjointView, PauliOracle, learn_pauli
        from .pauli import PauliString

        rng = np.random.default_rng(1)
        for _ in range(50):
            p = PauliString.from_index(4, int(rng.integers(4**4)))
            oc = PauliOracle(p)
            got = learn_pauli(oc, 4)
            assert (got.x_mask, got.z_mask) == (p.x_mask, p.z_mask)
            assert oc.queries == (1, 0)

    def gamma_inequality():
        from .concentration import gamma_ratio_inequality

        assert all(gamma_ratio_inequality(s) for s in (1, 10, 100, 1000))

    return [
        ("swap decomposition identity", swap_identity),
        ("clifford compose/invert group law", clifford_group),
        ("single-qubit clifford exact 2-design", exact_two_design),
        ("zero chain stationary fixed vector", zero_chain_fixed_vector),
        ("mobius matrix inverse", mobius_inverse),
        ("diagonal chain lumps to zero chain", lumping),
        ("one-query pauli learning", pauli_learning),
        ("gamma ratio inequality", gamma_inequality),
    ]


def build_parser() -> _Parser:
    p = _Parser(prog="pseudoq", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help="master seed")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("gap-scan", help="spectral gaps of the zero/accelerated chain; CSV (n, chain, gap, n_times_gap, tau_eps, eps)")
    common(sp)
    sp.add_argument("--n-min", type=int, default=8)
    sp.add_argument("--n-max", type=int, default=512)
    sp.add_argument("--points", type=int, default=13)
    sp.add_argument("--chain", choices=("zero", "accelerated"), default="zero")
    sp.set_defaults(func=cmd_gap_scan)

    sp = sub.add_parser("mixing-scan", help="empirical mixing times; CSV (n, chain, gap, n_times_gap, tau_eps, eps)")
    common(sp)
    sp.add_argument("--n-min", type=int, default=16)
    sp.add_argument("--n-max", type=int, default=256)
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--eps", type=float, default=0.01)
    sp.set_defaults(func=cmd_mixing_scan)

    sp = sub.add_parser("circuit-converge", help="second-moment convergence; CSV (n, k, gate_source, length, metric, value, stderr, seed)")
    common(sp)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--gate-source", dest="gate_source", choices=("haar_u4", "clifford2"), default="haar_u4")
    sp.add_argument("--max-length", type=int, default=200)
    sp.add_argument("--step", type=int, default=5)
    sp.add_argument("--method", choices=("exact", "mc"), default="exact")
    sp.add_argument("--samples", type=int, default=200)
    sp.set_defaults(func=cmd_circuit_converge)

    sp = sub.add_parser("design-check", help="design distances of Clifford ensembles; CSV (n, k, length_or_size, metric, value, stderr)")
    common(sp)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--ensemble", choices=("clifford-exhaustive", "clifford-sampled"), default="clifford-exhaustive")
    sp.add_argument("--samples", type=int, default=2000)
    sp.set_defaults(func=cmd_design_check)

    sp = sub.add_parser("tpe-lambda", help="restricted/dense subspace norm with its proven bound; CSV (N, k, method, lambda_A, lambda_C, p, lambda_Q, bound_rhs, bound_satisfied)")
    common(sp)
    sp.add_argument("--N", type=int, default=16)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--methods", default="restricted")
    sp.set_defaults(func=cmd_tpe_lambda)

    sp = sub.add_parser("tpe-quantum", help="quantum expander gap of a permutation+Fourier mixture; CSV (N, k, method, lambda_A, lambda_C, p, lambda_Q, bound_rhs, bound_satisfied)")
    common(sp)
    sp.add_argument("--N", type=int, default=16)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--degree", type=int, default=8)
    sp.add_argument("--p", type=float, default=0.5)
    sp.set_defaults(func=cmd_tpe_quantum)

    sp = sub.add_parser("bound-eval", help="evaluate the concentration bounds; CSV (experiment, params, bound, empirical_freq, samples, seed)")
    common(sp)
    sp.add_argument("--C", type=float, default=4.0)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--d", type=int, default=16)
    sp.add_argument("--d_S", type=int, default=2)
    sp.add_argument("--d_R", type=int, default=256)
    sp.add_argument("--k", type=int, default=8)
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.set_defaults(func=cmd_bound_eval)

    sp = sub.add_parser("purity-exp", help="sampled reduced-state purity vs the closed form; CSV (experiment, params, bound, empirical_freq, samples, seed)")
    common(sp)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--d_S", type=int, default=4)
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--ensemble", choices=("clifford", "haar"), default="clifford")
    sp.add_argument("--delta", type=float, default=0.3)
    sp.add_argument("--k", type=int, default=8)
    sp.add_argument("--m", type=int, default=2)
    sp.set_defaults(func=cmd_purity_exp)

    sp = sub.add_parser("thermal-exp", help="canonical-state distance experiment vs bounds; CSV (experiment, params, bound, empirical_freq, samples, seed)")
    common(sp)
    sp.add_argument("--d_S", type=int, default=2)
    sp.add_argument("--d_R", type=int, default=256)
    sp.add_argument("--eps", type=float, default=1.3)
    sp.add_argument("--k", type=int, default=8)
    sp.add_argument("--samples", type=int, default=2000)
    sp.set_defaults(func=cmd_thermal_exp)

    sp = sub.add_parser("learn-clifford", help="exact Clifford learning trials with query accounting; JSON (recovered, queries_forward, queries_adjoint, success, distances)")
    common(sp)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--trials", type=int, default=100)
    sp.set_defaults(func=cmd_learn_clifford)

    sp = sub.add_parser("learn-ck", help="hierarchy-level learning trials (dense oracles); JSON (recovered, queries_forward, queries_adjoint, success, distances)")
    common(sp)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--trials", type=int, default=5)
    sp.set_defaults(func=cmd_learn_ck)

    sp = sub.add_parser("test-clifford", help="CLOSE/FAR property-testing trials; JSON (instance, eps, delta, success)")
    common(sp)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--eps", type=float, default=0.3)
    sp.add_argument("--delta", type=float, default=0.05)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--instance", choices=("close", "far"), default="close")
    sp.set_defaults(func=cmd_test_clifford)

    sp = sub.add_parser("selftest", help="run the built-in invariant suite")
    common(sp)
    sp.set_defaults(func=cmd_selftest)

    return p


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (PreconditionError,) as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
