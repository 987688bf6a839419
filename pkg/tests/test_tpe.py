import itertools
import math

import numpy as np
import pytest

from pseudoq.haar_moments import EnsembleSpec, PermutationDescriptor, haar_moment_projector
from pseudoq.partitions import (
    Partition,
    falling_factorial,
    pairing_partition,
    partitions,
)
from pseudoq.tpe import (
    E_state,
    I_state,
    apply_fourier_kk,
    classical_tpe_lambda,
    count_congruence_solutions,
    design_iterations,
    fourier_E_element,
    lambda_A,
    lambda_A_bound,
    pairing_block_matrix,
    quantum_tpe_lambda,
    symmetric_group_projector,
)

RNG = np.random.default_rng(77)


def test_set_sizes_by_enumeration():
    for N in (3, 4, 5, 6):
        for m in (2, 3, 4):
            for p in partitions(m):
                if p.size > N:
                    continue
                ev = E_state(p, N)
                iv = I_state(p, N)
                assert int(np.sum(ev > 0)) == N**p.size
                assert int(np.sum(iv > 0)) == falling_factorial(N, p.size)


def test_e_states_resolve_i_states():
    """Mobius round trip: |I> -> E basis -> back reproduces the vector."""
    from pseudoq.partitions import coarsenings, mobius

    N, k = 5, 1
    for p in partitions(2 * k):
        target = math.sqrt(falling_factorial(N, p.size)) * I_state(p, N)
        acc = np.zeros_like(target)
        for q in coarsenings(p):
            acc += mobius(p, q) * math.sqrt(N**q.size) * E_state(q, N)
        assert np.max(np.abs(acc - target)) < 1e-10


def test_fourier_e_elements_match_dense():
    for N, k in [(3, 1), (4, 1), (3, 2)]:
        for p1 in partitions(2 * k):
            for p2 in partitions(2 * k):
                v1 = E_state(p1, N)
                v2 = E_state(p2, N)
                dense = np.vdot(v1, apply_fourier_kk(v2, N, k))
                restricted = fourier_E_element(p1, p2, N, k)
                assert abs(dense.imag) < 1e-10
                assert dense.real == pytest.approx(restricted, abs=1e-10)
                assert restricted > 0  # real and positive
                # symmetric in (p1, p2)
                assert restricted == pytest.approx(fourier_E_element(p2, p1, N, k))


def test_fourier_e_element_pairing_diagonal_is_one():
    for k in (1, 2):
        for pi in itertools.permutations(range(k)):
            pp = pairing_partition(list(pi), k)
            for N in (5, 9):
                assert fourier_E_element(pp, pp, N, k) == pytest.approx(1.0)


def test_fourier_e_element_singletons_column():
    # F^{(x)k,k}|E_singletons> = |0>, so the element reduces to <E_p|0> = N^{-|p|/2}
    N, k = 4, 1
    sing = Partition.singletons(2)
    for p in partitions(2):
        got = fourier_E_element(p, sing, N, k)
        assert got == pytest.approx(float(N) ** (-p.size / 2))


def test_counting_methods_agree():
    for N in (2, 3, 4, 8, 16, 32):
        for k in (1, 2):
            for p1 in partitions(2 * k):
                for p2 in partitions(2 * k):
                    a = pairing_block_matrix(p1, p2, k)
                    assert count_congruence_solutions(a, N, "brute") == count_congruence_solutions(
                        a, N, "snf"
                    )


def test_block_matrix_zero_iff_above_pairing():
    """The bilinear form vanishes exactly when both partitions sit above a pairing."""
    from pseudoq.partitions import refines

    for k in (1, 2):
        pairings = [pairing_partition(list(pi), k) for pi in itertools.permutations(range(k))]
        for p1 in partitions(2 * k):
            for p2 in partitions(2 * k):
                a = pairing_block_matrix(p1, p2, k)
                above = any(refines(pp, p1) and refines(pp, p2) for pp in pairings)
                assert (not a.any()) == above


def test_lambda_a_two_paths_agree():
    r_restricted = lambda_A(16, 1, method="restricted")
    r_dense = lambda_A(16, 1, method="dense")
    assert abs(r_restricted.lam - r_dense.lam) < 1e-9

    r_restricted = lambda_A(8, 2, method="restricted")
    r_dense = lambda_A(8, 2, method="dense")
    assert abs(r_restricted.lam - r_dense.lam) < 1e-7
    assert r_restricted.details["trace_bound_ok"]


def test_lambda_a_bound_large_n():
    for N in (2048, 4096):
        rep = lambda_A(N, 1)
        assert rep.lam <= lambda_A_bound(N, 1)
    assert lambda_A_bound(4096, 1) == pytest.approx(0.5)


def test_fixed_space_unit_singular_values():
    # the compressed Fourier matrix has exactly k! unit singular values at large N
    rep = lambda_A(64, 1)
    assert rep.unit_count == 1
    rep2 = lambda_A(32, 2)
    assert rep2.unit_count == 2


def test_haar_projector_equals_pairing_span():
    for N, k in [(3, 1), (4, 2), (8, 2)]:
        haar = haar_moment_projector(N, k).matrix
        vecs = np.column_stack(
            [E_state(pairing_partition(list(pi), k), N) for pi in itertools.permutations(range(k))]
        )
        gram = vecs.T @ vecs
        proj = vecs @ np.linalg.pinv(gram) @ vecs.T
        assert np.max(np.abs(haar - proj)) < 1e-9


def test_classical_tpe_lambda_cases():
    N = 4
    full = EnsembleSpec.uniform(
        [PermutationDescriptor(tuple(p), N) for p in itertools.permutations(range(N))]
    )
    assert classical_tpe_lambda(full, N, 2) < 1e-10
    ident = EnsembleSpec.uniform([PermutationDescriptor(tuple(range(N)), N)])
    assert classical_tpe_lambda(ident, N, 2) == pytest.approx(1.0)
    rng = np.random.default_rng(5)
    rand8 = EnsembleSpec.uniform(
        [PermutationDescriptor(tuple(int(x) for x in rng.permutation(16)), 16) for _ in range(8)]
    )
    lam = classical_tpe_lambda(rand8, 16, 2)
    assert 0 < lam < 1


def test_symmetric_group_projector_is_projector():
    for N, k in [(4, 2), (5, 2)]:
        p = symmetric_group_projector(N, k)
        assert np.max(np.abs(p @ p - p)) < 1e-10
        assert np.max(np.abs(p - p.T)) < 1e-12


def test_quantum_tpe_lambda_and_bound():
    rng = np.random.default_rng(5)
    N = 16
    perms = EnsembleSpec.uniform(
        [PermutationDescriptor(tuple(int(x) for x in rng.permutation(N)), N) for _ in range(8)]
    )
    rep = quantum_tpe_lambda(perms, 0.5, N, 1)
    assert rep.lam < 1
    assert rep.details["bound_satisfied"]
    assert rep.details["optimal_p"] == pytest.approx(1 / (1 + rep.details["eps_C"]))
    # p=1: pure permutations leave extra fixed states, spectrum stays at 1
    rep1 = quantum_tpe_lambda(perms, 1.0, N, 1)
    assert rep1.lam == pytest.approx(1.0, abs=1e-9)
    assert rep1.unit_count > 1


def test_design_iterations():
    assert design_iterations(2, 1, 0.5, 2**-4) == 6
    assert design_iterations(2, 1, 0.5, 16.0) == 0
    # halving lambda never increases the count
    for eps in (0.1, 0.01):
        for lam in (0.9, 0.5, 0.25):
            assert design_iterations(4, 2, lam / 2, eps) <= design_iterations(4, 2, lam, eps)
    with pytest.raises(ValueError):
        design_iterations(2, 1, 1.0, 0.1)
