import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudoq.pauli import (
    DimensionError,
    PauliString,
    all_hermitian_strings,
    pauli_mul,
    swap_decomposition_check,
    swap_operator,
    to_dense,
    trace_cycle,
    trace_product,
)


def test_mul_xz_is_minus_i_y():
    x = PauliString.from_label("X")
    z = PauliString.from_label("Z")
    prod = pauli_mul(x, z)
    assert prod.label() == "-iY"
    # dense multiplication oracle
    assert np.allclose(to_dense(prod), to_dense(x) @ to_dense(z))


def test_mul_identity_and_square():
    p = PauliString.from_label("XYZI")
    ident = PauliString.identity(4)
    assert pauli_mul(p, ident) == p
    sq = pauli_mul(p, p)
    assert (sq.x_mask, sq.z_mask, sq.phase_exp) == (0, 0, 0)


def test_mul_matches_dense_exhaustive_n2():
    strings = all_hermitian_strings(2)
    for a in strings[:8]:
        for b in strings:
            got = to_dense(pauli_mul(a, b))
            want = to_dense(a) @ to_dense(b)
            assert np.allclose(got, want)


def test_mul_length_mismatch():
    with pytest.raises(DimensionError):
        pauli_mul(PauliString.from_label("X"), PauliString.from_label("XX"))


def test_mul_associative_bulk():
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        n = int(rng.integers(1, 17))
        a, b, c = (
            PauliString.from_index(n, int(rng.integers(4**n))).with_phase_exp(int(rng.integers(4)))
            for _ in range(3)
        )
        assert (a * b) * c == a * (b * c)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 16), st.data())
def test_mul_associative(n, data):
    idx = st.integers(0, 4**n - 1)
    phase = st.integers(0, 3)
    ps = []
    for _ in range(3):
        p = PauliString.from_index(n, data.draw(idx)).with_phase_exp(data.draw(phase))
        ps.append(p)
    a, b, c = ps
    assert (a * b) * c == a * (b * c)


def test_to_dense_basics():
    z = PauliString.from_label("Z")
    assert np.allclose(to_dense(z), np.diag([1, -1]))
    xx = PauliString.from_label("XX")
    assert np.allclose(to_dense(xx), np.kron([[0, 1], [1, 0]], [[0, 1], [1, 0]]))
    ident3 = PauliString.identity(3)
    assert np.allclose(to_dense(ident3), np.eye(8))


def test_to_dense_guard():
    with pytest.raises(DimensionError):
        PauliString.identity(13).to_dense()


def test_orthogonality_exhaustive():
    for n in (1, 2, 3):
        for p in all_hermitian_strings(n):
            for q in all_hermitian_strings(n):
                t = trace_product([p, q])
                want = 2**n if p.index == q.index else 0
                assert t == want


def test_commutation_matches_dense_exhaustive_n2():
    for p in all_hermitian_strings(2):
        for q in all_hermitian_strings(2):
            comm = p.to_dense() @ q.to_dense() - q.to_dense() @ p.to_dense()
            assert p.commutes_with(q) == bool(np.allclose(comm, 0))


def test_swap_decomposition():
    for d in (2, 4, 8):
        assert swap_decomposition_check(d) < 1e-12


def test_trace_cycle_swap_and_identity():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.isclose(trace_cycle([1, 0], [a, b]), np.trace(a @ b))
    assert np.isclose(trace_cycle([0, 1], [a, b]), np.trace(a) * np.trace(b))


def test_trace_cycle_three_cycle_dense_oracle():
    from pseudoq.haar_moments import permutation_operator

    rng = np.random.default_rng(4)
    mats = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3)]
    perm = [1, 2, 0]
    s = permutation_operator(perm, 2)
    dense_val = np.trace(s @ np.kron(mats[0], np.kron(mats[1], mats[2])))
    assert np.isclose(trace_cycle(perm, mats), dense_val)


def test_trace_cycle_swap_equals_swap_operator():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 4))
    f = swap_operator(4)
    assert np.isclose(np.trace(f @ np.kron(a, b)), np.trace(a @ b))


def test_label_round_trip():
    for lab in ["XIZ", "-iXZI", "+iYYX", "-ZZZ", "Y", "IIII"]:
        assert PauliString.from_label(lab).label() == lab


def test_index_round_trip():
    for n in (1, 2, 3):
        for i in range(4**n):
            assert PauliString.from_index(n, i).index == i


def test_adjoint_and_phase():
    p = PauliString.from_label("-iXZ")
    dense = p.to_dense()
    assert np.allclose(p.adjoint().to_dense(), dense.conj().T)
    assert p.phase == -1j
