import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudoq.partitions import (
    Partition,
    bell_number,
    coarsenings,
    falling_factorial,
    meet,
    mobius,
    mobius_matrix,
    pairing_partition,
    partitions,
    refines,
    rising_factorial,
    rising_factorial_identity_check,
    stirling_relation_check,
    zeta_matrix,
)


def test_partition_counts_are_bell_numbers():
    for m in range(1, 9):
        assert len(partitions(m)) == bell_number(m)
    assert len(partitions(2)) == 2
    assert len(partitions(4)) == 15


def test_bell_bounded_by_factorial():
    import math

    for m in range(1, 11):
        assert bell_number(m) <= math.factorial(m)


def test_canonical_form_unique():
    a = Partition.of(4, [[3, 4], [2, 1]])
    b = Partition.of(4, [[1, 2], [4, 3]])
    assert a == b
    parts = partitions(6)
    assert len(set(parts)) == len(parts)


def test_refinement_basics():
    s = Partition.singletons(5)
    for p in partitions(4):
        assert refines(Partition.singletons(4), p)
        assert refines(p, Partition.one_block(4))
    assert refines(Partition.of(3, [[1, 2], [3]]), Partition.one_block(3))
    assert not refines(Partition.one_block(3), Partition.of(3, [[1, 2], [3]]))


def test_meet_block_intersections():
    a = Partition.of(4, [[1, 2], [3, 4]])
    b = Partition.of(4, [[1, 3], [2, 4]])
    assert meet(a, b) == Partition.singletons(4)
    assert meet(a, a) == a
    # meet is the greatest lower bound
    for p in partitions(4):
        for q in partitions(4):
            mt = meet(p, q)
            assert refines(mt, p) and refines(mt, q)


def test_mobius_values():
    s3 = Partition.singletons(3)
    assert mobius(s3, s3) == 1
    assert mobius(s3, Partition.one_block(3)) == 2
    assert mobius(Partition.one_block(3), s3) == 0  # off the order


def test_mobius_matrix_inverse_exhaustive():
    for m in (2, 3, 4, 5, 6):
        parts = partitions(m)
        z = np.array(zeta_matrix(parts), dtype=np.int64)
        mu = np.array(mobius_matrix(parts), dtype=np.int64)
        assert np.array_equal(z @ mu, np.eye(len(parts), dtype=np.int64))
        assert np.array_equal(mu @ z, np.eye(len(parts), dtype=np.int64))


def test_abs_mobius_sum_is_factorial():
    import math

    for m in (2, 3, 4, 5, 6, 7, 8):
        for p in partitions(m):
            total = sum(abs(mobius(p, q)) for q in coarsenings(p))
            assert total == math.factorial(p.size), (m, p)


def test_rising_factorial_identity():
    for x in (1, 2, 3, 7):
        assert rising_factorial_identity_check(6, x)
    assert rising_factorial_identity_check(4, 1)
    # single block: x^(1) = x
    assert rising_factorial(5, 1) == 5


def test_stirling_relation():
    for m in (2, 3, 4, 5, 6):
        assert stirling_relation_check(m, 16)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.data())
def test_coarsenings_are_exactly_upper_interval(m, data):
    parts = partitions(m)
    p = data.draw(st.sampled_from(parts))
    ups = {q for q in coarsenings(p)}
    direct = {q for q in parts if refines(p, q)}
    assert ups == direct


def test_pairing_partition():
    p = pairing_partition([1, 0], 2)  # swap
    assert p == Partition.of(4, [[1, 4], [2, 3]])
    assert p.size == 2


def test_falling_factorial():
    assert falling_factorial(5, 3) == 60
    assert falling_factorial(4, 0) == 1
