"""Set partitions of {1..m} with the refinement order and Möbius inversion.

Partitions are canonicalized by sorting blocks by their minimum element, so
enumeration order, Möbius matrices and CSV output are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .pauli import DimensionError

ENUMERATION_LIMIT = 10


@dataclass(frozen=True)
class Partition:
    m: int
    blocks: tuple  # tuple of tuples, each sorted, ordered by min element

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            seen.update(b)
        if seen != set(range(1, self.m + 1)):
            raise ValueError("blocks must cover {1..m} exactly")
        total = sum(len(b) for b in self.blocks)
        if total != self.m:
            raise ValueError("blocks overlap")

    @classmethod
    def of(cls, m: int, blocks) -> "Partition":
        canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        return cls(m, canon)

    @classmethod
    def singletons(cls, m: int) -> "Partition":
        return cls.of(m, [[i] for i in range(1, m + 1)])

    @classmethod
    def one_block(cls, m: int) -> "Partition":
        return cls.of(m, [list(range(1, m + 1))])

    @classmethod
    def from_block_ids(cls, ids) -> "Partition":
        """From a block-id list over elements 1..m (restricted growth string)."""
        m = len(ids)
        groups: dict = {}
        for el, bid in zip(range(1, m + 1), ids):
            groups.setdefault(bid, []).append(el)
        return cls.of(m, groups.values())

    @property
    def size(self) -> int:
        """Number of blocks, written |Pi|."""
        return len(self.blocks)

    def block_id(self) -> list:
        """Element -> block index (0-based, blocks in canonical order)."""
        ids = [0] * self.m
        for bi, block in enumerate(self.blocks):
            for el in block:
                ids[el - 1] = bi
        return ids

    def __le__(self, other: "Partition") -> bool:
        return refines(self, other)


def partitions(m: int):
    """All set partitions of {1..m} in canonical order; count = Bell(m)."""
    if m > ENUMERATION_LIMIT:
        raise DimensionError(f"partition enumeration capped at m={ENUMERATION_LIMIT}")
    out: list = []

    def grow(el: int, blocks: list):
        if el > m:
            out.append(Partition.of(m, [list(b) for b in blocks]))
            return
        for b in blocks:
            b.append(el)
            grow(el + 1, blocks)
            b.pop()
        blocks.append([el])
        grow(el + 1, blocks)
        blocks.pop()

    grow(1, [])
    return sorted(out, key=lambda p: p.blocks)


@lru_cache(maxsize=None)
def bell_number(m: int) -> int:
    if m == 0:
        return 1
    return sum(math.comb(m - 1, j) * bell_number(j) for j in range(m))


def refines(a: Partition, b: Partition) -> bool:
    """True when every block of a lies inside a block of b."""
    if a.m != b.m:
        raise DimensionError("ground-set size mismatch")
    bid = b.block_id()
    for block in a.blocks:
        target = bid[block[0] - 1]
        if any(bid[el - 1] != target for el in block[1:]):
            return False
    return True


def meet(a: Partition, b: Partition) -> Partition:
    """Greatest lower bound: blockwise intersections."""
    if a.m != b.m:
        raise DimensionError("ground-set size mismatch")
    ida, idb = a.block_id(), b.block_id()
    return Partition.from_block_ids([(ida[i], idb[i]) for i in range(a.m)])


def coarsenings(p: Partition):
    """All partitions >= p, via partitions of p's block set."""
    k = p.size
    for q in partitions(k):
        merged = []
        for qb in q.blocks:
            big: list = []
            for bi in qb:
                big.extend(p.blocks[bi - 1])
            merged.append(big)
        yield Partition.of(p.m, merged)


def mobius(a: Partition, b: Partition) -> int:
    """Möbius function of the refinement order.

    For a <= b: (-1)^{|a|-|b|} prod_i (b_i - 1)! with b_i the number of blocks
    of a inside block i of b; zero off the order (matching the zeta support).
    """
    if a.m != b.m:
        raise DimensionError("ground-set size mismatch")
    if not refines(a, b):
        return 0
    ida = a.block_id()
    counts = [0] * b.size
    idb = b.block_id()
    seen = set()
    for el in range(1, a.m + 1):
        ba = ida[el - 1]
        if ba in seen:
            continue
        seen.add(ba)
        counts[idb[el - 1]] += 1
    sign = -1 if (a.size - b.size) % 2 else 1
    prod = 1
    for c in counts:
        prod *= math.factorial(c - 1)
    return sign * prod


def zeta_matrix(parts) -> list:
    return [[1 if refines(a, b) else 0 for b in parts] for a in parts]


def mobius_matrix(parts) -> list:
    return [[mobius(a, b) for b in parts] for a in parts]


def rising_factorial(x: int, n: int) -> int:
    out = 1
    for j in range(n):
        out *= x + j
    return out


def falling_factorial(x: int, n: int) -> int:
    out = 1
    for j in range(n):
        out *= x - j
    return out


def rising_factorial_identity_check(m: int, x: int) -> bool:
    """sum over coarsenings of |mobius| * x^{|Pi'|} == rising factorial x^(|Pi|),
    for every partition of {1..m}."""
    if m > 8:
        raise DimensionError("identity check capped at m=8")
    for p in partitions(m):
        total = sum(abs(mobius(p, q)) * x ** q.size for q in coarsenings(p))
        if total != rising_factorial(x, p.size):
            return False
    return True


def stirling_relation_check(m: int, N: int) -> bool:
    """N^{|Pi|} == sum over coarsenings of falling factorial (N)_{|Pi'|}."""
    for p in partitions(m):
        total = sum(falling_factorial(N, q.size) for q in coarsenings(p))
        if total != N ** p.size:
            return False
    return True


def pairing_partition(pi, k: int) -> Partition:
    """P(pi): block {j, k + pi(j)} for each j (pi as a 0-based image list)."""
    return Partition.of(2 * k, [[j + 1, k + pi[j] + 1] for j in range(k)])
