"""Exact n-qubit Pauli algebra plus the tensor identities built on it.

A Pauli string is stored as two n-bit masks (x, z) and an exponent e of i,
representing  i^e * prod_j X_j^{x_j} Z_j^{z_j}  with qubit 0 the leftmost
tensor factor.  All group operations are integer-exact; dense matrices are
derived views, never the source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

# Single-qubit matrices in the canonical X^x Z^z form.
_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_XZ = _X @ _Z  # equals -i * sigma_y

DENSE_QUBIT_LIMIT = 12

_PHASE_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


class DimensionError(ValueError):
    """Raised on qubit-count mismatches or dense-size guard violations."""


def popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True)
class PauliString:
    """Element of the n-qubit Pauli group: i^phase_exp * X^x_mask Z^z_mask."""

    n: int
    x_mask: int
    z_mask: int
    phase_exp: int = 0  # exponent of i, mod 4

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"need at least one qubit, got n={self.n}")
        limit = 1 << self.n
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise DimensionError("mask does not fit the qubit count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_label(cls, text: str) -> "PauliString":
        """Parse the text format: optional prefix in {+,-,+i,-i} then {I,X,Y,Z}^n."""
        s = text.strip()
        prefix = ""
        while s and s[0] in "+-i":
            prefix += s[0]
            s = s[1:]
        if prefix not in _PREFIX_PHASE:
            raise ValueError(f"bad phase prefix {prefix!r} in {text!r}")
        e = _PREFIX_PHASE[prefix]
        x = z = 0
        for j, c in enumerate(s.upper()):
            if c == "I":
                pass
            elif c == "X":
                x |= 1 << j
            elif c == "Z":
                z |= 1 << j
            elif c == "Y":
                # Y = i * XZ, so each Y contributes one factor of i
                x |= 1 << j
                z |= 1 << j
                e += 1
            else:
                raise ValueError(f"bad Pauli letter {c!r} in {text!r}")
        return cls(len(s), x, z, e)

    @classmethod
    def from_letters(cls, n: int, x_mask: int, z_mask: int) -> "PauliString":
        """The Hermitian phase-+1 string with the given masks (Y where x=z=1)."""
        return cls(n, x_mask, z_mask, popcount(x_mask & z_mask))

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliString":
        """Decode the interleaved-mask index: per qubit j, code x + 2z at base-4 digit j."""
        x = z = 0
        for j in range(n):
            c = (index >> (2 * j)) & 3
            x |= (c & 1) << j
            z |= ((c >> 1) & 1) << j
        return cls.from_letters(n, x, z)

    # -- basic queries -----------------------------------------------------

    @property
    def index(self) -> int:
        """Interleaved (x,z) bit-pair index, qubit 0 at the least significant digit."""
        out = 0
        for j in range(self.n):
            c = ((self.x_mask >> j) & 1) + 2 * ((self.z_mask >> j) & 1)
            out |= c << (2 * j)
        return out

    @property
    def phase(self) -> complex:
        return 1j ** self.phase_exp

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return popcount(self.x_mask | self.z_mask)

    def is_hermitian_representative(self) -> bool:
        """True when the stored phase makes this the standard +1 string."""
        return self.phase_exp == popcount(self.x_mask & self.z_mask) % 4

    def label(self) -> str:
        e = self.phase_exp
        letters = []
        for j in range(self.n):
            x = (self.x_mask >> j) & 1
            z = (self.z_mask >> j) & 1
            if x and z:
                letters.append("Y")
                e -= 1
            elif x:
                letters.append("X")
            elif z:
                letters.append("Z")
            else:
                letters.append("I")
        return _PHASE_PREFIX[e % 4] + "".join(letters)

    def __str__(self) -> str:
        return self.label()

    # -- group operations ---------------------------------------------------

    def commutes_with(self, other: "PauliString") -> bool:
        """Symplectic-parity commutation test; Paulis either commute or anticommute."""
        if self.n != other.n:
            raise DimensionError("qubit count mismatch")
        par = popcount(self.x_mask & other.z_mask) + popcount(self.z_mask & other.x_mask)
        return par % 2 == 0

    def mul(self, other: "PauliString") -> "PauliString":
        """Exact group product, including the phase.

        Moving other's X block through self's Z block gives
        Z^z X^x' = (-1)^{|z & x'|} X^x' Z^z, hence the 2*popcount term.
        """
        if self.n != other.n:
            raise DimensionError("qubit count mismatch")
        e = self.phase_exp + other.phase_exp + 2 * popcount(self.z_mask & other.x_mask)
        return PauliString(self.n, self.x_mask ^ other.x_mask, self.z_mask ^ other.z_mask, e)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return self.mul(other)

    def with_phase_exp(self, e: int) -> "PauliString":
        return PauliString(self.n, self.x_mask, self.z_mask, e)

    def hermitian_representative(self) -> "PauliString":
        """Same letters, phase reset to the standard +1 string."""
        return PauliString.from_letters(self.n, self.x_mask, self.z_mask)

    def adjoint(self) -> "PauliString":
        """Conjugate transpose: letters are Hermitian, only the phase conjugates."""
        h = popcount(self.x_mask & self.z_mask)  # i-exponent of the XZ factors
        # dense = i^e X^x Z^z; (X^x Z^z)^dagger = Z^z X^x = (-1)^{x.z} X^x Z^z
        return PauliString(self.n, self.x_mask, self.z_mask, -self.phase_exp + 2 * h)

    # -- dense view ---------------------------------------------------------

    def to_dense(self) -> np.ndarray:
        if self.n > DENSE_QUBIT_LIMIT:
            raise DimensionError(
                f"dense materialization capped at n={DENSE_QUBIT_LIMIT}, got n={self.n}"
            )
        factors = []
        for j in range(self.n):
            x = (self.x_mask >> j) & 1
            z = (self.z_mask >> j) & 1
            factors.append((_I2, _X, _Z, _XZ)[x + 2 * z])
        return self.phase * reduce(np.kron, factors)


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    return a.mul(b)


def to_dense(p: PauliString) -> np.ndarray:
    return p.to_dense()


def all_hermitian_strings(n: int):
    """All 4^n phase-+1 strings in index order."""
    return [PauliString.from_index(n, i) for i in range(4**n)]


def trace_product(paulis) -> complex:
    """tr of a product of PauliStrings, computed exactly from the group algebra.

    The product is proportional to a single string; the trace is nonzero only
    when that string is the identity, in which case it is phase * 2^n.
    """
    paulis = list(paulis)
    prod = reduce(PauliString.mul, paulis)
    if prod.x_mask == 0 and prod.z_mask == 0:
        return prod.phase * (2**prod.n)
    return 0.0


def swap_operator(d: int) -> np.ndarray:
    """The swap on two d-dimensional systems."""
    f = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            f[b * d + a, a * d + b] = 1.0
    return f


def swap_decomposition_check(d: int) -> float:
    """Max-abs error of  swap == (1/d) sum_p sigma_p (x) sigma_p  over the Pauli basis."""
    n = int(np.log2(d))
    if 2**n != d or n > 5:
        raise DimensionError("d must be a power of two with at most 5 qubits")
    acc = np.zeros((d * d, d * d), dtype=complex)
    for p in all_hermitian_strings(n):
        m = p.to_dense()
        acc += np.kron(m, m)
    return float(np.max(np.abs(acc / d - swap_operator(d))))


def _cycles(perm) -> list[list[int]]:
    """Cycle decomposition of a permutation given as a 0-based image list."""
    m = len(perm)
    if sorted(perm) != list(range(m)):
        raise ValueError("not a permutation")
    seen = [False] * m
    cycles = []
    for start in range(m):
        if seen[start]:
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        cycles.append(cyc)
    return cycles


def trace_cycle(perm, factors) -> complex:
    """tr( S(perm) (A_1 (x) ... (x) A_c) ) via the cycle-product formula.

    perm is a 0-based image list over the factor slots.  For each cycle the
    contribution is the trace of the factor product taken along the cycle;
    disjoint cycles multiply.
    """
    factors = list(factors)
    if len(perm) != len(factors):
        raise DimensionError("cycle length must equal factor count")
    d = factors[0].shape[0]
    for a in factors:
        if a.shape != (d, d):
            raise DimensionError("all factors must be square with equal dimension")
    out = 1.0 + 0j
    for cyc in _cycles(list(perm)):
        # walk the cycle backwards: slot j receives the factor at perm(j)
        prod = np.eye(d, dtype=complex)
        j = cyc[0]
        for _ in range(len(cyc)):
            j = perm[j]
            prod = prod @ factors[j]
        out *= np.trace(prod)
    return out


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    d = m.shape[0]
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(d))) < tol)


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) < tol)
