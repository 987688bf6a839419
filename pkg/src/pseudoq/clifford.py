"""Clifford group via stabilizer tableaux.

A tableau stores the conjugation images of the 2n Pauli generators
(X_1..X_n, Z_1..Z_n) as phase-±1 Pauli strings.  Composition, inversion and
uniform sampling all happen at the mask level; dense unitaries are derived
on demand with a fixed global-phase convention.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .pauli import DimensionError, PauliString, popcount

DENSE_QUBIT_LIMIT = 10


class SymplecticError(ValueError):
    """Generator images violate the required (anti)commutation pattern."""


def _sym_product(a: PauliString, b: PauliString) -> int:
    """Symplectic inner product mod 2: 1 iff a and b anticommute."""
    return (popcount(a.x_mask & b.z_mask) + popcount(a.z_mask & b.x_mask)) % 2


@dataclass(frozen=True)
class CliffordTableau:
    """Images C X_i C^dag and C Z_i C^dag, each a Pauli string with phase ±1."""

    n: int
    x_images: tuple
    z_images: tuple

    def __post_init__(self):
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise DimensionError("need exactly n X-images and n Z-images")
        for p in (*self.x_images, *self.z_images):
            if p.n != self.n:
                raise DimensionError("image qubit count mismatch")
            if p.phase_exp % 2 != popcount(p.x_mask & p.z_mask) % 2:
                raise SymplecticError(f"image {p} is not Hermitian (phase not ±1)")
        validate_symplectic(list(self.x_images) + list(self.z_images), self.n)

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        xs = tuple(PauliString.from_letters(n, 1 << i, 0) for i in range(n))
        zs = tuple(PauliString.from_letters(n, 0, 1 << i) for i in range(n))
        return cls(n, xs, zs)

    @classmethod
    def _unchecked(cls, n: int, xs: tuple, zs: tuple) -> "CliffordTableau":
        """Skip validation for results that are valid by construction
        (composition/inversion of validated tableaux)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "x_images", xs)
        object.__setattr__(obj, "z_images", zs)
        return obj

    # -- group structure ----------------------------------------------------

    def conjugate_pauli(self, p: PauliString) -> PauliString:
        """C sigma_p C^dag with exact phase.

        Write p = i^e * prod_j X_j^{x_j} Z_j^{z_j} and conjugate factor by
        factor, multiplying the stored generator images.
        """
        if p.n != self.n:
            raise DimensionError("qubit count mismatch")
        out = PauliString(self.n, 0, 0, p.phase_exp)
        for j in range(self.n):
            if (p.x_mask >> j) & 1:
                out = out * self.x_images[j]
            if (p.z_mask >> j) & 1:
                out = out * self.z_images[j]
        return out

    def compose(self, other: "CliffordTableau") -> "CliffordTableau":
        """Tableau of self∘other, i.e. the map p -> self(other(p))."""
        if self.n != other.n:
            raise DimensionError("qubit count mismatch")
        xs = tuple(self.conjugate_pauli(p) for p in other.x_images)
        zs = tuple(self.conjugate_pauli(p) for p in other.z_images)
        return CliffordTableau._unchecked(self.n, xs, zs)

    def invert(self) -> "CliffordTableau":
        """Tableau of the inverse map; compose(self, invert(self)) is exactly identity."""
        n = self.n
        m = _symplectic_matrix(self)
        minv = (_lambda_matrix(n) @ m.T @ _lambda_matrix(n)) % 2
        xs, zs = [], []
        for i in range(2 * n):
            col = minv[:, i]
            cand = _pauli_from_vector(n, col)
            # fix the sign so that self maps the candidate back to +generator
            img = self.conjugate_pauli(cand)
            sign_exp = img.phase_exp  # 0 or 2
            fixed = cand.with_phase_exp(cand.phase_exp + sign_exp)
            (xs if i < n else zs).append(fixed)
        return CliffordTableau._unchecked(n, tuple(xs), tuple(zs))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CliffordTableau)
            and self.n == other.n
            and self.x_images == other.x_images
            and self.z_images == other.z_images
        )

    def __hash__(self):
        return hash((self.n, self.x_images, self.z_images))

    def key(self) -> tuple:
        """Canonical hashable key (masks and signs of all images)."""
        return tuple(
            (p.x_mask, p.z_mask, p.phase_exp) for p in (*self.x_images, *self.z_images)
        )

    # -- dense view ---------------------------------------------------------

    def to_unitary(self) -> np.ndarray:
        """A dense unitary with this conjugation action, normalized so the
        first nonzero entry of the first column is real positive."""
        n = self.n
        if n > DENSE_QUBIT_LIMIT:
            raise DimensionError(f"dense materialization capped at n={DENSE_QUBIT_LIMIT}")
        d = 2**n
        psi0 = self.stabilizer_column()
        cols = np.empty((d, d), dtype=complex)
        for b in range(d):
            # U|b> = U X^b |0> = (prod of X-images) U|0>
            img = PauliString.identity(n)
            for j in range(n):
                if (b >> (n - 1 - j)) & 1:  # qubit j is bit (n-1-j) of the index
                    img = img * self.x_images[j]
            cols[:, b] = img.to_dense() @ psi0
        first = cols[np.flatnonzero(np.abs(cols[:, 0]) > 1e-12)[0], 0]
        cols *= np.abs(first) / first
        return cols

    def stabilizer_column(self) -> np.ndarray:
        """U|0...0>, the state stabilized by the signed Z-images."""
        n = self.n
        d = 2**n
        proj = np.eye(d, dtype=complex)
        for p in self.z_images:
            proj = proj @ (np.eye(d) + p.to_dense()) / 2
        # proj is rank one; take its largest column
        j = int(np.argmax(np.linalg.norm(proj, axis=0)))
        v = proj[:, j]
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            raise SymplecticError("inconsistent stabilizer set (zero projector)")
        return v / nrm

    # -- JSON interface -------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "x_images": [p.label() for p in self.x_images],
                "z_images": [p.label() for p in self.z_images],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "CliffordTableau":
        obj = json.loads(text)
        xs = tuple(PauliString.from_label(s) for s in obj["x_images"])
        zs = tuple(PauliString.from_label(s) for s in obj["z_images"])
        return cls(obj["n"], xs, zs)


# -- free functions matching the operation map ---------------------------------


def conjugate_pauli(t: CliffordTableau, p: PauliString) -> PauliString:
    return t.conjugate_pauli(p)


def compose(a: CliffordTableau, b: CliffordTableau) -> CliffordTableau:
    return a.compose(b)


def invert(t: CliffordTableau) -> CliffordTableau:
    return t.invert()


def validate_symplectic(images, n: int) -> None:
    """Check the generator-image commutation pattern, naming the offending pair.

    Ordering convention: images[0..n-1] are X-images, images[n..2n-1] Z-images.
    Pair (i, n+i) must anticommute; every other pair must commute.
    """
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            want = 1 if j == i + n else 0
            got = _sym_product(images[i], images[j])
            if got != want:
                names = [f"X{k+1}" for k in range(n)] + [f"Z{k+1}" for k in range(n)]
                kind = "anticommute" if want else "commute"
                raise SymplecticError(
                    f"images of {names[i]} and {names[j]} must {kind} "
                    f"(got {images[i]} vs {images[j]})"
                )


def synthesize(images) -> CliffordTableau:
    """Tableau from 2n phase-+1 generator images (the sign-free reconstruction)."""
    images = list(images)
    if len(images) % 2 != 0:
        raise DimensionError("need 2n images")
    n = len(images) // 2
    reps = [p.hermitian_representative() for p in images]
    validate_symplectic(reps, n)
    return CliffordTableau(n, tuple(reps[:n]), tuple(reps[n:]))


# -- symplectic linear algebra over GF(2) --------------------------------------


def _pauli_vector(p: PauliString) -> np.ndarray:
    """(x bits..., z bits...) as a length-2n GF(2) vector."""
    n = p.n
    v = np.zeros(2 * n, dtype=np.uint8)
    for j in range(n):
        v[j] = (p.x_mask >> j) & 1
        v[n + j] = (p.z_mask >> j) & 1
    return v

def _pauli_from_vector(n: int, v) -> PauliString:
    x = z = 0
    for j in range(n):
        x |= int(v[j]) << j
        z |= int(v[n + j]) << j
    return PauliString.from_letters(n, x, z)


def _symplectic_matrix(t: CliffordTableau) -> np.ndarray:
    """Columns are the image vectors of X_1..X_n, Z_1..Z_n."""
    cols = [_pauli_vector(p) for p in (*t.x_images, *t.z_images)]
    return np.array(cols, dtype=np.uint8).T


def _lambda_matrix(n: int) -> np.ndarray:
    lam = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    lam[:n, n:] = np.eye(n, dtype=np.uint8)
    lam[n:, :n] = np.eye(n, dtype=np.uint8)
    return lam


def _solve_affine_gf2(A: np.ndarray, b: np.ndarray):
    """Particular solution and nullspace basis of A v = b over GF(2).

    Returns (particular, basis) or None when inconsistent.
    """
    rows, cols = A.shape
    M = np.concatenate([A % 2, (b % 2).reshape(-1, 1)], axis=1).astype(np.uint8)
    pivots = []
    r = 0
    for c in range(cols):
        sel = np.flatnonzero(M[r:, c]) + r
        if sel.size == 0:
            continue
        if sel[0] != r:
            M[[r, sel[0]]] = M[[sel[0], r]]
        hit = np.flatnonzero(M[:, c])
        hit = hit[hit != r]
        M[hit] ^= M[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if np.any(M[r:, cols]):
        return None
    part = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(pivots):
        part[c] = M[i, cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = M[i, f]
        basis.append(v)
    return part, basis


def _sym_form_rows(fixed_vectors, n: int) -> np.ndarray:
    """Constraint rows: symplectic product of the unknown with each fixed vector."""
    lam = _lambda_matrix(n)
    return (np.array(fixed_vectors, dtype=np.uint8) @ lam) % 2


def sample_uniform(n: int, rng) -> CliffordTableau:
    """Uniform tableau (Clifford group mod phase) by row-by-row symplectic completion.

    At step i the X-image is a uniform nonzero solution of the homogeneous
    commutation constraints, then the Z-image a uniform solution of the affine
    system forcing anticommutation with its partner.  The symplectic group
    acts transitively on partial systems, so stepwise-uniform is globally
    uniform; signs are then independent fair bits.
    """
    if n < 1:
        raise DimensionError("n must be >= 1")
    rng = np.random.default_rng(rng)
    fixed = []        # chosen image vectors in order x1, z1, x2, z2, ...
    constraints = []  # required symplectic products against `fixed`
    images_x, images_z = [], []
    for i in range(n):
        # X-image: commute with everything so far; exclude the zero vector.
        if fixed:
            A = _sym_form_rows(fixed, n)
            b = np.zeros(len(fixed), dtype=np.uint8)
            part, basis = _solve_affine_gf2(A, b)
        else:
            part, basis = np.zeros(2 * n, dtype=np.uint8), [
                np.eye(2 * n, dtype=np.uint8)[j] for j in range(2 * n)
            ]
        # homogeneous system: solutions = span(basis); sample a nonzero one
        coeff_index = int(rng.integers(1, 2 ** len(basis)))
        vx = np.zeros(2 * n, dtype=np.uint8)
        for j, base in enumerate(basis):
            if (coeff_index >> j) & 1:
                vx ^= base
        fixed.append(vx)
        constraints.append(0)

        # Z-image: commute with all previous, anticommute with vx.
        A = _sym_form_rows(fixed, n)
        b = np.zeros(len(fixed), dtype=np.uint8)
        b[-1] = 1
        part, basis = _solve_affine_gf2(A, b)
        vz = part.copy()
        if basis:
            coeff_index = int(rng.integers(0, 2 ** len(basis)))
            for j, base in enumerate(basis):
                if (coeff_index >> j) & 1:
                    vz ^= base
        fixed.append(vz)
        constraints.append(1)

        sx = 2 * int(rng.integers(0, 2))
        sz = 2 * int(rng.integers(0, 2))
        px = _pauli_from_vector(n, vx)
        pz = _pauli_from_vector(n, vz)
        images_x.append(px.with_phase_exp(px.phase_exp + sx))
        images_z.append(pz.with_phase_exp(pz.phase_exp + sz))
    return CliffordTableau(n, tuple(images_x), tuple(images_z))


def enumerate_group(n: int):
    """Every tableau (Clifford mod phase), exhaustively.  Feasible for n <= 2."""
    if n > 2:
        raise DimensionError("exhaustive enumeration capped at n=2")

    def extend(fixed, pairs_left):
        if pairs_left == 0:
            yield list(fixed)
            return
        if fixed:
            A = _sym_form_rows(fixed, n)
            sol = _solve_affine_gf2(A, np.zeros(len(fixed), dtype=np.uint8))
            _, basis = sol
        else:
            basis = [np.eye(2 * n, dtype=np.uint8)[j] for j in range(2 * n)]
        for cx in range(1, 2 ** len(basis)):
            vx = np.zeros(2 * n, dtype=np.uint8)
            for j, base in enumerate(basis):
                if (cx >> j) & 1:
                    vx ^= base
            A2 = _sym_form_rows(fixed + [vx], n)
            b2 = np.zeros(len(fixed) + 1, dtype=np.uint8)
            b2[-1] = 1
            part, basis2 = _solve_affine_gf2(A2, b2)
            for cz in range(2 ** len(basis2)):
                vz = part.copy()
                for j, base in enumerate(basis2):
                    if (cz >> j) & 1:
                        vz ^= base
                yield from extend(fixed + [vx, vz], pairs_left - 1)

    for vecs in extend([], n):
        xs = [_pauli_from_vector(n, v) for v in vecs[0::2]]
        zs = [_pauli_from_vector(n, v) for v in vecs[1::2]]
        for signs in itertools.product((0, 2), repeat=2 * n):
            xi = tuple(p.with_phase_exp(p.phase_exp + s) for p, s in zip(xs, signs[:n]))
            zi = tuple(p.with_phase_exp(p.phase_exp + s) for p, s in zip(zs, signs[n:]))
            yield CliffordTableau(n, xi, zi)


# convenience single-qubit / two-qubit named tableaux used in tests and demos

def hadamard_tableau() -> CliffordTableau:
    return CliffordTableau(
        1,
        (PauliString.from_label("Z"),),
        (PauliString.from_label("X"),),
    )


def cnot_tableau() -> CliffordTableau:
    """Control qubit 0, target qubit 1."""
    return CliffordTableau(
        2,
        (PauliString.from_label("XX"), PauliString.from_label("IX")),
        (PauliString.from_label("ZI"), PauliString.from_label("ZZ")),
    )


def phase_gate_tableau() -> CliffordTableau:
    """S = diag(1, i): X -> Y, Z -> Z."""
    return CliffordTableau(
        1,
        (PauliString.from_label("Y"),),
        (PauliString.from_label("Z"),),
    )
