"""Random two-qubit-gate circuits and the exact second-moment evolution.

One step applies a gate from the source distribution to a uniformly random
qubit pair.  For a two-copy-gapped source the expected Pauli-pair coefficients
evolve by a fixed linear map; for the Haar-on-U(4) source (and the two-qubit
Clifford group, an exact 2-design with the identical moment matrix) the local
rule is: erase coefficients that differ on the chosen pair, keep the identity
pair, and mix the 15 nonzero equal-pair labels uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse.linalg as spla

from .pauli import DimensionError

GATE_SOURCES = ("haar_u4", "clifford2")


@dataclass(frozen=True)
class CircuitModel:
    n: int
    gate_source: str = "haar_u4"
    pairing: str = "all_pairs"

    def __post_init__(self):
        if self.n < 2:
            raise DimensionError("circuit model needs n >= 2")
        if self.gate_source not in GATE_SOURCES:
            raise ValueError(f"unsupported gate source {self.gate_source!r}")
        if self.pairing != "all_pairs":
            raise ValueError("only uniform all-pairs pairing is implemented")


@dataclass
class MomentVector:
    """Sparse map (p1, p2) -> coefficient over base-4 Pauli label integers."""

    n: int
    data: dict = field(default_factory=dict)

    def diagonal_sum(self):
        return sum(v for (p1, p2), v in self.data.items() if p1 == p2)

    def copy(self) -> "MomentVector":
        return MomentVector(self.n, dict(self.data))


def zero_state_moments(n: int, exact: bool = False) -> MomentVector:
    """gamma for |0..0><0..0| copied twice: 1/2^n on each diagonal Z-type label."""
    w = Fraction(1, 2**n) if exact else 1.0 / 2**n
    data = {}
    for bits in range(2**n):
        p = 0
        for j in range(n):
            if (bits >> j) & 1:
                p |= 2 << (2 * j)  # letter Z at site j
        data[(p, p)] = w
    return MomentVector(n, data)


def _site_labels(p: int, n: int):
    return [(p >> (2 * j)) & 3 for j in range(n)]


def _with_site(p: int, j: int, letter: int) -> int:
    return (p & ~(3 << (2 * j))) | (letter << (2 * j))


class StepOperator:
    """The expected one-step map P = (1/(n(n-1))) sum_{i != j} G^{(ij)}."""

    def __init__(self, model: CircuitModel, local_matrix: np.ndarray | None = None):
        self.model = model
        self.n = model.n
        self._local = local_matrix  # measured 256x256 moment matrix override

    # -- sparse exact application ------------------------------------------

    def apply(self, mv: MomentVector) -> MomentVector:
        """One exact step on a sparse coefficient map.

        Coefficients are split into sectors by the set of positions where the
        two labels differ; each sector is closed under the dynamics and its
        free part follows the same local mixing rule.
        """
        n = self.n
        npairs = n * (n - 1)
        sectors: dict = {}
        for (p1, p2), v in mv.data.items():
            s1, s2 = _site_labels(p1, n), _site_labels(p2, n)
            frozen = tuple((j, s1[j], s2[j]) for j in range(n) if s1[j] != s2[j])
            free_pos = [j for j in range(n) if s1[j] == s2[j]]
            key = frozen
            if key not in sectors:
                sectors[key] = (free_pos, {})
            free_label = tuple(s1[j] for j in free_pos)
            acc = sectors[key][1]
            acc[free_label] = acc.get(free_label, 0) + v

        zero = Fraction(0) if _is_exact(mv) else 0.0
        fifteenth = Fraction(1, 15) if _is_exact(mv) else 1.0 / 15.0
        out: dict = {}
        for frozen, (free_pos, vec) in sectors.items():
            c = len(free_pos)
            # Pairs touching a frozen (differing) position erase the sector,
            # so only ordered pairs of free axes contribute to the average.
            for ai in range(c):
                for aj in range(c):
                    if ai == aj:
                        continue
                    groups: dict = {}
                    for lab, v in vec.items():
                        rest = tuple(l for t, l in enumerate(lab) if t not in (ai, aj))
                        pair = (lab[ai], lab[aj])
                        g = groups.setdefault(rest, {})
                        g[pair] = g.get(pair, zero) + v
                    for rest, g in groups.items():
                        tot = sum(g.values())
                        z = g.get((0, 0), zero)
                        mixed = (tot - z) * fifteenth
                        for r1 in range(4):
                            for r2 in range(4):
                                val = z if (r1, r2) == (0, 0) else mixed
                                if val == 0:
                                    continue
                                lab = _insert_pair(rest, ai, aj, r1, r2, c)
                                _accumulate(out, frozen, free_pos, lab, val, n)
        scale = Fraction(1, npairs) if _is_exact(mv) else 1.0 / npairs
        data = {k: v * scale for k, v in out.items() if v != 0}
        return MomentVector(n, data)

    # -- dense matrices ------------------------------------------------------

    def local_moment_matrix(self) -> np.ndarray:
        """The 256x256 Pauli-pair matrix of the gate source on two qubits.

        Site layout: index 16*l_i + l_j with per-site label l = 4a + b, where
        a, b are the letters of the two copies at that site.  Off-diagonal
        labels (a != b anywhere) are erased; (0,0) is kept; the 15 nonzero
        diagonal labels mix uniformly.  haar_u4 is the closed form; clifford2
        shares it because the two-qubit Clifford group is an exact 2-design
        (verified in tests by Monte-Carlo over sampled tableaux).  A measured
        matrix passed at construction overrides the closed form.
        """
        if self._local is not None:
            return self._local
        g = np.zeros((256, 256))
        diag = [(4 * a + a) * 16 + (4 * c + c) for a in range(4) for c in range(4)]
        zero = diag[0]
        nz = [L for L in diag if L != zero]
        g[zero, zero] = 1.0
        g[np.ix_(nz, nz)] = 1.0 / 15.0
        return g

    def diagonal_chain_matrix(self, exact: bool = False) -> np.ndarray:
        """Transition matrix restricted to diagonal labels; row-stochastic."""
        n = self.n
        if n > 5:
            raise DimensionError("diagonal chain matrix capped at n=5")
        dim = 4**n
        one = Fraction(1) if exact else 1.0
        m = np.zeros((dim, dim), dtype=object if exact else float)
        npairs = n * (n - 1)
        w_pair = one * 2 / npairs
        for i in range(n):
            for j in range(i + 1, n):
                for p in range(dim):
                    li = (p >> (2 * i)) & 3
                    lj = (p >> (2 * j)) & 3
                    if (li, lj) == (0, 0):
                        m[p, p] += w_pair
                    else:
                        base = _with_site(_with_site(p, i, 0), j, 0)
                        for r1 in range(4):
                            for r2 in range(4):
                                if (r1, r2) == (0, 0):
                                    continue
                                q = _with_site(_with_site(base, i, r1), j, r2)
                                m[p, q] += w_pair / 15
        return m

    def full_matrix(self) -> np.ndarray:
        """Dense 16^n step matrix on all (p1, p2) labels; n <= 3."""
        n = self.n
        if n > 3:
            raise DimensionError("dense full step matrix capped at n=3 (use operator)")
        dim = 16**n
        eye = np.eye(dim)
        return self._apply_batch(eye)

    def linear_operator(self) -> spla.LinearOperator:
        dim = 16**self.n
        return spla.LinearOperator(
            (dim, dim),
            matvec=lambda v: self._apply_batch(v.reshape(-1, 1)).reshape(-1),
            matmat=self._apply_batch,
            dtype=float,
        )

    def _apply_batch(self, mat: np.ndarray) -> np.ndarray:
        """Apply P to each column of mat via tensor reshapes."""
        n = self.n
        g = self.local_moment_matrix()  # 256x256, symmetric
        dim = 16**n
        batch = mat.shape[1]
        acc = np.zeros_like(mat, dtype=float)
        for i in range(n):
            for j in range(n):
                if i >= j:
                    continue
                t = mat.reshape((16,) * n + (batch,))
                t = np.moveaxis(t, (i, j), (0, 1)).reshape(256, -1)
                t = g @ t
                t = t.reshape((16, 16) + (16,) * (n - 2) + (batch,))
                t = np.moveaxis(t, (0, 1), (i, j)).reshape(dim, batch)
                acc += 2 * t
        return acc / (n * (n - 1))


def _is_exact(mv: MomentVector) -> bool:
    return any(isinstance(v, Fraction) for v in mv.data.values())


def _insert_pair(rest: tuple, ai: int, aj: int, r1: int, r2: int, c: int) -> tuple:
    lab = []
    it = iter(rest)
    for t in range(c):
        if t == ai:
            lab.append(r1)
        elif t == aj:
            lab.append(r2)
        else:
            lab.append(next(it))
    return tuple(lab)


def _accumulate(out, frozen, free_pos, free_label, val, n):
    s1 = [0] * n
    s2 = [0] * n
    for (j, a, b) in frozen:
        s1[j], s2[j] = a, b
    for pos, lab in zip(free_pos, free_label):
        s1[pos] = s2[pos] = lab
    p1 = sum(l << (2 * j) for j, l in enumerate(s1))
    p2 = sum(l << (2 * j) for j, l in enumerate(s2))
    key = (p1, p2)
    out[key] = out.get(key, 0) + val


def step_operator(model: CircuitModel) -> StepOperator:
    return StepOperator(model)


def evolve_moments(model: CircuitModel, initial: MomentVector, t: int) -> MomentVector:
    """Expected coefficients after t steps; diagonal mass is conserved."""
    if t < 0:
        raise ValueError("t must be >= 0")
    op = StepOperator(model)
    mv = initial.copy()
    for _ in range(t):
        mv = op.apply(mv)
    return mv


def pair_index(p1: int, p2: int, n: int) -> int:
    """Flat index of (p1, p2) in the site layout: per-site (a, b) -> 4a + b."""
    L = 0
    for j in range(n):
        a = (p1 >> (2 * j)) & 3
        b = (p2 >> (2 * j)) & 3
        L += (4 * a + b) * 16**j
    return L


def haar_pair_matrix(n: int) -> np.ndarray:
    """Stationary projector on the (p1, p2) label space (site layout): the
    Pauli coefficients of the Haar moment operator at d = 2^n, k = 2."""
    dim = 16**n
    m = np.zeros((dim, dim))
    m[0, 0] = 1.0
    nz = [pair_index(p, p, n) for p in range(1, 4**n)]
    m[np.ix_(nz, nz)] = 1.0 / (4**n - 1)
    return m


def _embed_two_qubit(u4: np.ndarray, n: int, i: int, j: int) -> np.ndarray:
    """Lift a two-qubit gate to qubits (i, j) of an n-qubit register."""
    d = 2**n
    full = np.zeros((d, d), dtype=complex)
    rest = [q for q in range(n) if q not in (i, j)]
    # qubit q occupies bit (n-1-q) of the basis index
    def bit(q):
        return n - 1 - q

    for a in range(4):
        for b in range(4):
            amp = u4[a, b]
            if amp == 0:
                continue
            for r in range(2 ** (n - 2)):
                src = ((b >> 1) & 1) << bit(i) | (b & 1) << bit(j)
                dst = ((a >> 1) & 1) << bit(i) | (a & 1) << bit(j)
                for t, q in enumerate(rest):
                    if (r >> t) & 1:
                        src |= 1 << bit(q)
                        dst |= 1 << bit(q)
                full[dst, src] += amp
    return full


def sample_two_qubit_gate(model: CircuitModel, rng) -> np.ndarray:
    from scipy.stats import unitary_group

    if model.gate_source == "haar_u4":
        return unitary_group.rvs(4, random_state=rng)
    from .clifford import sample_uniform

    return sample_uniform(2, rng).to_unitary()


def sample_circuit(model: CircuitModel, length: int, rng) -> np.ndarray:
    """Product of `length` sampled two-qubit gates at sampled pairs (dense)."""
    if model.n > 8:
        raise DimensionError("dense circuit sampling capped at n=8")
    rng = np.random.default_rng(rng)
    d = 2**model.n
    u = np.eye(d, dtype=complex)
    for _ in range(length):
        i, j = rng.choice(model.n, size=2, replace=False)
        gate = sample_two_qubit_gate(model, rng)
        u = _embed_two_qubit(gate, model.n, int(i), int(j)) @ u
    return u


def exact_opnorm_distances(model: CircuitModel, lengths) -> list:
    """OPNORM distance ||P^t - Haar projector|| for each t, via the spectrum.

    P is symmetric with the Haar projector as its unit-eigenvalue spectral
    projector, so the distance is exactly (largest non-unit |eigenvalue|)^t.
    The top of the spectrum is computed once with a sparse eigensolver.
    """
    op = StepOperator(model)
    lam3 = second_largest_modulus(op)
    return [float(lam3**t) for t in lengths]


def second_largest_modulus(op: StepOperator, n_unit: int = 2) -> float:
    k = max(n_unit + 4, 8)
    lin = op.linear_operator()
    vals = spla.eigsh(lin, k=k, which="LM", return_eigenvectors=False, tol=1e-12)
    mods = np.sort(np.abs(vals))[::-1]
    unit = np.sum(mods > 1 - 1e-9)
    if unit != n_unit:
        raise RuntimeError(f"expected {n_unit} unit eigenvalues, found {unit}")
    return float(mods[n_unit])


def convergence_scan(
    model: CircuitModel,
    k: int,
    lengths,
    samples: int = 0,
    metric: str = "OPNORM",
    rng=None,
    method: str = "exact",
):
    """Rows (length, value, stderr) of design distance against circuit length.

    method='exact' (k=2 only) uses the spectral identity on the explicit step
    matrix; method='mc' Monte-Carlo samples circuits and averages U^{(x)k,k}.
    """
    from .haar_moments import CircuitDescriptor, EnsembleSpec, design_distance

    rows = []
    if method == "exact":
        if k != 2:
            raise ValueError("exact path implemented for k=2")
        if metric != "OPNORM":
            raise ValueError("exact path reports OPNORM")
        for t, dist in zip(lengths, exact_opnorm_distances(model, lengths)):
            rows.append((int(t), dist, 0.0))
        return rows
    rng = np.random.default_rng(rng)
    for t in lengths:
        ens = EnsembleSpec.uniform(
            [CircuitDescriptor(model, int(t), samples, int(rng.integers(2**32)))]
        )
        val, err = design_distance(ens, k, metric)
        rows.append((int(t), float(val), float(err)))
    return rows
