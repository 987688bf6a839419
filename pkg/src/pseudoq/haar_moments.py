"""Haar moment operators, k-design distance metrics and definition conversions.

The Haar k-fold moment operator E[U^{(x)k,k}] is built from the k! permutation
states via a Gram pseudo-inverse, so its entries are exact monomial averages.
Distances between an ensemble's moment operator and the Haar one are exposed
under the TRACE / OPNORM / MONOMIAL_MAX metrics, with the dimension-factor
conversion graph between the approximate-design definitions.
"""

from __future__ import annotations

import heapq
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .pauli import DimensionError, all_hermitian_strings

DENSE_GUARD = 2**20

DEF_NAMES = ("DIAMOND", "TWIRL", "TRACE", "MONOMIAL", "OPNORM")

# Conversion edges (from, to) -> exponent of d, or ("TWIRL" edges) fixed factors.
# Factors multiply epsilon; composition takes the cheapest product path.
_EDGES = {
    ("OPNORM", "TRACE"): lambda d, k: float(d) ** (2 * k),
    ("TRACE", "OPNORM"): lambda d, k: 1.0,
    ("MONOMIAL", "OPNORM"): lambda d, k: float(d) ** k,
    ("OPNORM", "DIAMOND"): lambda d, k: float(d) ** k,
    ("DIAMOND", "OPNORM"): lambda d, k: float(d) ** (k / 2),
    ("TRACE", "MONOMIAL"): lambda d, k: float(d) ** k,
    ("MONOMIAL", "TWIRL"): lambda d, k: float(d) ** 5,
    ("TWIRL", "MONOMIAL"): lambda d, k: 1.0,
}
_TWIRL_EDGES = {("MONOMIAL", "TWIRL"), ("TWIRL", "MONOMIAL")}


class ConversionError(ValueError):
    """No conversion path between the requested definitions."""


@dataclass
class MomentOperator:
    """A (d^k x d^k -> itself) moment operator stored as a dense matrix on d^{2k}."""

    d: int
    k: int
    matrix: np.ndarray
    stderr: float | None = None
    conditioning: float | None = None


@dataclass
class GhatMatrix:
    """Pauli-basis moment coefficients; index tuples flattened as base-d^2 digits."""

    d: int
    k: int
    entries: np.ndarray

    def entry(self, q_tuple, p_tuple) -> float:
        nb = self.d**2
        qi = sum(q * nb**j for j, q in enumerate(reversed(q_tuple)))
        pi = sum(p * nb**j for j, p in enumerate(reversed(p_tuple)))
        return float(self.entries[qi, pi])


def permutation_operator(pi, N: int) -> np.ndarray:
    """Exact 0/1 subsystem permutation matrix S(pi) on (C^N)^{(x)k}.

    Convention: S(pi)|n_1..n_k> = |n_{pi^-1(1)}..n_{pi^-1(k)}>, i.e. the
    content of slot i moves to slot pi(i).
    """
    k = len(pi)
    if N**k > DENSE_GUARD:
        raise DimensionError("permutation operator exceeds the dense guard")
    dim = N**k
    mat = np.zeros((dim, dim))
    strides = [N ** (k - 1 - j) for j in range(k)]
    for idx in range(dim):
        digits = [(idx // strides[j]) % N for j in range(k)]
        out = sum(digits[pi[j]] * strides[j] for j in range(k))
        mat[out, idx] = 1.0
    return mat


def symmetric_state_average(d: int, k: int) -> MomentOperator:
    """E over Haar states of psi^{(x)k}: the symmetric projector / C(k+d-1, k)."""
    if d**k > DENSE_GUARD:
        raise DimensionError("dense guard exceeded")
    dim = d**k
    acc = np.zeros((dim, dim))
    for pi in itertools.permutations(range(k)):
        acc += permutation_operator(list(pi), d)
    sym = acc / math.factorial(k)
    return MomentOperator(d, k, sym / math.comb(k + d - 1, k))


def _pairing_state(pi, N: int) -> np.ndarray:
    """|E_{P(pi)}> = N^{-k/2} sum_n |n_1..n_k, n_{pi(1)}..n_{pi(k)}> as a dense vector."""
    k = len(pi)
    v = np.zeros(N ** (2 * k))
    strides = [N ** (2 * k - 1 - j) for j in range(2 * k)]
    for tup in itertools.product(range(N), repeat=k):
        idx = sum(tup[j] * strides[j] for j in range(k))
        idx += sum(tup[pi[j]] * strides[k + j] for j in range(k))
        v[idx] = 1.0
    return v / N ** (k / 2)


def pairing_gram(N: int, k: int) -> np.ndarray:
    """Gram matrix <E_{P(pi)}|E_{P(sigma)}> = N^{cycles(pi sigma^-1) - k}, exact."""
    perms = list(itertools.permutations(range(k)))
    g = np.empty((len(perms), len(perms)))
    for a, pa in enumerate(perms):
        for b, pb in enumerate(perms):
            # count cycles of pa o pb^-1
            inv_b = [0] * k
            for j, v in enumerate(pb):
                inv_b[v] = j
            comp = [pa[inv_b[j]] for j in range(k)]
            seen = [False] * k
            cycles = 0
            for s in range(k):
                if not seen[s]:
                    cycles += 1
                    t = s
                    while not seen[t]:
                        seen[t] = True
                        t = comp[t]
            g[a, b] = float(N) ** (cycles - k)
    return g


def haar_moment_projector(N: int, k: int) -> MomentOperator:
    """Orthogonal projector onto span{|E_{P(pi)}>}: the exact Haar moment operator."""
    if N ** (2 * k) > DENSE_GUARD:
        raise DimensionError("dense guard exceeded")
    if N < k:
        warnings.warn(f"N={N} < k={k}: pairing states are linearly dependent", stacklevel=2)
    perms = list(itertools.permutations(range(k)))
    V = np.column_stack([_pairing_state(list(p), N) for p in perms])
    g = pairing_gram(N, k)
    ginv = np.linalg.pinv(g)
    cond = float(np.linalg.cond(g))
    proj = V @ ginv @ V.T
    return MomentOperator(N, k, proj, conditioning=cond)


def ghat_closed_form(d: int, k: int) -> GhatMatrix:
    """The Pauli-basis Haar moment coefficients for k=1 and k=2.

    k=1: everything but the identity coefficient is erased.
    k=2: off-diagonal label pairs are erased; nonzero diagonal pairs mix
    uniformly with weight 1/(d^2-1); the identity pair is fixed.
    """
    nb = d**2
    if k == 1:
        m = np.zeros((nb, nb))
        m[0, 0] = 1.0
        return GhatMatrix(d, 1, m)
    if k == 2:
        dim = nb * nb
        m = np.zeros((dim, dim))
        m[0, 0] = 1.0
        w = 1.0 / (nb - 1)
        nz = [p * nb + p for p in range(1, nb)]
        for q in nz:
            for p in nz:
                m[q, p] = w
        return GhatMatrix(d, 2, m)
    raise ValueError("closed form implemented for k in {1, 2}; use haar_moment_projector")


def ghat_from_moment_operator(op: MomentOperator) -> GhatMatrix:
    """Basis-change a moment operator on (C^d)^{(x)2k} into Pauli coefficients.

    Uses the low-rank pairing-state form when available, else the O(dim^3)
    dense change of basis.  Requires d a power of two (Pauli basis).
    """
    d, k = op.d, op.k
    n = int(np.log2(d))
    if 2**n != d:
        raise DimensionError("Pauli basis needs d a power of two")
    paulis = [p.to_dense() for p in all_hermitian_strings(n)]
    nb = d**2
    dim = nb**k
    V = np.empty((d ** (2 * k), dim), dtype=complex)
    for idx, tup in enumerate(itertools.product(range(nb), repeat=k)):
        m = paulis[tup[0]]
        for t in tup[1:]:
            m = np.kron(m, paulis[t])
        V[:, idx] = m.reshape(-1)
    ghat = (V.conj().T @ op.matrix @ V) / d**k
    if np.max(np.abs(ghat.imag)) > 1e-9:
        warnings.warn("Pauli-basis coefficients have imaginary parts above 1e-9", stacklevel=2)
    return GhatMatrix(d, k, ghat.real)


def ghat_from_gram_route(N: int, k: int) -> GhatMatrix:
    """Pauli coefficients of the Gram-route Haar projector without the dense basis change.

    The projector is V W V^T over pairing states, so its Pauli matrix is
    d^{-k} M W M^H with M[p, pi] = <vec Sigma_p | E_{P(pi)}>; each pairing
    state has only N^k nonzero entries, keeping this cheap at N=8, k=2.
    """
    n = int(np.log2(N))
    if 2**n != N:
        raise DimensionError("Pauli basis needs N a power of two")
    paulis = [p.to_dense() for p in all_hermitian_strings(n)]
    perms = list(itertools.permutations(range(k)))
    nb = N**2
    dim = nb**k
    M = np.empty((dim, len(perms)), dtype=complex)
    for a, pi in enumerate(perms):
        for idx, tup in enumerate(itertools.product(range(nb), repeat=k)):
            # <E_{P(pi)} | vec(Sigma_p)> = N^{-k/2} sum_n prod_j (sigma_{p_j})_{n_j, n_{pi(j)}}
            acc = 0.0 + 0j
            for ns in itertools.product(range(N), repeat=k):
                term = 1.0 + 0j
                for j in range(k):
                    term *= paulis[tup[j]][ns[j], ns[pi[j]]]
                acc += term
            M[idx, a] = np.conj(acc) / N ** (k / 2)
    w = np.linalg.pinv(pairing_gram(N, k))
    ghat = (M @ w @ M.conj().T) / N**k
    return GhatMatrix(N, k, ghat.real)


# -- ensembles -------------------------------------------------------------------


@dataclass(frozen=True)
class TableauDescriptor:
    tableau: object


@dataclass(frozen=True)
class DenseDescriptor:
    matrix: tuple  # nested tuple for hashability; use .asarray()

    @staticmethod
    def of(m: np.ndarray) -> "DenseDescriptor":
        return DenseDescriptor(tuple(map(tuple, np.asarray(m, dtype=complex))))

    def asarray(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex)


@dataclass(frozen=True)
class PermutationDescriptor:
    perm: tuple
    N: int


@dataclass(frozen=True)
class FourierDescriptor:
    N: int


@dataclass(frozen=True)
class CircuitDescriptor:
    model: object  # random_circuit.CircuitModel
    length: int
    samples: int
    seed: int


@dataclass
class EnsembleSpec:
    """Weighted list of unitary descriptors; weights positive, summing to 1."""

    items: list = field(default_factory=list)  # (weight, descriptor) pairs

    def __post_init__(self):
        total = sum(w for w, _ in self.items)
        if any(w <= 0 for w, _ in self.items):
            raise ValueError("ensemble weights must be positive")
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"ensemble weights sum to {total}, not 1")

    @staticmethod
    def uniform(descriptors) -> "EnsembleSpec":
        descriptors = list(descriptors)
        w = 1.0 / len(descriptors)
        items = [(w, d) for d in descriptors]
        spec = EnsembleSpec.__new__(EnsembleSpec)
        spec.items = items
        return spec

    def to_json(self) -> str:
        import json

        return json.dumps([{"weight": w, **_descriptor_json(d)} for w, d in self.items])

    @staticmethod
    def from_json(text: str) -> "EnsembleSpec":
        import json

        items = []
        for obj in json.loads(text):
            items.append((obj["weight"], _descriptor_from_json(obj)))
        return EnsembleSpec(items)


def _descriptor_json(desc) -> dict:
    if isinstance(desc, TableauDescriptor):
        import json

        return {"kind": "tableau", "tableau": json.loads(desc.tableau.to_json())}
    if isinstance(desc, DenseDescriptor):
        m = desc.asarray()
        return {"kind": "dense", "re": m.real.tolist(), "im": m.imag.tolist()}
    if isinstance(desc, PermutationDescriptor):
        return {"kind": "permutation", "perm": list(desc.perm), "N": desc.N}
    if isinstance(desc, FourierDescriptor):
        return {"kind": "fourier", "N": desc.N}
    if isinstance(desc, CircuitDescriptor):
        return {
            "kind": "circuit",
            "n": desc.model.n,
            "gate_source": desc.model.gate_source,
            "length": desc.length,
            "samples": desc.samples,
            "seed": desc.seed,
        }
    raise TypeError(f"cannot serialize descriptor {type(desc).__name__}")


def _descriptor_from_json(obj: dict):
    kind = obj["kind"]
    if kind == "tableau":
        import json

        from .clifford import CliffordTableau

        return TableauDescriptor(CliffordTableau.from_json(json.dumps(obj["tableau"])))
    if kind == "dense":
        return DenseDescriptor.of(np.array(obj["re"]) + 1j * np.array(obj["im"]))
    if kind == "permutation":
        return PermutationDescriptor(tuple(obj["perm"]), obj["N"])
    if kind == "fourier":
        return FourierDescriptor(obj["N"])
    if kind == "circuit":
        from .random_circuit import CircuitModel

        return CircuitDescriptor(
            CircuitModel(obj["n"], obj["gate_source"]), obj["length"], obj["samples"], obj["seed"]
        )
    raise ValueError(f"unknown descriptor kind {kind!r}")


def fourier_matrix(N: int) -> np.ndarray:
    """The N-dimensional Fourier transform with omega = exp(2 pi i / N)."""
    m, n = np.meshgrid(np.arange(1, N + 1), np.arange(1, N + 1), indexing="ij")
    return np.exp(2j * np.pi * m * n / N) / np.sqrt(N)


def permutation_matrix(perm, N: int) -> np.ndarray:
    b = np.zeros((N, N))
    for i in range(N):
        b[perm[i], i] = 1.0
    return b


def _descriptor_unitary(desc) -> np.ndarray:
    if isinstance(desc, TableauDescriptor):
        return desc.tableau.to_unitary()
    if isinstance(desc, DenseDescriptor):
        return desc.asarray()
    if isinstance(desc, PermutationDescriptor):
        return permutation_matrix(desc.perm, desc.N)
    if isinstance(desc, FourierDescriptor):
        return fourier_matrix(desc.N)
    if isinstance(desc, np.ndarray):
        return desc
    raise TypeError(f"cannot materialize descriptor {type(desc).__name__}")


def kk_power(u: np.ndarray, k: int) -> np.ndarray:
    """U^{(x)k,k} = U^{(x)k} (x) (U*)^{(x)k}."""
    out = np.array([[1.0 + 0j]])
    for _ in range(k):
        out = np.kron(out, u)
    for _ in range(k):
        out = np.kron(out, u.conj())
    return out


def ensemble_moment(ens: EnsembleSpec, k: int, rng=None) -> MomentOperator:
    """E_{U~nu}[U^{(x)k,k}] by weighted sum; circuit descriptors are Monte-Carlo
    averaged with a batch-replica standard error."""
    from .random_circuit import sample_circuit  # local import to avoid a cycle

    d = None
    acc = None
    stderr = 0.0
    sampled = False
    for w, desc in ens.items:
        if isinstance(desc, CircuitDescriptor):
            rng_local = np.random.default_rng(desc.seed if rng is None else rng)
            model = desc.model
            dim = 2**model.n
            if dim ** (2 * k) > DENSE_GUARD:
                raise DimensionError("dense guard exceeded")
            batches = max(2, min(8, desc.samples))
            per = max(1, desc.samples // batches)
            batch_means = []
            for _ in range(batches):
                bacc = np.zeros((dim ** (2 * k), dim ** (2 * k)), dtype=complex)
                for _ in range(per):
                    u = sample_circuit(model, desc.length, rng_local)
                    bacc += kk_power(u, k)
                batch_means.append(bacc / per)
            mean = sum(batch_means) / batches
            spread = np.sqrt(
                sum(np.linalg.norm(b - mean) ** 2 for b in batch_means) / (batches - 1)
            )
            stderr += w * float(spread) / np.sqrt(batches)
            sampled = True
            contrib = mean
            dd = dim
        else:
            u = _descriptor_unitary(desc)
            dd = u.shape[0]
            if dd ** (2 * k) > DENSE_GUARD:
                raise DimensionError("dense guard exceeded")
            contrib = kk_power(u, k)
        if acc is None:
            d, acc = dd, w * contrib
        else:
            if dd != d:
                raise DimensionError("mixed dimensions in ensemble")
            acc = acc + w * contrib
    return MomentOperator(d, k, acc, stderr=stderr if sampled else None)


def design_distance(ens: EnsembleSpec, k: int, metric: str, rng=None):
    """Distance between the ensemble moment operator and the Haar one.

    TRACE: Schatten 1-norm.  OPNORM: operator norm.  MONOMIAL_MAX: d^k times
    the max-abs entry difference, so the MONOMIAL threshold reads epsilon
    directly.  Returns a float, or (estimate, stderr) for sampled ensembles.
    """
    mom = ensemble_moment(ens, k, rng=rng)
    haar = haar_moment_projector(mom.d, k)
    delta = mom.matrix - haar.matrix
    if metric == "TRACE":
        val = float(np.sum(np.linalg.svd(delta, compute_uv=False)))
    elif metric == "OPNORM":
        val = float(np.linalg.norm(delta, 2))
    elif metric == "MONOMIAL_MAX":
        val = float(mom.d**k * np.max(np.abs(delta)))
    else:
        raise ValueError(f"unknown metric {metric!r}")
    if mom.stderr is not None:
        return val, mom.stderr
    return val


def epsilon_convert(frm: str, to: str, d: int, k: int, eps: float) -> float:
    """epsilon under a different approximate-design definition, via the cheapest
    product of conversion-edge factors; TWIRL edges exist for k=2 only."""
    for name in (frm, to):
        if name not in DEF_NAMES:
            raise ConversionError(f"unknown definition {name!r}")
    if frm == to:
        return eps
    best = {frm: 1.0}
    heap = [(1.0, frm)]
    while heap:
        factor, node = heapq.heappop(heap)
        if node == to:
            return eps * factor
        if factor > best.get(node, np.inf):
            continue
        for (a, b), fn in _EDGES.items():
            if a != node:
                continue
            if (a, b) in _TWIRL_EDGES and k != 2:
                continue
            nf = factor * fn(d, k)
            if nf < best.get(b, np.inf):
                best[b] = nf
                heapq.heappush(heap, (nf, b))
    raise ConversionError(
        f"no conversion path {frm} -> {to}"
        + (" (TWIRL edges require k=2)" if "TWIRL" in (frm, to) and k != 2 else "")
    )


UNIT_EIGENVALUE_TOL = 1e-9


def copy_gap(moment: MomentOperator | np.ndarray, k: int | None = None):
    """Unit-eigenvalue count and gap of a gate-distribution moment operator.

    Accepts a MomentOperator (e.g. from ensemble_moment at the gate scale) or a
    raw matrix.  Returns (unit_count, gap, spectrum_moduli sorted desc).
    """
    m = moment.matrix if isinstance(moment, MomentOperator) else moment
    if m.shape[0] > 4096:
        raise DimensionError("dense eigensolve guard exceeded")
    lam = np.abs(np.linalg.eigvals(m))
    lam.sort()
    lam = lam[::-1]
    unit = int(np.sum(lam >= 1 - UNIT_EIGENVALUE_TOL))
    below = lam[lam < 1 - UNIT_EIGENVALUE_TOL]
    gap = float(1 - below[0]) if below.size else 1.0
    return unit, gap, lam
