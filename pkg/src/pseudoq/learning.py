"""Black-box learning and testing of Pauli, Clifford and hierarchy unitaries.

Oracles hide their backing behind apply-to-register calls with exact query
counters.  Learning protocols prepare a maximally entangled register, push the
unknown channel through one half, and read the generalized Bell outcome,
whose distribution over Pauli classes is |tr(W sigma_q)|^2 / 4^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clifford import CliffordTableau, SymplecticError, invert, synthesize
from .pauli import DimensionError, PauliString, all_hermitian_strings

DENSE_ORACLE_LIMIT = 6


class MeasurementNotConcentrated(RuntimeError):
    """Bell statistics are not a point mass: the backing is not the promised class."""


class PromiseViolation(RuntimeError):
    """Observed statistics are inconsistent with the learning promise."""


# -- distances -------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceValue:
    value: float
    kind: str  # "D" (phase-invariant) or "D_plus"


def distance_tableaux(a: CliffordTableau, b: CliffordTableau) -> DistanceValue:
    """Phase-invariant distance between Cliffords, exact at zero.

    Equal tableaux have identical conjugation action, hence equal unitaries up
    to global phase, hence D = 0 exactly; the dense formula would return the
    sqrt-amplified rounding floor (~1e-8) instead.
    """
    if a == b:
        return DistanceValue(0.0, "D")
    return distance(a.to_unitary(), b.to_unitary())


def distance(u1: np.ndarray, u2: np.ndarray, kind: str = "D") -> DistanceValue:
    """D+ = sqrt(1 - Re tr(U1 U2^dag)/d);  D = sqrt(1 - |tr(U1 U2^dag)/d|^2)."""
    d = u1.shape[0]
    for m in (u1, u2):
        if np.max(np.abs(m.conj().T @ m - np.eye(d))) > 1e-8:
            import warnings

            warnings.warn("distance() received a non-unitary input", stacklevel=2)
    t = np.trace(u1 @ u2.conj().T) / d
    if kind == "D_plus":
        return DistanceValue(math.sqrt(max(0.0, 1.0 - t.real)), "D_plus")
    if kind == "D":
        return DistanceValue(math.sqrt(max(0.0, 1.0 - abs(t) ** 2)), "D")
    raise ValueError(f"unknown distance kind {kind!r}")


# -- registers ---------------------------------------------------------------------


class TableauRegister:
    """Accumulates a Clifford channel exactly; Bell readout of Pauli channels."""

    def __init__(self, n: int):
        self.n = n
        self.acc = CliffordTableau.identity(n)

    def apply_tableau(self, t: CliffordTableau) -> None:
        self.acc = t.compose(self.acc)

    def apply_pauli(self, p: PauliString) -> None:
        # left-multiplying by a Pauli only flips image signs
        self.apply_tableau(_pauli_conjugation_tableau(p))

    def bell_outcome(self, rng=None) -> PauliString:
        n = self.n
        x_bits = z_bits = 0
        for i in range(n):
            ix, iz = self.acc.x_images[i], self.acc.z_images[i]
            if ix.x_mask != (1 << i) or ix.z_mask != 0 or iz.x_mask != 0 or iz.z_mask != (1 << i):
                raise MeasurementNotConcentrated(
                    "channel is not a Pauli conjugation; outcome distribution is spread"
                )
            if ix.phase_exp == 2:
                z_bits |= 1 << i
            if iz.phase_exp == 2:
                x_bits |= 1 << i
        return PauliString.from_letters(n, x_bits, z_bits)

    def outcome_distribution(self) -> np.ndarray:
        raise MeasurementNotConcentrated("tableau register reads point masses only")


class DenseRegister:
    """Accumulates the dense channel matrix; Bell outcomes are sampled."""

    def __init__(self, n: int):
        if n > DENSE_ORACLE_LIMIT:
            raise DimensionError(f"dense oracle register capped at n={DENSE_ORACLE_LIMIT}")
        self.n = n
        self.acc = np.eye(2**n, dtype=complex)

    def apply_tableau(self, t: CliffordTableau) -> None:
        self.apply_dense(t.to_unitary())

    def apply_pauli(self, p: PauliString) -> None:
        self.apply_dense(p.to_dense())

    def apply_dense(self, u: np.ndarray) -> None:
        self.acc = u @ self.acc

    def outcome_distribution(self) -> np.ndarray:
        return channel_pauli_distribution(self.acc)

    def bell_outcome(self, rng=None) -> PauliString:
        probs = self.outcome_distribution()
        if rng is None:
            # deterministic readout is only meaningful for a point mass
            if probs.max() < 1 - 1e-6:
                raise MeasurementNotConcentrated(
                    f"top outcome probability {probs.max():.4f} < 1: "
                    "channel is not a Pauli conjugation"
                )
            idx = int(np.argmax(probs))
        else:
            idx = int(np.random.default_rng(rng).choice(len(probs), p=probs))
        return PauliString.from_index(self.n, idx)


def channel_pauli_distribution(w: np.ndarray) -> np.ndarray:
    """Bell-outcome probabilities |tr(W sigma_q)|^2 / 4^n over Pauli indices."""
    d = w.shape[0]
    n = int(np.log2(d))
    probs = np.empty(4**n)
    for q in all_hermitian_strings(n):
        probs[q.index] = abs(np.trace(q.to_dense() @ w)) ** 2 / d**2
    s = probs.sum()
    if abs(s - 1) > 1e-8:
        raise ValueError("channel is not unitary: Bell distribution not normalized")
    return probs / s


def _pauli_conjugation_tableau(p: PauliString) -> CliffordTableau:
    n = p.n
    xs, zs = [], []
    for i in range(n):
        sx = 2 * ((p.z_mask >> i) & 1)
        sz = 2 * ((p.x_mask >> i) & 1)
        xs.append(PauliString(n, 1 << i, 0, sx))
        zs.append(PauliString(n, 0, 1 << i, sz))
    return CliffordTableau._unchecked(n, tuple(xs), tuple(zs))


# -- oracles ----------------------------------------------------------------------


class UnitaryOracle:
    """Oracle access to an unknown unitary and its adjoint, with exact counters."""

    def __init__(self, backing, n: int):
        self.n = n
        self._backing = backing
        self.queries_forward = 0
        self.queries_adjoint = 0

    # counters live here; physics in _apply/_apply_adjoint

    def apply(self, reg) -> None:
        self._bill_forward()
        self._apply(reg)

    def apply_adjoint(self, reg) -> None:
        self._bill_adjoint()
        self._apply_adjoint(reg)

    def _bill_forward(self) -> None:
        self.queries_forward += 1

    def _bill_adjoint(self) -> None:
        self.queries_adjoint += 1

    def bill_repeats(self, forward: int = 0, adjoint: int = 0) -> None:
        """Account for i.i.d. repetitions of an already-built fixed channel."""
        self.queries_forward += forward
        self.queries_adjoint += adjoint

    def new_register(self):
        raise NotImplementedError

    def _apply(self, reg) -> None:
        raise NotImplementedError

    def _apply_adjoint(self, reg) -> None:
        raise NotImplementedError

    @property
    def queries(self) -> tuple:
        return (self.queries_forward, self.queries_adjoint)


class TableauOracle(UnitaryOracle):
    def __init__(self, tableau: CliffordTableau):
        super().__init__(tableau, tableau.n)
        self._inverse = invert(tableau)

    def new_register(self):
        return TableauRegister(self.n)

    def _apply(self, reg) -> None:
        reg.apply_tableau(self._backing)

    def _apply_adjoint(self, reg) -> None:
        reg.apply_tableau(self._inverse)


class PauliOracle(TableauOracle):
    def __init__(self, p: PauliString):
        super().__init__(_pauli_conjugation_tableau(p))


class DenseOracle(UnitaryOracle):
    def __init__(self, u: np.ndarray):
        n = int(np.log2(u.shape[0]))
        super().__init__(np.asarray(u, dtype=complex), n)

    def new_register(self):
        return DenseRegister(self.n)

    def _apply(self, reg) -> None:
        reg.apply_dense(self._backing)

    def _apply_adjoint(self, reg) -> None:
        reg.apply_dense(self._backing.conj().T)


class AdjointView:
    """Presents oracle.adjoint as a forward-applicable handle, sharing counters."""

    def __init__(self, oracle):
        self._oracle = oracle
        self.n = oracle.n

    def apply(self, reg) -> None:
        self._oracle.apply_adjoint(reg)

    def bill_repeats(self, forward: int = 0, adjoint: int = 0) -> None:
        # repetitions of an adjoint-view channel are adjoint queries
        self._oracle.bill_repeats(forward=adjoint, adjoint=forward)

    def new_register(self):
        return self._oracle.new_register()


class ConjugationOracle(UnitaryOracle):
    """The composite channel  base sigma_g base^dag  as an oracle.

    Billing convention (matches the hierarchy-learning query accounting): one
    query to the composite counts as one same-direction query to the root
    oracle, although the physical sandwich uses both directions.  The channel
    is Hermitian, so adjoint queries run the same physics.
    """

    def __init__(self, base: UnitaryOracle, g: PauliString):
        super().__init__(None, base.n)
        self._base = base
        self._g = g

    def _root(self):
        b = self._base
        while isinstance(b, ConjugationOracle):
            b = b._base
        return b

    def _bill_forward(self) -> None:
        self._root().queries_forward += 1

    def _bill_adjoint(self) -> None:
        self._root().queries_adjoint += 1

    def bill_repeats(self, forward: int = 0, adjoint: int = 0) -> None:
        root = self._root()
        root.queries_forward += forward
        root.queries_adjoint += adjoint

    def new_register(self):
        return self._base.new_register()

    def _apply(self, reg) -> None:
        self._base._apply_adjoint(reg)
        reg.apply_pauli(self._g)
        self._base._apply(reg)

    def _apply_adjoint(self, reg) -> None:
        self._apply(reg)  # Hermitian channel


def generator_paulis(n: int):
    """sigma_{x_1}..sigma_{x_n}, sigma_{z_1}..sigma_{z_n}."""
    xs = [PauliString.from_letters(n, 1 << i, 0) for i in range(n)]
    zs = [PauliString.from_letters(n, 0, 1 << i) for i in range(n)]
    return xs + zs


# -- exact learning ---------------------------------------------------------------


def learn_pauli(oracle, n: int, rng=None) -> PauliString:
    """One forward query: Bell readout of the oracle channel itself."""
    reg = oracle.new_register()
    oracle.apply(reg)
    return reg.bell_outcome(rng)


def learn_clifford(oc, oc_dag, n: int, rng=None) -> CliffordTableau:
    """Recover a Clifford tableau exactly with 2n+1 forward / 2n adjoint queries.

    Step 1 learns the unsigned generator images through Bell readouts of the
    conjugated generators; step 2 learns the Pauli correction fixing the signs.
    """
    gens = generator_paulis(n)
    classes = []
    for g in gens:
        reg = oc.new_register()
        oc_dag.apply(reg)
        reg.apply_pauli(g)
        oc.apply(reg)
        classes.append(reg.bell_outcome(rng))
    try:
        cprime = synthesize(classes)
    except SymplecticError as exc:
        raise PromiseViolation(f"oracle is not a Clifford: {exc}") from exc
    reg = oc.new_register()
    oc.apply(reg)
    reg.apply_tableau(invert(cprime))
    sigma = reg.bell_outcome(rng)
    return _apply_sign_correction(cprime, sigma)


def _apply_sign_correction(cprime: CliffordTableau, sigma: PauliString) -> CliffordTableau:
    n = cprime.n
    xs, zs = [], []
    for i in range(n):
        alpha = 2 * ((sigma.z_mask >> i) & 1)  # -1 sign iff z bit set
        beta = 2 * ((sigma.x_mask >> i) & 1)
        px = cprime.x_images[i]
        pz = cprime.z_images[i]
        xs.append(px.with_phase_exp(px.phase_exp + alpha))
        zs.append(pz.with_phase_exp(pz.phase_exp + beta))
    return CliffordTableau(n, tuple(xs), tuple(zs))


@dataclass
class CkDescription:
    """Recursive description: level-1 leaves are Paulis, level-2 tableaux."""

    level: int
    n: int
    pauli: PauliString | None = None
    tableau: CliffordTableau | None = None
    images: dict = field(default_factory=dict)
    correction: PauliString | None = None

    def to_unitary(self) -> np.ndarray:
        if self.level == 1:
            return self.pauli.to_dense()
        if self.level == 2:
            return self.tableau.to_unitary()
        gens = generator_paulis(self.n)
        hs = []
        for idx, _ in enumerate(gens):
            v = self.images[idx].to_unitary()
            hs.append(_hermitize_involution(v))
        cprime = _unitary_from_conjugation_images(hs, self.n)
        return cprime @ self.correction.to_dense()


def _hermitize_involution(v: np.ndarray) -> np.ndarray:
    """Rescale a unitary known up to phase so it squares to the identity."""
    d = v.shape[0]
    z = np.trace(v @ v) / d
    if abs(abs(z) - 1) > 1e-8:
        raise PromiseViolation("image does not square to a phase: not a conjugated Pauli")
    return v / np.sqrt(z)


def _unitary_from_conjugation_images(hs, n: int) -> np.ndarray:
    """A unitary whose conjugation action sends each generator to the given
    Hermitian involution (each fixed up to sign)."""
    d = 2**n
    hx, hz = hs[:n], hs[n:]
    proj = np.eye(d, dtype=complex)
    for h in hz:
        proj = proj @ (np.eye(d) + h) / 2
    j = int(np.argmax(np.linalg.norm(proj, axis=0)))
    psi0 = proj[:, j]
    nrm = np.linalg.norm(psi0)
    if nrm < 1e-9:
        raise PromiseViolation("inconsistent images: empty joint eigenspace")
    psi0 = psi0 / nrm
    cols = np.empty((d, d), dtype=complex)
    for b in range(d):
        v = psi0
        for i in range(n):
            if (b >> (n - 1 - i)) & 1:
                v = hx[i] @ v
        cols[:, b] = v
    return cols


def learn_ck(oc, oc_dag, k: int, n: int, rng=None) -> CkDescription:
    """Learn a hierarchy element recursively; counters follow the standard
    accounting T(k) = ((2n)^k - 1)/(2n - 1) forward, (2n)^{k-1} adjoint."""
    if k > 3:
        raise DimensionError("hierarchy learning capped at level 3")
    if k == 3 and n > 2:
        raise DimensionError("level-3 learning capped at n=2")
    if k == 1:
        return CkDescription(1, n, pauli=learn_pauli(oc, n, rng))
    if k == 2:
        return CkDescription(2, n, tableau=learn_clifford(oc, oc_dag, n, rng))
    gens = generator_paulis(n)
    images = {}
    for idx, g in enumerate(gens):
        comp = ConjugationOracle(oc, g)
        images[idx] = learn_ck(comp, AdjointView(comp), k - 1, n, rng)
    # reconstruct C' and learn the Pauli correction with one forward query
    hs = [_hermitize_involution(images[i].to_unitary()) for i in range(2 * n)]
    cprime = _unitary_from_conjugation_images(hs, n)
    reg = oc.new_register()
    oc.apply(reg)
    reg.apply_dense(cprime.conj().T)
    sigma = reg.bell_outcome(rng)
    desc = CkDescription(k, n, images=images, correction=sigma)
    return desc


# -- approximate learning ------------------------------------------------------


@dataclass
class LearningConfig:
    eps: float
    delta: float
    repetition_constant: float = 4.0  # free constant inside the repetition budget

    def eps_prime(self, k: int) -> float:
        inner = 2.0 * (1.0 - (2.0 ** (k - 1) * self.eps) ** 2)
        if inner < 0:
            return -1.0
        return math.sqrt(inner) - 1.0

    def repetitions(self, n: int, k: int) -> int:
        ep = self.eps_prime(k)
        if ep <= 0:
            raise PromiseViolation(
                f"eps={self.eps} at level k={k} exceeds the uniqueness threshold "
                f"1/2^(k-1/2)={1.0 / 2 ** (k - 0.5):.4f}"
            )
        target = max((2 * n + 1) ** (k - 1), 2)
        return math.ceil(self.repetition_constant / ep**2 * math.log(target / self.delta))


def _repeated_bell_counts(reg, reps: int, rng) -> dict:
    """Outcome counts of `reps` i.i.d. Bell readouts of a fixed channel."""
    try:
        probs = reg.outcome_distribution()
    except MeasurementNotConcentrated:
        out = reg.bell_outcome()
        return {out.index: reps}
    draws = np.random.default_rng(rng).multinomial(reps, probs)
    return {int(i): int(c) for i, c in enumerate(draws) if c}


def _majority_class(n: int, counts: dict, reps: int) -> tuple:
    best = max(counts, key=counts.get)
    return PauliString.from_index(n, best), counts[best] / reps


def learn_closest(oc, oc_dag, k: int, config: LearningConfig, rng=None):
    """Find the unique closest hierarchy element under the promise D(U, C) <= eps.

    Majority voting over the Bell readouts at each level with the repetition
    budget from the config; majorities below 50% raise PromiseViolation.
    """
    n = oc.n
    rng = np.random.default_rng(rng)
    if k == 1:
        reps = config.repetitions(n, 1)
        reg = oc.new_register()
        oc.apply(reg)
        oc.bill_repeats(forward=reps - 1)
        out, share = _majority_class(n, _repeated_bell_counts(reg, reps, rng), reps)
        if share <= 0.5:
            raise PromiseViolation(f"no majority outcome (top share {share:.2f})")
        return out
    if k != 2:
        raise DimensionError("approximate learning implemented for k <= 2")
    reps = config.repetitions(n, 2)
    gens = generator_paulis(n)
    classes = []
    for g in gens:
        reg = oc.new_register()
        oc_dag.apply(reg)
        reg.apply_pauli(g)
        oc.apply(reg)
        oc.bill_repeats(forward=reps - 1, adjoint=reps - 1)
        out, share = _majority_class(n, _repeated_bell_counts(reg, reps, rng), reps)
        if share <= 0.5:
            raise PromiseViolation(f"no majority outcome (top share {share:.2f})")
        classes.append(out)
    try:
        cprime = synthesize(classes)
    except SymplecticError as exc:
        raise PromiseViolation(f"majority images not symplectic: {exc}") from exc

    reg = oc.new_register()
    oc.apply(reg)
    reg.apply_tableau(invert(cprime))
    oc.bill_repeats(forward=reps - 1)
    sigma, share = _majority_class(n, _repeated_bell_counts(reg, reps, rng), reps)
    if share <= 0.5:
        raise PromiseViolation(f"no majority correction (top share {share:.2f})")
    return _apply_sign_correction(cprime, sigma)


def estimate_pauli_coefficient(oracle, p: PauliString, eta: float, delta: float, rng=None) -> float:
    """Estimate |tr(U sigma_p)| / 2^n to within eta w.p. >= 1 - delta.

    Bell-samples the oracle channel; the outcome-p frequency estimates the
    squared coefficient.  Uses ceil(2 ln(2/delta) / eta^2) forward queries.
    """
    rng = np.random.default_rng(rng)
    samples = math.ceil(2.0 * math.log(2.0 / delta) / eta**2)
    reg = oracle.new_register()
    oracle.apply(reg)
    oracle.bill_repeats(forward=samples - 1)
    probs = reg.outcome_distribution()
    draws = rng.multinomial(samples, probs)
    freq = draws[p.index] / samples
    return math.sqrt(max(freq, 0.0))


def test_clifford(
    oc, oc_dag, eps: float, delta: float, rng=None, config: LearningConfig | None = None
) -> str:
    """CLOSE/FAR Clifford property test.

    Learns the unique nearby Clifford, then Bell-estimates the 2n overlap
    coefficients |tr(U sigma_g U^dag C sigma_g C^dag)| / 2^n and answers CLOSE
    iff all reach 1 - 3 eps^2 / (16 n^2).
    """
    n = oc.n
    rng = np.random.default_rng(rng)
    if config is None:
        config = LearningConfig(eps=1.0 / 3.0, delta=delta / 2.0)
    ctab = learn_closest(oc, oc_dag, 2, config, rng)
    precision = eps**2 / (16.0 * n**2)
    threshold = 1.0 - 3.0 * precision
    # near-1 frequencies: Bernstein regime, so samples scale with 1/precision
    samples = math.ceil(9.0 * math.log(8.0 * n / delta) / (2.0 * precision))
    for g in generator_paulis(n):
        target = ctab.conjugate_pauli(g)
        reg = oc.new_register()
        oc_dag.apply(reg)
        reg.apply_pauli(g)
        oc.apply(reg)
        oc.bill_repeats(forward=samples - 1, adjoint=samples - 1)
        probs = reg.outcome_distribution()
        draws = rng.multinomial(samples, probs)
        freq = draws[target.index] / samples
        coeff = math.sqrt(max(freq, 0.0))
        if coeff < threshold:
            return "FAR"
    return "CLOSE"


_dense_group_cache: dict = {}


def _dense_clifford_stack(n: int) -> np.ndarray:
    if n not in _dense_group_cache:
        from .clifford import enumerate_group

        mats = [tab.to_unitary() for tab in enumerate_group(n)]
        _dense_group_cache[n] = np.stack(mats)
    return _dense_group_cache[n]


def closest_clifford_distance(u: np.ndarray, n: int) -> float:
    """min over the (enumerated) Clifford group of D(U, C); n <= 2."""
    stack = _dense_clifford_stack(n)
    d = u.shape[0]
    traces = np.einsum("kij,ij->k", stack.conj(), u) / d
    best = float(np.max(np.abs(traces) ** 2))
    return math.sqrt(max(0.0, 1.0 - best))
