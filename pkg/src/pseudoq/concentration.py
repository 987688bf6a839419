"""Tail-bound evaluators and their paired Monte-Carlo falsification experiments.

Every evaluator returns a structured result carrying the bound value together
with precondition flags, because the bounds only hold in stated parameter
regimes.  Experiments estimate the corresponding empirical frequency so tests
can check bound >= frequency (falsification only; the constants are not tight).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

# Lipschitz-concentration constants
LEVY_C1 = 2.0 / (9.0 * math.pi**3)
THERMAL_C2 = 1.0 / (18.0 * math.pi**3)


@dataclass
class BoundResult:
    value: float
    preconditions: dict = field(default_factory=dict)
    chosen_m: float | None = None
    extras: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.preconditions.values())


@dataclass(frozen=True)
class TailBoundParams:
    C: float
    a: float
    mu: float
    alpha_f: float
    K: int
    d: int
    k: int
    eps: float
    delta: float
    m: int

    def __post_init__(self):
        if self.C <= 0 or self.a <= 0:
            raise ValueError("need C > 0 and a > 0")
        if self.m < 1:
            raise ValueError("m must be a positive integer")


@dataclass(frozen=True)
class SubsystemSplit:
    d_S: int
    d_E: int
    d_R: int | None = None


def moment_from_tail(C: float, a: float, m: float) -> tuple:
    """Moment bound E|X-mu|^m from a Gaussian-type tail C e^{-a delta^2}.

    Returns (gamma_form, loose_form) = (C Gamma(m/2+1) a^{-m/2}, C (m/2a)^{m/2}).
    """
    if m <= 0:
        raise ValueError("m must be positive")
    gamma_form = C * math.exp(gammaln(m / 2 + 1)) * a ** (-m / 2)
    loose_form = C * (m / (2 * a)) ** (m / 2)
    return gamma_form, loose_form


def moment_from_tail_shifted(C: float, a: float, eta: float, m: float) -> float:
    """Shifted variant for X >= 0 with P(X >= delta + eta) <= C e^{-a delta^2}:
    E X^m <= C (2m/a)^{m/2} + (2 eta)^m."""
    if eta < 0:
        raise ValueError("eta must be >= 0")
    return C * (2 * m / a) ** (m / 2) + (2 * eta) ** m


def design_tail_bound(params: TailBoundParams) -> BoundResult:
    """P(|f - mu| >= delta) for a degree-K polynomial under an eps-approximate
    k-design: (1/delta^{2m}) (C (m/a)^m + (eps/d^k)(alpha + |mu|)^{2m})."""
    p = params
    pre = {"moment_constraint_2mK_le_k": 2 * p.m * p.K <= p.k}
    if not pre["moment_constraint_2mK_le_k"]:
        return BoundResult(float("nan"), pre, chosen_m=p.m)
    val = (1.0 / p.delta ** (2 * p.m)) * (
        p.C * (p.m / p.a) ** p.m
        + (p.eps / float(p.d) ** p.k) * (p.alpha_f + abs(p.mu)) ** (2 * p.m)
    )
    m_star = p.a * p.delta**2 / math.e
    m_feasible = min(m_star, p.k // (2 * p.K)) if p.K else m_star
    return BoundResult(val, pre, chosen_m=p.m, extras={"optimal_m": m_star, "optimal_m_clipped": max(1.0, m_feasible)})


def expected_purity(split: SubsystemSplit) -> float:
    """Mean reduced-state purity over Haar (or any 2-design): (d_S + d_E)/(d + 1)."""
    d = split.d_S * split.d_E
    return (split.d_S + split.d_E) / (d + 1)


def haar_state(d: int, rng) -> np.ndarray:
    """Uniform pure state: normalized independent complex Gaussians."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def haar_unitary(d: int, rng) -> np.ndarray:
    from scipy.stats import unitary_group

    return unitary_group.rvs(d, random_state=rng)


def reduced_state(psi: np.ndarray, d_S: int, d_E: int) -> np.ndarray:
    m = psi.reshape(d_S, d_E)
    return m @ m.conj().T


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def purity_experiment(
    n: int, d_S: int, samples: int, ensemble: str = "clifford", seed=None
) -> tuple:
    """Empirical (mean, stderr) of the reduced purity of U|0..0> over the ensemble."""
    if n > 10:
        raise ValueError("dense reduced-state computation capped at n=10")
    rng = np.random.default_rng(seed)
    d = 2**n
    d_E = d // d_S
    vals = np.empty(samples)
    if ensemble == "clifford":
        from .clifford import sample_uniform

        for s in range(samples):
            psi = sample_uniform(n, rng).stabilizer_column()
            vals[s] = purity(reduced_state(psi, d_S, d_E))
    elif ensemble == "haar":
        for s in range(samples):
            psi = haar_state(d, rng)
            vals[s] = purity(reduced_state(psi, d_S, d_E))
    else:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))


def purity_tail_experiment(d: int, d_S: int, delta: float, samples: int, seed=None) -> float:
    """Empirical P(|purity - mu| >= delta) over Haar states."""
    rng = np.random.default_rng(seed)
    d_E = d // d_S
    mu = (d_S + d_E) / (d + 1)
    hits = 0
    for _ in range(samples):
        psi = haar_state(d, rng)
        if abs(purity(reduced_state(psi, d_S, d_E)) - mu) >= delta:
            hits += 1
    return hits / samples


def purity_tail_bound(d: int, delta: float, k: int, eps: float, m: int) -> BoundResult:
    """Concentration bound for the reduced purity: Levy constants C=4,
    a = C1 d / 4 (Lipschitz constant 2), degree K=2, coefficient sum <= d^4."""
    mu_bound = 1.0  # |mu| <= 1 for purity
    params = TailBoundParams(
        C=4.0, a=LEVY_C1 * d / 4.0, mu=mu_bound, alpha_f=float(d) ** 4,
        K=2, d=d, k=k, eps=eps, delta=delta, m=m,
    )
    return design_tail_bound(params)


def entropy_tail_bound(
    n: int, d_S: int, alpha: float, k: int, eps: float, m: int
) -> BoundResult:
    """Tail bound on the entanglement entropy falling alpha below -log2(mean purity).

    value = (1/(mu(2^alpha - 1))^{2m}) (4 (4m/(C1 d))^m + (eps/d^k)(d^4 + mu)^{2m});
    extras carry the simplified closed form and its regime flags.
    """
    d = 2**n
    d_E = d // d_S
    mu = (d_S + d_E) / (d + 1)
    pre = {"m_le_k_over_4": m <= k / 4}
    denom = (mu * (2.0**alpha - 1.0)) ** (2 * m)
    val = (1.0 / denom) * (
        4.0 * (4.0 * m / (LEVY_C1 * d)) ** m + (eps / float(d) ** k) * (d**4 + mu) ** (2 * m)
    )
    eps_small = eps == 0 or (eps > 0 and math.log(eps) <= -(n**2) * math.log(4.0))
    simple_pre = {
        "n_ge_19": n >= 19,
        "d_S_in_range": 2 <= d_S <= 2 ** (n / 10),
        "alpha_ge_2": alpha >= 2,
        "k_ge_n_over_10log2n": n > 1 and k >= n / (10 * math.log2(n)),
        "eps_le_4_pow_minus_n2": eps_small,
    }
    k_simple = n / (10 * math.log2(n)) if n > 1 else 1
    simple_val = (
        8.0 * 2.0 ** (-(n / (80 * math.log2(n))) * (n / 5 + alpha)) if n > 1 else float("nan")
    )
    return BoundResult(
        val,
        pre,
        chosen_m=m,
        extras={
            "mu": mu,
            "simplified_value": simple_val,
            "simplified_k": k_simple,
            "simplified_preconditions": simple_pre,
        },
    )


def entropy_violation_experiment(
    n: int, d_S: int, alpha: float, samples: int, seed=None
) -> float:
    """Empirical P(S(psi_S) <= -log2(mu) - alpha) over Haar states."""
    rng = np.random.default_rng(seed)
    d = 2**n
    d_E = d // d_S
    mu = (d_S + d_E) / (d + 1)
    thresh = -math.log2(mu) - alpha
    hits = 0
    for _ in range(samples):
        rho = reduced_state(haar_state(d, rng), d_S, d_E)
        evals = np.clip(np.linalg.eigvalsh(rho), 1e-18, None)
        entropy = float(-np.sum(evals * np.log2(evals)))
        if entropy <= thresh:
            hits += 1
    return hits / samples


def thermalization_bound(d_S: int, d_R: int, k: int, eps: float, delta: float) -> BoundResult:
    """Design bound on P(||rho_S - canonical||_1 >= delta).

    value: full form (d_S/delta^2)^{k/8} [ 2 (k/(2 C2 d_R))^{k/8}
           + (4 d_S^2/d_R)^{k/8} + (eps/d_R^k)(d_R^2+1)^{k/2} ];
    extras: simplified 6 (4 d_S^3 / (d_R delta^2))^{k/8}.
    """
    pre = {
        "eps_small_enough": eps <= 1.5 * (4.0 * d_S**3 / d_R) ** (k / 8),
        "k_le_4dS2_over_9pi3": k <= 4.0 * d_S**2 / (9.0 * math.pi**3),
    }
    full = (d_S / delta**2) ** (k / 8) * (
        2.0 * (k / (2.0 * THERMAL_C2 * d_R)) ** (k / 8)
        + (4.0 * d_S**2 / d_R) ** (k / 8)
        + (eps / float(d_R) ** k) * (d_R**2 + 1.0) ** (k / 2)
    )
    simple = 6.0 * (4.0 * d_S**3 / (d_R * delta**2)) ** (k / 8)
    return BoundResult(full, pre, chosen_m=k / 8, extras={"simplified_value": simple})


def thermalization_haar_bound(d_S: int, d_R: int, eps: float, omega_E: np.ndarray) -> tuple:
    """Haar-measure bound: P(||rho_S - Omega_S||_1 >= eps + sqrt(d_S/d_E_eff))
    <= 2 exp(-C2 d_R eps^2), with d_E_eff = 1/tr(Omega_E^2) computed exactly.

    Returns (threshold, bound)."""
    d_e_eff = 1.0 / purity(omega_E)
    threshold = eps + math.sqrt(d_S / d_e_eff)
    return threshold, 2.0 * math.exp(-THERMAL_C2 * d_R * eps**2)


def canonical_state(d_S: int, d_E: int, basis: np.ndarray) -> np.ndarray:
    """Omega_S = tr_E of the maximally mixed state on the restricted subspace.

    basis: (d_S*d_E, d_R) with orthonormal columns spanning the subspace.
    """
    d_R = basis.shape[1]
    overlap = basis.conj().T @ basis
    if np.max(np.abs(overlap - np.eye(d_R))) > 1e-10:
        raise ValueError("restriction basis is not orthonormal")
    rho = (basis @ basis.conj().T) / d_R
    return partial_trace_env(rho, d_S, d_E)


def partial_trace_env(rho: np.ndarray, d_S: int, d_E: int) -> np.ndarray:
    t = rho.reshape(d_S, d_E, d_S, d_E)
    return np.trace(t, axis1=1, axis2=3)


def partial_trace_sys(rho: np.ndarray, d_S: int, d_E: int) -> np.ndarray:
    t = rho.reshape(d_S, d_E, d_S, d_E)
    return np.trace(t, axis1=0, axis2=2)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    evals = np.linalg.eigvalsh(a - b)
    return float(np.sum(np.abs(evals)))


def thermalization_experiment(
    d_S: int, d_E: int, basis: np.ndarray, delta: float, samples: int, seed=None
) -> float:
    """Empirical P(||rho_S - Omega_S||_1 >= delta) for Haar states in the subspace."""
    rng = np.random.default_rng(seed)
    d_R = basis.shape[1]
    omega_S = canonical_state(d_S, d_E, basis)
    hits = 0
    for _ in range(samples):
        psi = basis @ haar_state(d_R, rng)
        rho_S = reduced_state(psi, d_S, d_E)
        if trace_distance(rho_S, omega_S) >= delta:
            hits += 1
    return hits / samples


def overlap_tail_bound(d: int, k: int, m: int, eps: float, delta_level: float) -> BoundResult:
    """State-design overlap tail: P(|<Phi|Psi>|^2 >= delta) <= (1+eps) m!/(d delta)^m,
    with the (m/(d delta))^m relaxation in extras."""
    pre = {"m_le_k": m <= k}
    tight = (1 + eps) * math.factorial(m) / (d * delta_level) ** m
    loose = (1 + eps) * (m / (d * delta_level)) ** m
    return BoundResult(tight, pre, chosen_m=m, extras={"relaxed_value": loose})


def overlap_experiment(d: int, delta_level: float, samples: int, seed=None) -> float:
    """Empirical P(|<Phi|Psi>|^2 >= delta) for Haar |Psi> against a fixed |Phi>."""
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 1 << 14
    remaining = samples
    while remaining > 0:
        b = min(chunk, remaining)
        v = rng.standard_normal((b, d)) + 1j * rng.standard_normal((b, d))
        overlaps = np.abs(v[:, 0]) ** 2 / np.sum(np.abs(v) ** 2, axis=1)
        hits += int(np.sum(overlaps >= delta_level))
        remaining -= b
    return hits / samples


def geometric_bound_log2(n: int, k: int, eps: float, delta: float) -> float:
    """log2 of the geometric-entanglement tail bound (safe against underflow)."""
    return math.log2(1 + eps) + (
        k * math.log2(2 * k) + 4 * n * math.log2(10 * n) - k * delta + 4 * n * (n - delta)
    )


def geometric_bound(n: int, k: int, eps: float, delta: float) -> float:
    """Tail bound on geometric entanglement falling delta below n (qubit count):
    (1+eps) * 2^( k log2(2k) + 4n log2(10n) - k delta + 4n(n - delta) )."""
    return 2.0 ** geometric_bound_log2(n, k, eps, delta)


def gamma_ratio_inequality(s: int) -> bool:
    """Gamma(s+1) Gamma(1/2) / Gamma(s+1/2) <= 2 sqrt(s), checked in log space."""
    lhs = gammaln(s + 1) + gammaln(0.5) - gammaln(s + 0.5)
    return bool(lhs <= math.log(2.0 * math.sqrt(s)) + 1e-12)


def clopper_pearson_lower(successes: int, trials: int, confidence: float = 0.99) -> float:
    """Lower confidence bound on a binomial proportion."""
    from scipy.stats import beta

    if successes == 0:
        return 0.0
    return float(beta.ppf(1 - confidence, successes, trials - successes + 1))
