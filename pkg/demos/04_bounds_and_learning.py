"""Concentration-bound evaluators with their sampled counterparts, and the
black-box learning protocols with exact query accounting.

Run:  python3 demos/04_bounds_and_learning.py
"""

import numpy as np

from pseudoq.clifford import sample_uniform
from pseudoq.concentration import (
    SubsystemSplit,
    expected_purity,
    overlap_experiment,
    overlap_tail_bound,
    purity_experiment,
)
from pseudoq.learning import (
    AdjointView,
    DenseOracle,
    PauliOracle,
    TableauOracle,
    distance,
    learn_ck,
    learn_clifford,
    learn_pauli,
)
from pseudoq.pauli import PauliString

rng = np.random.default_rng(0)

# Reduced-state purity: closed form vs the sampled Clifford ensemble
mu = expected_purity(SubsystemSplit(4, 4))
mean, err = purity_experiment(4, 4, 4000, "clifford", seed=1)
print(f"expected purity 8/17 = {mu:.5f}; sampled {mean:.5f} +/- {err:.5f}")

# Overlap tails: the bound dominates the sampled frequency
freq = overlap_experiment(16, 0.3, 200_000, seed=2)
bound = overlap_tail_bound(16, 3, 2, 0.0, 0.3).value
print(f"P(overlap >= 0.3): sampled {freq:.2e} <= bound {bound:.2e}")

# One query identifies a Pauli; 2n+1 / 2n identify a Clifford
p = PauliString.from_label("XYZIZ")
oc = PauliOracle(p)
print(f"\nlearned Pauli: {learn_pauli(oc, 5).label()} with queries {oc.queries}")

tab = sample_uniform(4, rng)
oc = TableauOracle(tab)
got = learn_clifford(oc, AdjointView(oc), 4)
print(f"Clifford recovered exactly: {got == tab}, queries {oc.queries}")

# One level up the hierarchy: a T-gate-bearing unitary, dense oracle
t_gate = np.diag([1.0, np.exp(1j * np.pi / 4)])
u = sample_uniform(1, rng).to_unitary() @ t_gate
oc = DenseOracle(u)
desc = learn_ck(oc, AdjointView(oc), 3, 1)
print(f"level-3 recovery distance: {distance(desc.to_unitary(), u).value:.2e}, queries {oc.queries}")
