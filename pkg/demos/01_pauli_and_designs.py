"""Pauli algebra, the swap decomposition, and exact-design distances.

Run:  python3 demos/01_pauli_and_designs.py
"""

import numpy as np

from pseudoq.clifford import enumerate_group
from pseudoq.haar_moments import (
    EnsembleSpec,
    TableauDescriptor,
    design_distance,
    epsilon_convert,
    ghat_closed_form,
    ghat_from_gram_route,
)
from pseudoq.pauli import PauliString, swap_decomposition_check

# Exact group algebra: products carry their phases
x, z = PauliString.from_label("X"), PauliString.from_label("Z")
print("X * Z =", (x * z).label(), "   (X*Z)^2 =", ((x * z) * (x * z)).label())

# The swap operator decomposes over the Pauli basis with weight 1/d
for d in (2, 4, 8):
    print(f"swap decomposition error at d={d}: {swap_decomposition_check(d):.2e}")

# The 24 single-qubit Cliffords form an exact 2-design
ens = EnsembleSpec.uniform([TableauDescriptor(t) for t in enumerate_group(1)])
for metric in ("OPNORM", "TRACE", "MONOMIAL_MAX"):
    print(f"n=1 Clifford ensemble, k=2, {metric}: {design_distance(ens, 2, metric):.2e}")

# Pauli-basis moment coefficients: closed form vs the Gram pseudo-inverse route
err = np.max(np.abs(ghat_closed_form(4, 2).entries - ghat_from_gram_route(4, 2).entries))
print(f"moment-coefficient cross-check at d=4: {err:.2e}")

# Converting between approximate-design definitions multiplies dimension factors
eps = 0.01
for to in ("OPNORM", "TRACE", "DIAMOND"):
    print(f"MONOMIAL 0.01 -> {to}: {epsilon_convert('MONOMIAL', to, 2, 2, eps):.4g}")
