"""Second-moment convergence of random circuits and the zero-chain picture.

Run:  python3 demos/02_circuit_and_chains.py
"""

import numpy as np

from pseudoq.chains import (
    lumpability_check,
    mixing_time,
    spectral_gap,
    zero_chain,
    zero_stationary,
)
from pseudoq.random_circuit import CircuitModel, exact_opnorm_distances, zero_state_moments, evolve_moments

# Exact distance of the length-t circuit ensemble from the Haar 2-fold moments
model = CircuitModel(3)
lengths = [0, 5, 10, 25, 50, 100, 200]
for t, dist in zip(lengths, exact_opnorm_distances(model, lengths)):
    print(f"length {t:4d}: operator-norm distance {dist:.3e}")

# The diagonal coefficients relax to the uniform mixture over nonzero labels
mv = evolve_moments(model, zero_state_moments(3), 200)
diag = sorted(v for (a, b), v in mv.data.items() if a == b and a != 0)
print(f"\nafter 200 steps: diagonal coefficients in [{diag[0]:.3e}, {diag[-1]:.3e}]"
      f" (uniform target {(1 - mv.data[(0, 0)]) / 63:.3e})")

# Counting nonzero sites lumps the diagonal chain exactly
print(f"lumpability error at n=3: {lumpability_check(3):.1e}")

# The lumped chain: stationary law, gap scaling, mixing time scaling
for n in (8, 32, 128, 512):
    c = zero_chain(n)
    pi = zero_stationary(n)
    print(f"n={n:4d}: gap*n = {n * spectral_gap(c, pi):.4f}", end="")
    if n <= 128:
        tau = mixing_time(c, pi, 0.01)
        print(f",  tau(0.01)/(n ln n) = {tau / (n * np.log(n)):.3f}")
    else:
        print()
