"""Tensor-product expanders: partition combinatorics, the Fourier gap, and
how many iterations make a design.

Run:  python3 demos/03_expanders.py
"""

import numpy as np

from pseudoq.haar_moments import EnsembleSpec, PermutationDescriptor
from pseudoq.partitions import bell_number, mobius, partitions, Partition
from pseudoq.tpe import (
    classical_tpe_lambda,
    design_iterations,
    lambda_A,
    lambda_A_bound,
    quantum_tpe_lambda,
)

# Partition lattice sizes and a Möbius value
print("Bell numbers:", [bell_number(m) for m in range(1, 9)])
print("mu(singletons of [4], one block) =", mobius(Partition.singletons(4), Partition.one_block(4)))

# The compressed Fourier norm on the permutation-fixed space, two ways
for N, k in [(16, 1), (8, 2)]:
    r = lambda_A(N, k, method="restricted")
    d = lambda_A(N, k, method="dense")
    print(f"N={N}, k={k}: restricted {r.lam:.6f}, dense {d.lam:.6f}, bound {lambda_A_bound(N, k):.3f}")

# A random constant-degree permutation ensemble measured as a classical TPE,
# then mixed with the Fourier transform into a quantum expander
rng = np.random.default_rng(0)
N = 16
perms = EnsembleSpec.uniform(
    [PermutationDescriptor(tuple(int(v) for v in rng.permutation(N)), N) for _ in range(8)]
)
lam_c = classical_tpe_lambda(perms, N, 2)
rep = quantum_tpe_lambda(perms, 0.5, N, 1)
print(f"\nclassical lambda (k=2): {lam_c:.4f}")
print(f"quantum mixture lambda (k=1): {rep.lam:.4f}, guarantee rhs {rep.details['bound_rhs']:.4f},"
      f" optimal p {rep.details['optimal_p']:.4f}")

# Iterating a gap-lambda expander to an epsilon-approximate design
for eps in (1e-2, 1e-6):
    m = design_iterations(N, 1, rep.lam, eps)
    print(f"iterations to reach eps={eps:g}: {m}")
