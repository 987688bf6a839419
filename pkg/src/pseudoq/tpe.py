"""Tensor-product-expander spectral quantities and the design iteration count.

The restricted path computes the Fourier operator compressed to the
permutation-fixed subspace on a Bell(2k)-dimensional partition basis, using
exact solution counting for the matrix elements and Möbius inversion for the
basis change.  A dense path over explicit state vectors cross-checks it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .haar_moments import (
    DENSE_GUARD,
    EnsembleSpec,
    PermutationDescriptor,
    fourier_matrix,
    haar_moment_projector,
    permutation_matrix,
)
from .pauli import DimensionError
from .partitions import (
    Partition,
    coarsenings,
    falling_factorial,
    mobius,
    pairing_partition,
    partitions,
)

BRUTE_FORCE_BUDGET = 10**8


@dataclass
class SpectralReport:
    lam: float
    unit_count: int
    method: str
    conditioning: float
    details: dict | None = None


def pairing_block_matrix(p1: Partition, p2: Partition, k: int) -> np.ndarray:
    """Integer matrix A~ with m.n = sum_ij m~_i A~[i,j] n~_j over free block indices.

    Entry (i, j) counts elements of block_i(p1) ∩ block_j(p2) in the first k
    positions minus those in the last k positions.
    """
    a = np.zeros((p1.size, p2.size), dtype=np.int64)
    id1, id2 = p1.block_id(), p2.block_id()
    for el in range(1, 2 * k + 1):
        sign = 1 if el <= k else -1
        a[id1[el - 1], id2[el - 1]] += sign
    return a


def count_congruence_solutions(a: np.ndarray, N: int, method: str = "auto") -> int:
    """#{x in (Z_N)^m : a x == 0 mod N} for an integer matrix a (rows x m)."""
    m = a.shape[1]
    if method == "auto":
        method = "brute" if N**m <= BRUTE_FORCE_BUDGET else "snf"
    if method == "brute":
        if N**m > BRUTE_FORCE_BUDGET:
            raise DimensionError("brute-force counting budget exceeded")
        count = 0
        # vectorize over the last variable
        last = np.arange(N, dtype=np.int64)
        for head in itertools.product(range(N), repeat=m - 1) if m > 1 else [()]:
            partial = a[:, : m - 1] @ np.array(head, dtype=np.int64) if m > 1 else np.zeros(
                a.shape[0], dtype=np.int64
            )
            ok = np.ones(N, dtype=bool)
            for r in range(a.shape[0]):
                ok &= (partial[r] + a[r, m - 1] * last) % N == 0
            count += int(ok.sum())
        return count
    if method == "snf":
        from sympy import ZZ, Matrix
        from sympy.matrices.normalforms import smith_normal_form

        if a.shape[0] == 0 or not a.any():
            return N**m
        snf = smith_normal_form(Matrix(a.tolist()), domain=ZZ)
        diag = [int(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
        r = len(diag)
        count = N ** (m - r)
        for d in diag:
            count *= math.gcd(abs(d), N)
        return count
    raise ValueError(f"unknown counting method {method!r}")


def fourier_E_element(p1: Partition, p2: Partition, N: int, k: int, method: str = "auto") -> float:
    """<E_{p1}| F^{(x)k,k} |E_{p2}> = N^{-k+(|p1|-|p2|)/2} * (solution count)."""
    if p1.m != 2 * k or p2.m != 2 * k:
        raise DimensionError("partitions must live on {1..2k}")
    a = pairing_block_matrix(p1, p2, k)
    cnt = count_congruence_solutions(a, N, method=method)
    return float(N) ** (-k + (p1.size - p2.size) / 2) * cnt


def fourier_I_matrix(N: int, k: int, method: str = "auto") -> tuple:
    """(partitions list, matrix <I_{p1}|F^{(x)k,k}|I_{p2}>) via Möbius expansion.

    sqrt(|I_P|)|I_P> = sum_{P' >= P} mu(P,P') sqrt(|E_{P'}|) |E_{P'}>, and
    sqrt(|E_1'||E_2'|) <E_1'|F|E_2'> = N^{|P_1'| - k} * count, so each entry is
    a double sum over coarsenings with exact integer counts.
    """
    parts = partitions(2 * k)
    coarse = {p: [(q, mobius(p, q)) for q in coarsenings(p)] for p in parts}
    cache: dict = {}

    def scaled_E(q1: Partition, q2: Partition) -> float:
        key = (q1.blocks, q2.blocks)
        if key not in cache:
            a = pairing_block_matrix(q1, q2, k)
            cnt = count_congruence_solutions(a, N, method=method)
            cache[key] = float(N) ** (q1.size - k) * cnt
        return cache[key]

    dim = len(parts)
    mat = np.zeros((dim, dim))
    for i, pi1 in enumerate(parts):
        for j, pi2 in enumerate(parts):
            acc = 0.0
            for q1, mu1 in coarse[pi1]:
                for q2, mu2 in coarse[pi2]:
                    acc += mu1 * mu2 * scaled_E(q1, q2)
            norm = math.sqrt(
                falling_factorial(N, pi1.size) * falling_factorial(N, pi2.size)
            )
            mat[i, j] = acc / norm
    return parts, mat


def _pairing_coordinates(parts, N: int, k: int) -> np.ndarray:
    """Coordinates of |E_{P(pi)}> in the orthonormal I basis, one column per pi."""
    perms = list(itertools.permutations(range(k)))
    coords = np.zeros((len(parts), len(perms)))
    index = {p.blocks: i for i, p in enumerate(parts)}
    for a, pi in enumerate(perms):
        pp = pairing_partition(list(pi), k)
        scale = float(N) ** (-k / 2)
        for q in coarsenings(pp):
            coords[index[q.blocks], a] = math.sqrt(falling_factorial(N, q.size)) * scale
    return coords


def lambda_A(N: int, k: int, method: str = "restricted", counting: str = "auto") -> SpectralReport:
    """Largest singular value of the Fourier operator on the permutation-fixed
    space after projecting out the Haar-fixed pairing states."""
    if k > 3:
        raise DimensionError("capped at k=3 (Bell(6) = 203 partition basis)")
    if method == "restricted":
        parts, mat = fourier_I_matrix(N, k, method=counting)
        coords = _pairing_coordinates(parts, N, k)
        gram = coords.T @ coords
        cond = float(np.linalg.cond(gram))
        q = coords @ np.linalg.pinv(gram) @ coords.T
        comp = np.eye(len(parts)) - q
        reduced = comp @ mat @ comp
        svals = np.linalg.svd(reduced, compute_uv=False)
        lam = float(svals[0])
        # trace cross-check: tr((E_S F E_S)^2) >= k! + lam^2
        tr2 = float(np.sum(mat * mat))
        details = {"trace_square": tr2, "trace_bound_ok": tr2 >= math.factorial(k) + lam**2 - 1e-9}
        unit = int(np.sum(np.linalg.svd(mat, compute_uv=False) >= 1 - 1e-9))
        return SpectralReport(lam, unit, "restricted", cond, details)
    if method == "dense":
        return _lambda_A_dense(N, k)
    raise ValueError(f"unknown method {method!r}")


def lambda_A_bound(N: int, k: int) -> float:
    """The proven upper bound 2 (2k)^{4k} / sqrt(N)."""
    return 2.0 * (2 * k) ** (4 * k) / math.sqrt(N)


# -- dense-path machinery -------------------------------------------------------


def E_state(p: Partition, N: int) -> np.ndarray:
    """|E_p>: uniform over index tuples with p's equalities, dense of dim N^m."""
    m = p.m
    if N**m > DENSE_GUARD:
        raise DimensionError("dense guard exceeded")
    v = np.zeros(N**m)
    strides = [N ** (m - 1 - j) for j in range(m)]
    ids = p.block_id()
    for vals in itertools.product(range(N), repeat=p.size):
        idx = sum(vals[ids[j]] * strides[j] for j in range(m))
        v[idx] = 1.0
    return v / math.sqrt(N**p.size)


def I_state(p: Partition, N: int) -> np.ndarray:
    """|I_p>: uniform over tuples with equalities inside blocks and inequalities across."""
    m = p.m
    if N**m > DENSE_GUARD:
        raise DimensionError("dense guard exceeded")
    if N < p.size:
        raise DimensionError("too few labels for distinct blocks")
    v = np.zeros(N**m)
    strides = [N ** (m - 1 - j) for j in range(m)]
    ids = p.block_id()
    for vals in itertools.permutations(range(N), p.size):
        idx = sum(vals[ids[j]] * strides[j] for j in range(m))
        v[idx] = 1.0
    return v / math.sqrt(falling_factorial(N, p.size))


def apply_fourier_kk(v: np.ndarray, N: int, k: int) -> np.ndarray:
    """F^{(x)k,k} v: F on the first k tensor factors, F-conjugate on the last k."""
    f = fourier_matrix(N)
    t = v.reshape((N,) * (2 * k))
    for axis in range(k):
        t = np.tensordot(f, t, axes=([1], [axis]))
        t = np.moveaxis(t, 0, axis)
    for axis in range(k, 2 * k):
        t = np.tensordot(f.conj(), t, axes=([1], [axis]))
        t = np.moveaxis(t, 0, axis)
    return t.reshape(-1)


def _lambda_A_dense(N: int, k: int) -> SpectralReport:
    parts = partitions(2 * k)
    dim = N ** (2 * k)
    if dim > DENSE_GUARD:
        raise DimensionError("dense guard exceeded")
    I_vecs = np.column_stack([I_state(p, N) for p in parts])
    haar = haar_moment_projector(N, k)
    # orthonormal basis of the fixed space minus the Haar space
    proj_out = I_vecs - haar.matrix @ I_vecs
    q, r = np.linalg.qr(proj_out)
    keep = np.abs(np.diag(r)) > 1e-9
    W = q[:, keep]
    FW = np.column_stack([apply_fourier_kk(W[:, j], N, k) for j in range(W.shape[1])])
    small = W.conj().T @ FW
    svals = np.linalg.svd(small, compute_uv=False)
    return SpectralReport(float(svals[0]), len(parts), "dense", float(np.linalg.cond(r)))


def symmetric_group_projector(N: int, k: int) -> np.ndarray:
    """E over S_N of B(pi)^{(x)k} = sum over partitions of {1..k} of |I_P><I_P|."""
    parts = partitions(k)
    dim = N**k
    acc = np.zeros((dim, dim))
    for p in parts:
        if p.size > N:
            continue
        v = I_state(p, N)
        acc += np.outer(v, v)
    return acc


def classical_tpe_lambda(perms: EnsembleSpec, N: int, k: int) -> float:
    """||E_nu[B(pi)^{(x)k}] - E_{S_N}[B(pi)^{(x)k}]||_inf for a permutation ensemble."""
    if N**k > DENSE_GUARD:
        raise DimensionError("dense guard exceeded")
    acc = np.zeros((N**k, N**k))
    for w, desc in perms.items:
        if not isinstance(desc, PermutationDescriptor):
            raise TypeError("classical TPE takes permutation descriptors only")
        b = permutation_matrix(desc.perm, N)
        bk = b
        for _ in range(k - 1):
            bk = np.kron(bk, b)
        acc += w * bk
    delta = acc - symmetric_group_projector(N, k)
    return float(np.linalg.norm(delta, 2))


def quantum_tpe_lambda(
    nu_c: EnsembleSpec, p: float, N: int, k: int, counting: str = "auto"
) -> SpectralReport:
    """Spectral gap report for nu_Q = p nu_C + (1-p) delta_Fourier.

    Also evaluates the guarantee lambda_Q <= 1 - (eps_A / 12) min(p eps_C, 1-p)
    with eps_C measured from the classical ensemble at power 2k and eps_A from
    the restricted-path subspace norm.
    """
    if not 0 <= p <= 1:
        raise ValueError("mixing weight must lie in [0,1]")
    dim = N ** (2 * k)
    if dim > DENSE_GUARD:
        raise DimensionError("dense guard exceeded")
    acc = np.zeros((dim, dim), dtype=complex)
    for w, desc in nu_c.items:
        b = permutation_matrix(desc.perm, N)
        bk = b
        for _ in range(2 * k - 1):
            bk = np.kron(bk, b)
        acc += (w * p) * bk
    if p < 1:
        f = fourier_matrix(N)
        fk = np.array([[1.0 + 0j]])
        for _ in range(k):
            fk = np.kron(fk, f)
        for _ in range(k):
            fk = np.kron(fk, f.conj())
        acc += (1 - p) * fk
    haar = haar_moment_projector(N, k)
    delta = acc - haar.matrix
    lam_q = float(np.linalg.norm(delta, 2))
    moduli = np.abs(np.linalg.eigvals(acc))
    unit = int(np.sum(moduli >= 1 - 1e-9))

    lam_c = classical_tpe_lambda(nu_c, N, 2 * k)
    eps_c = 1.0 - lam_c
    rep_a = lambda_A(N, k, counting=counting)
    eps_a = 1.0 - rep_a.lam
    rhs = 1.0 - (eps_a / 12.0) * min(p * eps_c, 1.0 - p)
    details = {
        "lambda_C": lam_c,
        "eps_C": eps_c,
        "lambda_A": rep_a.lam,
        "eps_A": eps_a,
        "bound_rhs": rhs,
        "bound_satisfied": bool(lam_q <= rhs + 1e-12),
        "optimal_p": 1.0 / (1.0 + eps_c),
    }
    return SpectralReport(lam_q, unit, "dense", haar.conditioning or 1.0, details)


def design_iterations(N: int, k: int, lam: float, eps: float) -> int:
    """Iterations m with lambda^m N^{2k} <= eps: ceil(log(N^{2k}/eps)/log(1/lambda))."""
    if not 0 < lam < 1:
        raise ValueError("need 0 < lambda < 1")
    target = math.log(float(N) ** (2 * k) / eps)
    if target <= 0:
        return 0
    return math.ceil(target / math.log(1.0 / lam))
