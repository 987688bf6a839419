"""The zero chain and accelerated chain of the second-moment evolution.

The zero chain counts non-identity positions of a diagonal Pauli-pair label;
its tridiagonal transition matrix, stationary law, spectral gap and empirical
mixing time are computed here, together with the exact lumpability check
against the full diagonal chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np
import scipy.linalg as sla
from scipy.sparse.csgraph import connected_components
import scipy.sparse as sp

from .pauli import DimensionError


@dataclass
class ChainMatrix:
    states: list
    P: np.ndarray

    def validate(self, tol: float = 1e-12) -> None:
        if np.any(self.P < -tol):
            raise ValueError("negative transition probability")
        rows = self.P.sum(axis=1)
        if np.max(np.abs(rows - 1)) > tol:
            raise ValueError("rows do not sum to 1")


def zero_chain(n: int) -> ChainMatrix:
    """States x = 1..n (non-identity count); moves x->x-1 with 2x(x-1)/(5n(n-1)),
    x->x+1 with 6x(n-x)/(5n(n-1)), else stays."""
    if n < 2:
        raise DimensionError("zero chain needs n >= 2")
    denom = 5 * n * (n - 1)
    P = np.zeros((n, n))
    for x in range(1, n + 1):
        down = 2 * x * (x - 1) / denom
        up = 6 * x * (n - x) / denom
        if x > 1:
            P[x - 1, x - 2] = down
        P[x - 1, x - 1] = 1 - 2 * x * (3 * n - 2 * x - 1) / denom
        if x < n:
            P[x - 1, x] = up
    c = ChainMatrix(list(range(1, n + 1)), P)
    c.validate()
    return c


def zero_stationary(n: int) -> np.ndarray:
    """pi(x) = 3^x C(n,x) / (4^n - 1), computed with exact integers then rounded."""
    denom = 4**n - 1
    return np.array([float(Fraction(3**x * comb(n, x), denom)) for x in range(1, n + 1)])


def accelerated_chain(n: int) -> ChainMatrix:
    """The zero chain conditioned on moving: zero diagonal, renormalized moves."""
    if n < 2:
        raise DimensionError("accelerated chain needs n >= 2")
    P = np.zeros((n, n))
    for x in range(1, n + 1):
        denom = 3 * n - 2 * x - 1
        if x > 1:
            P[x - 1, x - 2] = (x - 1) / denom
        if x < n:
            P[x - 1, x] = 3 * (n - x) / denom
    c = ChainMatrix(list(range(1, n + 1)), P)
    c.validate()
    return c


def _is_tridiagonal(P: np.ndarray) -> bool:
    return np.allclose(P, np.triu(np.tril(P, 1), -1))


def is_irreducible(P: np.ndarray) -> bool:
    g = sp.csr_matrix(P > 1e-15)
    ncomp, _ = connected_components(g, directed=True, connection="strong")
    return ncomp == 1


def spectral_gap(c: ChainMatrix, pi: np.ndarray | None = None, reversible: bool = True) -> float:
    """1 - (second largest eigenvalue modulus).

    Reversible chains are symmetrized by the stationary similarity transform,
    so the tridiagonal case reduces to a real symmetric eigensolve.
    Irreversible chains fall back to the PP* spectrum.
    """
    P = c.P
    if not is_irreducible(P):
        raise ValueError("chain is reducible; remove absorbing states first")
    if pi is None:
        pi = stationary_distribution(P)
    if reversible and _detailed_balance_error(P, pi) < 1e-10:
        if _is_tridiagonal(P):
            diag = np.diag(P).copy()
            off = np.sqrt(np.clip(P[np.arange(len(P) - 1), np.arange(1, len(P))]
                                  * P[np.arange(1, len(P)), np.arange(len(P) - 1)], 0, None))
            vals = sla.eigh_tridiagonal(diag, off, eigvals_only=True)
        else:
            s = np.sqrt(pi)
            sym = (s[:, None] / s[None, :]) * P
            sym = (sym + sym.T) / 2
            vals = np.linalg.eigvalsh(sym)
        mods = np.sort(np.abs(vals))[::-1]
        return float(1 - mods[1])
    # irreversible: use the reversibilization PP*
    Pstar = (pi[None, :] / pi[:, None]) * P.T
    vals = np.linalg.eigvals(P @ Pstar)
    mods = np.sort(np.abs(vals))[::-1]
    return float(1 - np.sqrt(np.clip(mods[1], 0, None)))


def _detailed_balance_error(P: np.ndarray, pi: np.ndarray) -> float:
    return float(np.max(np.abs(pi[:, None] * P - (pi[:, None] * P).T)))


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eig(P.T)
    idx = int(np.argmin(np.abs(vals - 1)))
    v = np.real(vecs[:, idx])
    v = np.abs(v)
    return v / v.sum()


def mixing_time(c: ChainMatrix, pi: np.ndarray, eps: float, cap: int = 1 << 24) -> int:
    """Smallest t with max_x (1/2)||P^t[x,:] - pi||_1 <= eps.

    Found by doubling to bracket, then bisection; powers are reassembled from
    the cached squarings.  Basis starts suffice because the 1-norm distance is
    maximized at extreme points.
    """
    if not (0 < eps):
        raise ValueError("eps must be positive")

    def dist(Pt: np.ndarray) -> float:
        return float(0.5 * np.max(np.abs(Pt - pi[None, :]).sum(axis=1)))

    if eps >= 1 or dist(np.eye(len(c.P))) <= eps:
        return 0
    squares = [c.P.copy()]  # squares[i] = P^(2^i)
    t = 1
    while dist(_power_from_squares(squares, t)) > eps:
        t *= 2
        if t > cap:
            raise RuntimeError(f"mixing time exceeds cap {cap}")
        squares.append(squares[-1] @ squares[-1])
    lo, hi = t // 2, t  # dist(P^lo) > eps >= dist(P^hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if dist(_power_from_squares(squares, mid)) <= eps:
            hi = mid
        else:
            lo = mid
    return hi


def _power_from_squares(squares, t: int) -> np.ndarray:
    result = None
    for i in range(t.bit_length()):
        if (t >> i) & 1:
            while i >= len(squares):
                squares.append(squares[-1] @ squares[-1])
            result = squares[i] if result is None else result @ squares[i]
    return result if result is not None else np.eye(len(squares[0]))


def count_nonzero_sites(p: int, n: int) -> int:
    return sum(1 for j in range(n) if (p >> (2 * j)) & 3)


def lumpability_check(n: int) -> float:
    """Max-abs error of lumping the full diagonal chain onto the zero chain.

    For every diagonal label p != 0 with x nonzero sites, the total transition
    probability into {q : nonzeros(q) = y} must equal the zero chain's P(x,y).
    """
    from .random_circuit import CircuitModel, StepOperator

    if n > 5:
        raise DimensionError("lumpability check capped at n=5")
    full = StepOperator(CircuitModel(n)).diagonal_chain_matrix()
    zc = zero_chain(n).P
    err = 0.0
    dim = 4**n
    counts = np.array([count_nonzero_sites(p, n) for p in range(dim)])
    for p in range(1, dim):
        x = counts[p]
        lumped = np.bincount(counts, weights=full[p], minlength=n + 1)[1:]
        err = max(err, float(np.max(np.abs(lumped - zc[x - 1]))))
    return err


def gap_scan(n_values, chain: str = "zero"):
    """Rows (n, gap, n*gap) for the requested chain kind."""
    rows = []
    for n in n_values:
        if chain == "zero":
            c = zero_chain(n)
            pi = zero_stationary(n)
        elif chain == "accelerated":
            c = accelerated_chain(n)
            pi = None
        else:
            raise ValueError(f"unknown chain {chain!r}")
        g = spectral_gap(c, pi)
        rows.append((int(n), float(g), float(n * g)))
    return rows


def mixing_scan(n_values, eps: float):
    """Rows (n, tau, tau / (n ln n)) for the zero chain."""
    rows = []
    for n in n_values:
        c = zero_chain(n)
        pi = zero_stationary(n)
        tau = mixing_time(c, pi, eps)
        rows.append((int(n), int(tau), float(tau / (n * np.log(n)))))
    return rows
