"""Independent reference computations used only by the tests."""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy import integrate


def count_below(m: np.ndarray, x: float) -> int:
    """Number of eigenvalues of symmetric ``m`` strictly below ``x``.

    Sign changes of the leading principal minors of ``m - x I`` equal the
    number of negative pivots of its unpivoted LDL^T factorization.
    """
    a = np.array(m, dtype=float) - x * np.eye(len(m))
    n = len(a)
    negatives = 0
    for k in range(n):
        pivot = a[k, k]
        if pivot == 0.0:
            pivot = -1e-300
        if pivot < 0:
            negatives += 1
        if k + 1 < n:
            col = a[k + 1:, k] / pivot
            a[k + 1:, k + 1:] -= np.outer(col, a[k, k + 1:])
    return negatives


def sturm_eigenvalues(m: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """All eigenvalues by bisection on the inertia count."""
    m = np.asarray(m, dtype=float)
    n = len(m)
    bound = np.max(np.sum(np.abs(m), axis=1)) + 1.0  # Gershgorin
    out = []
    for k in range(n):
        lo, hi = -bound, bound
        # k-th smallest: smallest x with count_below(x) >= k+1
        while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if count_below(m, mid) >= k + 1:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out)


def balanced_vectors(length: int) -> np.ndarray:
    """Every +-1 vector of even ``length`` with zero sum."""
    rows = []
    for plus in combinations(range(length), length // 2):
        v = -np.ones(length)
        v[list(plus)] = 1.0
        rows.append(v)
    return np.array(rows)


def mp_cdf_quad(c: float, x: float) -> float:
    """Marchenko-Pastur CDF by adaptive quadrature on the raw density."""
    a, b = (1 - np.sqrt(c)) ** 2, (1 + np.sqrt(c)) ** 2
    atom = max(0.0, 1.0 - c) if x >= 0 else 0.0
    if x <= a:
        return atom
    upper = min(x, b)

    def p(t):
        return np.sqrt(max((t - a) * (b - t), 0.0)) / (2 * np.pi * t)

    val, _ = integrate.quad(p, a, upper, limit=200, epsabs=1e-13, epsrel=1e-13)
    return atom + val


def grid_kolmogorov(values: np.ndarray, grid: np.ndarray, ref_on_grid: np.ndarray) -> float:
    """Brute-force sup of |F_emp - F_ref| over a fixed grid."""
    vals = np.sort(values)
    emp = np.searchsorted(vals, grid, side="right") / vals.size
    return float(np.max(np.abs(emp - ref_on_grid)))


def resolvent_trace(a: np.ndarray, z: complex) -> complex:
    """(1/n) Tr((1/n) A A^T - z I)^{-1} by direct complex solves."""
    n = a.shape[0]
    m = a @ a.T / n - z * np.eye(n)
    return complex(np.trace(np.linalg.solve(m, np.eye(n, dtype=complex))) / n)
