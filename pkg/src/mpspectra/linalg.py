"""Gram matrices and symmetric eigenvalues.

Two eigenvalue backends are provided.  ``"lapack"`` calls LAPACK's values-only
symmetric driver through numpy (Householder reduction to tridiagonal form,
then a root-free QL/QR sweep).  ``"householder-ql"`` is a self-contained
implementation of the same pipeline: Householder tridiagonalization followed
by implicit QL with Wilkinson shifts.  No eigenvectors are ever formed.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CapacityError, DomainError, NumericalError

MAX_DIM = 4096
ZERO_RTOL = 1e-8
QL_MAX_SWEEPS = 60


def gram(a: np.ndarray) -> np.ndarray:
    """Return ``(1/n) A A^T`` where ``n`` is the row count of ``A``."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or min(a.shape) < 1:
        raise DomainError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > MAX_DIM:
        raise CapacityError(f"gram matrix of order {n} exceeds the cap of {MAX_DIM}")
    if not np.isfinite(a).all():
        raise DomainError("matrix has non-finite entries")
    m = (a @ a.T) / n
    # BLAS may leave last-bit asymmetry; mirror the lower triangle
    return np.tril(m) + np.tril(m, -1).T


def _check_symmetric_input(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DomainError(f"expected a non-empty square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise CapacityError(f"matrix of order {m.shape[0]} exceeds the cap of {MAX_DIM}")
    if not np.isfinite(m).all():
        raise DomainError("matrix has non-finite entries")
    return m


def tridiagonalize(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a symmetric matrix to tridiagonal form.

    Only the lower triangle of ``m`` is read.  Returns the diagonal ``d`` and
    subdiagonal ``e`` (length ``n - 1``) of an orthogonally similar matrix.
    """
    a = np.tril(_check_symmetric_input(m))
    a = a + np.tril(a, -1).T
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k]
        alpha = math.sqrt(float(x @ x))
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        u = x.copy()
        u[0] -= alpha
        h = float(u @ u) / 2.0
        if h == 0.0:
            continue
        sub = a[k + 1:, k + 1:]
        p = sub @ u / h
        kk = float(u @ p) / (2.0 * h)
        q = p - kk * u
        sub -= np.outer(q, u) + np.outer(u, q)
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = a[k, k + 1] = alpha
    return np.diag(a).copy(), np.diag(a, -1).copy()


def tql_eigenvalues(d: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Eigenvalues of the symmetric tridiagonal matrix ``(d, e)``.

    Implicit QL with Wilkinson shifts, values only.  Raises NumericalError
    naming the unreduced block that failed to converge.
    """
    d = np.array(d, dtype=float)
    n = d.size
    e = np.concatenate([np.asarray(e, dtype=float), [0.0]])
    if e.size != n:
        raise DomainError("subdiagonal must have length len(d) - 1")
    for l in range(n):
        sweeps = 0
        while True:
            mm = l
            while mm < n - 1:
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) <= np.finfo(float).eps * dd:
                    break
                mm += 1
            if mm == l:
                break
            sweeps += 1
            if sweeps > QL_MAX_SWEEPS:
                raise NumericalError(f"implicit QL did not converge for block starting at index {l}")
            # Wilkinson shift from the leading 2x2 of the unreduced block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[mm] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = mm - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[mm] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[mm] = 0.0
    return np.sort(d)


def eigenvalues_sym(m: np.ndarray, method: str = "lapack") -> np.ndarray:
    """All eigenvalues of a symmetric matrix in nondecreasing order.

    Only the lower triangle is referenced.
    """
    m = _check_symmetric_input(m)
    if method == "lapack":
        try:
            vals = np.linalg.eigvalsh(m, UPLO="L")
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"symmetric eigensolver failed: {exc}") from exc
        return np.sort(vals)
    if method == "householder-ql":
        return tql_eigenvalues(*tridiagonalize(m))
    raise DomainError(f"unknown eigensolver method {method!r}")


def spectral_norm(m: np.ndarray, method: str = "lapack") -> float:
    vals = eigenvalues_sym(m, method=method)
    return float(max(abs(vals[0]), abs(vals[-1])))


def zero_threshold(eigenvalues: np.ndarray) -> float:
    """Magnitude below which an eigenvalue of a Gram matrix counts as zero."""
    top = float(np.max(eigenvalues)) if len(eigenvalues) else 0.0
    return ZERO_RTOL * max(1.0, top)


def zero_mask(eigenvalues: np.ndarray) -> np.ndarray:
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    return np.abs(eigenvalues) <= zero_threshold(eigenvalues)
