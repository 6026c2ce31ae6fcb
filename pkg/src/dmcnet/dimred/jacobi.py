"""Cyclic Jacobi eigendecomposition for real symmetric matrices.

Sweeps all upper-triangle pairs in row order, applying a Givens rotation to
zero each off-diagonal entry, until the off-diagonal Frobenius norm falls
below tolerance.  Quadratic convergence makes a handful of sweeps enough.
The rotation loop is jitted so the Gram-matrix route stays usable for
matrices in the low thousands.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_SWEEPS = 100


@njit(cache=True)
def _sweep(M, V):  # pragma: no cover - jitted
    """One cyclic sweep of rotations, in place; returns pairs rotated."""
    n = M.shape[0]
    rotated = 0
    for p in range(n - 1):
        for q in range(p + 1, n):
            mpq = M[p, q]
            if abs(mpq) <= 1e-300:
                continue
            theta = 0.5 * (M[q, q] - M[p, p]) / mpq
            if theta == 0.0:
                t = 1.0
            else:
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            for k in range(n):
                mkp = M[k, p]
                mkq = M[k, q]
                M[k, p] = c * mkp - s * mkq
                M[k, q] = s * mkp + c * mkq
            for k in range(n):
                mpk = M[p, k]
                mqk = M[q, k]
                M[p, k] = c * mpk - s * mqk
                M[q, k] = s * mpk + c * mqk
            for k in range(n):
                vkp = V[k, p]
                vkq = V[k, q]
                V[k, p] = c * vkp - s * vkq
                V[k, q] = s * vkp + c * vkq
            rotated += 1
    return rotated


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12):
    """Return (eigenvalues, eigenvectors) sorted by eigenvalue descending.

    Eigenvectors are the columns of the returned matrix.
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"matrix must be square, got {A.shape}")
    if not np.allclose(A, A.T, atol=1e-10):
        raise ValueError("matrix must be symmetric")
    M = A.copy()
    V = np.eye(n)
    scale = max(1.0, float(np.abs(A).max()))
    for _ in range(MAX_SWEEPS):
        off = np.sqrt(np.sum(np.tril(M, -1) ** 2))
        if off <= tol * scale:
            break
        if _sweep(M, V) == 0:
            break
    eigvals = np.diag(M).copy()
    order = np.argsort(-eigvals, kind="stable")
    return eigvals[order], V[:, order]
