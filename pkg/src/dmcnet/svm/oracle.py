"""Brute-force reference maximizer for the SVM dual on tiny problems.

Verifies SMO independently: the first n-2 dual coefficients are enumerated
on a dense grid with step 0.01*C over [0, C]; for each combination the last
two coefficients are confined by the equality constraint
sum(alpha*y) = 0 to a line segment inside the box, and the concave
1-D quadratic restricted to that segment is maximized exactly
(vertex or endpoint).  The result is therefore at least as large as a full
n-dimensional grid scan at the same step, and never exceeds the true
optimum.

Only n <= 6 is supported; the n = 6 case enumerates 101^4 combinations,
which the jitted kernel handles in seconds.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_POINTS = 6


@njit(cache=True)
def _grid_search_max(Q, y, n, C, steps):  # pragma: no cover - jitted
    # Q and y are zero-padded to MAX_POINTS so every index below is
    # in-bounds for any n (numba performs no bounds checking); the range
    # guards pin padded dimensions to alpha = 0.
    m = n - 2
    i = n - 2
    j = n - 1
    step = C / steps
    Qii = Q[i, i]
    Qjj = Q[j, j]
    Qij = Q[i, j]
    yi = y[i]
    yj = y[j]
    B = -yi * yj

    r0 = steps + 1 if m > 0 else 1
    r1 = steps + 1 if m > 1 else 1
    r2 = steps + 1 if m > 2 else 1
    r3 = steps + 1 if m > 3 else 1

    best = -1e300
    for k0 in range(r0):
        a0 = step * k0 if m > 0 else 0.0
        s0 = a0 * y[0] if m > 0 else 0.0
        sum0 = a0
        pi0 = a0 * Q[0, i] if m > 0 else 0.0
        pj0 = a0 * Q[0, j] if m > 0 else 0.0
        qpp0 = a0 * a0 * Q[0, 0] if m > 0 else 0.0
        for k1 in range(r1):
            a1 = step * k1 if m > 1 else 0.0
            s1 = s0 + a1 * y[1]
            sum1 = sum0 + a1
            pi1 = pi0 + a1 * Q[1, i]
            pj1 = pj0 + a1 * Q[1, j]
            qpp1 = qpp0 + a1 * a1 * Q[1, 1] + 2.0 * a1 * (a0 * Q[0, 1])
            for k2 in range(r2):
                a2 = step * k2 if m > 2 else 0.0
                s2 = s1 + a2 * y[2]
                sum2 = sum1 + a2
                pi2 = pi1 + a2 * Q[2, i]
                pj2 = pj1 + a2 * Q[2, j]
                qpp2 = qpp1 + a2 * a2 * Q[2, 2] + 2.0 * a2 * (
                    a0 * Q[0, 2] + a1 * Q[1, 2]
                )
                dot3 = a0 * Q[0, 3] + a1 * Q[1, 3] + a2 * Q[2, 3] if m > 3 else 0.0
                for k3 in range(r3):
                    a3 = step * k3 if m > 3 else 0.0
                    s = s2 + a3 * y[3]
                    suma = sum2 + a3
                    pi = pi2 + a3 * Q[3, i]
                    pj = pj2 + a3 * Q[3, j]
                    qpp = qpp2 + a3 * a3 * Q[3, 3] + 2.0 * a3 * dot3

                    # last two coefficients: alpha_i = t, alpha_j = A + B*t
                    A = -yj * s
                    if B > 0.0:
                        lo = max(0.0, -A)
                        hi = min(C, C - A)
                    else:
                        lo = max(0.0, A - C)
                        hi = min(C, A)
                    if lo <= hi:
                        c2 = -0.5 * (Qii + Qjj + 2.0 * B * Qij)
                        c1 = (1.0 + B) - (pi + B * pj + A * Qij + A * B * Qjj)
                        c0 = suma + A - 0.5 * (qpp + 2.0 * A * pj + A * A * Qjj)

                        val = c0 + lo * (c1 + lo * c2)
                        if val > best:
                            best = val
                        val = c0 + hi * (c1 + hi * c2)
                        if val > best:
                            best = val
                        if c2 < 0.0:
                            t = -c1 / (2.0 * c2)
                            if t < lo:
                                t = lo
                            elif t > hi:
                                t = hi
                            val = c0 + t * (c1 + t * c2)
                            if val > best:
                                best = val
    return best


def dual_grid_search(K: np.ndarray, y: np.ndarray, C: float, steps: int = 100) -> float:
    """Best dual objective found by the constrained grid scan described above."""
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = K.shape[0]
    if n < 2 or n > MAX_POINTS:
        raise ValueError(f"oracle supports 2..{MAX_POINTS} points, got {n}")
    Q_pad = np.zeros((MAX_POINTS, MAX_POINTS))
    y_pad = np.zeros(MAX_POINTS)
    Q_pad[:n, :n] = (y[:, None] * y[None, :]) * K
    y_pad[:n] = y
    return float(_grid_search_max(Q_pad, y_pad, n, float(C), int(steps)))
