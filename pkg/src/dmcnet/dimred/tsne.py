"""t-SNE: perplexity-calibrated affinities and KL gradient descent.

High-dimensional affinities are Gaussian conditionals whose bandwidths are
binary-searched per row so the row entropy matches log2(perplexity); the
joint is the symmetrized p_ij = (p_{j|i} + p_{i|j}) / 2N.  Low-dimensional
similarities use the Student-t kernel normalized over all ordered pairs.
The embedding minimizes KL(P || Q) by gradient descent with momentum
(0.5 until iteration 250, then 0.8) and x4 early exaggeration of P for the
first 100 iterations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateDistances, SupportMismatch

ENTROPY_TOL = 1e-5
BINARY_SEARCH_STEPS = 50
EXAGGERATION = 4.0
EXAGGERATION_ITERS = 100
MOMENTUM_SWITCH_ITER = 250


@dataclass
class TsneConfig:
    perplexity: float = 30.0
    out_dims: int = 2
    iterations: int = 1000
    learning_rate: float = 200.0
    seed: int = 0
    early_exaggeration: float = EXAGGERATION
    # momentum schedule: initial value, value after the switch iteration
    momentum_start: float = 0.5
    momentum_late: float = 0.8
    momentum_switch_iter: int = MOMENTUM_SWITCH_ITER

    def __post_init__(self):
        if self.perplexity <= 1.0:
            raise ValueError(f"perplexity must exceed 1, got {self.perplexity}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


@dataclass
class Embedding:
    points: np.ndarray  # (N, d)
    labels: np.ndarray | None
    kl: float
    kl_history: list


def _pairwise_sq(X: np.ndarray) -> np.ndarray:
    s = (X * X).sum(axis=1)
    d2 = s[:, None] + s[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def _row_conditional(d2_row: np.ndarray, beta: float) -> np.ndarray:
    # subtract the max for numerical stability; normalization cancels it
    shifted = -beta * (d2_row - d2_row.min())
    p = np.exp(shifted)
    return p / p.sum()


def _row_entropy_bits(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def tsne_affinities(X: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized joint affinities P; rows calibrated to the perplexity."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    d2 = _pairwise_sq(X)
    off_diag = d2[~np.eye(n, dtype=bool)]
    if np.all(off_diag == 0):
        raise DegenerateDistances("all pairwise distances are zero")
    target = np.log2(perplexity)
    cond = np.zeros((n, n))
    for i in range(n):
        row = np.delete(d2[i], i)
        beta, lo, hi = 1.0, 0.0, np.inf
        p = _row_conditional(row, beta)
        for _ in range(BINARY_SEARCH_STEPS):
            h = _row_entropy_bits(p)
            if abs(h - target) < ENTROPY_TOL:
                break
            if h > target:  # too spread out -> increase beta
                lo = beta
                beta = beta * 2.0 if hi == np.inf else 0.5 * (beta + hi)
            else:
                hi = beta
                beta = 0.5 * (beta + lo)
            p = _row_conditional(row, beta)
        cond[i, np.arange(n) != i] = p
    return (cond + cond.T) / (2.0 * n)


def tsne_q(Y: np.ndarray) -> np.ndarray:
    """Student-t similarities normalized over all ordered pairs, zero diagonal."""
    Y = np.asarray(Y, dtype=np.float64)
    w = 1.0 / (1.0 + _pairwise_sq(Y))
    np.fill_diagonal(w, 0.0)
    return w / w.sum()


def tsne_kl(P: np.ndarray, Q: np.ndarray) -> float:
    """KL(P || Q) over off-diagonal entries; 0 * log(0/q) = 0."""
    P = np.asarray(P, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    if P.shape != Q.shape:
        raise SupportMismatch(f"{P.shape} vs {Q.shape}")
    mask = P > 0
    if np.any(Q[mask] <= 0):
        raise SupportMismatch("Q is zero where P is positive")
    return float((P[mask] * np.log(P[mask] / Q[mask])).sum())


def _gradient(P: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """d KL / d Y for the Student-t embedding; exact, including Q normalization."""
    w = 1.0 / (1.0 + _pairwise_sq(Y))
    np.fill_diagonal(w, 0.0)
    Q = w / w.sum()
    coeff = (P - Q) * w
    grad = 4.0 * ((np.diag(coeff.sum(axis=1)) - coeff) @ Y)
    return grad


def tsne_run(X: np.ndarray, cfg: TsneConfig, labels=None) -> Embedding:
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if cfg.perplexity >= n:
        raise ValueError(f"perplexity {cfg.perplexity} must be < sample count {n}")
    P = tsne_affinities(X, cfg.perplexity)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    Y = rng.normal(0.0, 1e-4, size=(n, cfg.out_dims))
    velocity = np.zeros_like(Y)
    kl_history = []
    for it in range(cfg.iterations):
        P_eff = P * cfg.early_exaggeration if it < EXAGGERATION_ITERS else P
        grad = _gradient(P_eff, Y)
        momentum = cfg.momentum_start if it < cfg.momentum_switch_iter else cfg.momentum_late
        velocity = momentum * velocity - cfg.learning_rate * grad
        Y = Y + velocity
        Y = Y - Y.mean(axis=0)
        kl_history.append(tsne_kl(P, tsne_q(Y)))
    return Embedding(
        points=Y,
        labels=None if labels is None else np.asarray(labels),
        kl=kl_history[-1],
        kl_history=kl_history,
    )
