"""Linear and RBF kernels with full Gram-matrix evaluation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class KernelSpec:
    kind: str = "rbf"  # "linear" | "rbf"
    gamma: float | None = None  # rbf only; None = 1 / (n_features * X.var())

    def __post_init__(self):
        if self.kind not in ("linear", "rbf"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.gamma is not None and not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be finite and positive, got {self.gamma}")

    def resolve(self, X: np.ndarray) -> "KernelSpec":
        """Fill a data-dependent gamma: 1 / (n_features * variance of X)."""
        if self.kind == "linear" or self.gamma is not None:
            return self
        var = float(X.var())
        if var <= 0:
            var = 1.0
        return KernelSpec(kind="rbf", gamma=1.0 / (X.shape[1] * var))

    def to_json(self) -> dict:
        return {"kind": self.kind, "gamma": self.gamma}

    @classmethod
    def from_json(cls, obj: dict) -> "KernelSpec":
        return cls(kind=obj["kind"], gamma=obj["gamma"])


def kernel_matrix(spec: KernelSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Gram matrix K[i, j] = k(A[i], B[j])."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if spec.kind == "linear":
        return A @ B.T
    sq = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-spec.gamma * sq)


def kernel_vector(spec: KernelSpec, A: np.ndarray, x: np.ndarray) -> np.ndarray:
    return kernel_matrix(spec, A, x.reshape(1, -1))[:, 0]
