"""Binary soft-margin SVM trained with simplified sequential minimal optimization.

Pairs of dual coefficients are optimized jointly: the first index comes from
a sweep over KKT violators, the second is drawn uniformly from the remaining
indices with a seeded generator.  Training stops once ``max_passes``
consecutive sweeps find no violator.  The box constraint 0 <= alpha <= C and
the equality constraint sum(alpha * y) = 0 hold after every update, and each
accepted step increases the dual objective (eta < 0 is required).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateLabels, DimensionMismatch, NonFiniteInput
from .kernels import KernelSpec, kernel_matrix, kernel_vector

# Steps smaller than this are treated as no progress.
MIN_ALPHA_STEP = 1e-10
# Hard cap on sweeps, to bound runtime on adversarial data.
MAX_SWEEPS = 2000


@dataclass
class TrainConfig:
    C: float = 1.0
    tol: float = 1e-3
    max_passes: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if not 0.0 < self.tol < 1.0:
            raise ValueError(f"tol must be in (0,1), got {self.tol}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be >= 1, got {self.max_passes}")


@dataclass
class SvmModel:
    support_vectors: np.ndarray  # (n_sv, d)
    alphas: np.ndarray  # (n_sv,)
    labels: np.ndarray  # (n_sv,) in {-1, +1}
    bias: float
    kernel: KernelSpec
    config: TrainConfig = field(default_factory=TrainConfig)

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]

    def to_json(self) -> dict:
        return {
            "kernel": self.kernel.to_json(),
            "bias": self.bias,
            "C": self.config.C,
            "alphas": self.alphas.tolist(),
            "labels": self.labels.tolist(),
            "support_vectors": self.support_vectors.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SvmModel":
        return cls(
            support_vectors=np.array(obj["support_vectors"], dtype=np.float64),
            alphas=np.array(obj["alphas"], dtype=np.float64),
            labels=np.array(obj["labels"], dtype=np.float64),
            bias=float(obj["bias"]),
            kernel=KernelSpec.from_json(obj["kernel"]),
            config=TrainConfig(C=float(obj.get("C", 1.0))),
        )


def dual_objective(K: np.ndarray, y: np.ndarray, alpha: np.ndarray) -> float:
    """W(alpha) = sum(alpha) - 1/2 * sum_ij alpha_i alpha_j y_i y_j K_ij."""
    ay = alpha * y
    return float(alpha.sum() - 0.5 * ay @ K @ ay)


def smo_train_binary(
    X: np.ndarray,
    y: np.ndarray,
    cfg: TrainConfig | None = None,
    kernel: KernelSpec | None = None,
    on_update=None,
) -> SvmModel:
    """Train a binary SVM; y must contain both +1 and -1.

    ``on_update(alpha, bias)`` is called after every accepted pair step,
    which is how the feasibility/monotonicity properties are checked.
    """
    cfg = cfg or TrainConfig()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise DimensionMismatch(f"X {X.shape} and y {y.shape} do not align")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise NonFiniteInput("training data contains non-finite values")
    kernel = (kernel or KernelSpec()).resolve(X)
    if not (np.any(y > 0) and np.any(y < 0)):
        raise DegenerateLabels("need at least one example of each label")
    if not np.all(np.abs(y) == 1):
        raise DegenerateLabels(f"labels must be +-1, got {sorted(set(y.tolist()))}")

    n = X.shape[0]
    C, tol = cfg.C, cfg.tol
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    K = kernel_matrix(kernel, X, X)
    alpha = np.zeros(n)
    b = 0.0
    # errors E_i = f(x_i) - y_i, maintained incrementally
    E = -y.copy()

    passes = 0
    sweeps = 0
    while passes < cfg.max_passes and sweeps < MAX_SWEEPS:
        sweeps += 1
        changed = 0
        for i in range(n):
            yEi = y[i] * E[i]
            if not ((yEi < -tol and alpha[i] < C) or (yEi > tol and alpha[i] > 0)):
                continue
            j = int(rng.integers(n - 1))
            if j >= i:
                j += 1
            if y[i] != y[j]:
                L = max(0.0, alpha[j] - alpha[i])
                H = min(C, C + alpha[j] - alpha[i])
            else:
                L = max(0.0, alpha[i] + alpha[j] - C)
                H = min(C, alpha[i] + alpha[j])
            if L >= H:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0:
                continue
            aj_new = alpha[j] - y[j] * (E[i] - E[j]) / eta
            aj_new = min(H, max(L, aj_new))
            d_aj = aj_new - alpha[j]
            if abs(d_aj) < MIN_ALPHA_STEP:
                continue
            ai_new = alpha[i] - y[i] * y[j] * d_aj
            # snap arithmetic residue onto the box edges so alpha > 0 means
            # "genuinely a support vector"
            snap = 1e-12 * C
            if ai_new < snap:
                ai_new = 0.0
            elif ai_new > C - snap:
                ai_new = C
            d_ai = ai_new - alpha[i]

            b1 = b - E[i] - y[i] * d_ai * K[i, i] - y[j] * d_aj * K[i, j]
            b2 = b - E[j] - y[i] * d_ai * K[i, j] - y[j] * d_aj * K[j, j]
            if 0.0 < ai_new < C:
                b_new = b1
            elif 0.0 < aj_new < C:
                b_new = b2
            else:
                b_new = 0.5 * (b1 + b2)

            E += y[i] * d_ai * K[i] + y[j] * d_aj * K[j] + (b_new - b)
            alpha[i], alpha[j], b = ai_new, aj_new, b_new
            changed += 1
            if on_update is not None:
                on_update(alpha, b)
        passes = passes + 1 if changed == 0 else 0

    sv = alpha > 0
    return SvmModel(
        support_vectors=X[sv].copy(),
        alphas=alpha[sv].copy(),
        labels=y[sv].copy(),
        bias=b,
        kernel=kernel,
        config=cfg,
    )


def decision(model: SvmModel, x: np.ndarray) -> float:
    """Signed margin score sum_i alpha_i y_i k(x_i, x) + b."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] != model.n_features:
        raise DimensionMismatch(
            f"expected {model.n_features} features, got {x.shape[0]}"
        )
    if model.support_vectors.shape[0] == 0:
        return model.bias
    k = kernel_vector(model.kernel, model.support_vectors, x)
    return float((model.alphas * model.labels) @ k + model.bias)


def decision_batch(model: SvmModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(
            f"expected {model.n_features} features, got {X.shape[1]}"
        )
    if model.support_vectors.shape[0] == 0:
        return np.full(X.shape[0], model.bias)
    K = kernel_matrix(model.kernel, X, model.support_vectors)
    return K @ (model.alphas * model.labels) + model.bias
