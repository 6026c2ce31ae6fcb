"""Softmax heads: mean-squared-error and cross-entropy training criteria.

Both losses fold the softmax in and return the exact gradient with respect
to the logits, which avoids the usual numerical trouble of differentiating
through a separate softmax layer.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def one_hot(labels, n_classes: int = 3) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.size, n_classes))
    out[np.arange(labels.size), labels] = 1.0
    return out


class SoftmaxMSE:
    """Mean squared error between softmax probabilities and one-hot targets."""

    name = "mse"

    def forward_backward(self, logits, targets):
        if logits.shape != targets.shape:
            raise ShapeMismatch(f"{logits.shape} vs {targets.shape}")
        p = softmax(logits)
        diff = p - targets
        loss = float((diff * diff).mean())
        # d loss / d p, then through the softmax Jacobian
        dp = 2.0 * diff / diff.size
        dz = p * (dp - (dp * p).sum(axis=1, keepdims=True))
        return loss, dz


class SoftmaxCrossEntropy:
    """Mean negative log-likelihood of the target class."""

    name = "ce"

    def forward_backward(self, logits, targets):
        if logits.shape != targets.shape:
            raise ShapeMismatch(f"{logits.shape} vs {targets.shape}")
        p = softmax(logits)
        n = logits.shape[0]
        eps = np.finfo(p.dtype).tiny
        loss = float(-(targets * np.log(np.maximum(p, eps))).sum() / n)
        dz = (p - targets) / n
        return loss, dz


LOSSES = {"mse": SoftmaxMSE, "ce": SoftmaxCrossEntropy}
