"""Finite-difference verification of backpropagation.

Every parameter element is perturbed by +-eps and the central difference of
the loss is compared against the analytic gradient.  The check runs on a
float64 clone of the network, so the only error left is truncation of the
finite difference itself.
"""

from __future__ import annotations

import numpy as np

PARAM_BUDGET = 50_000


def gradient_check(net, x, labels, eps: float = 1e-3) -> float:
    """Max relative error over all parameters; denominator max(|a|,|b|,1e-8)."""
    if net.parameter_count() >= PARAM_BUDGET:
        raise ValueError(
            f"{net.parameter_count()} parameters; gradient_check is for toy nets"
        )
    net = net.clone(dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)

    for p in net.parameters():
        p.zero_grad()
    loss, dz = net.loss_on(x, labels, train=True)
    net.backward(dz)

    worst = 0.0
    for p in net.parameters():
        data = p.data
        grad = p.grad
        it = np.nditer(data, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = data[idx]
            data[idx] = orig + eps
            plus, _ = net.loss_on(x, labels, train=True)
            data[idx] = orig - eps
            minus, _ = net.loss_on(x, labels, train=True)
            data[idx] = orig
            numeric = (plus - minus) / (2 * eps)
            analytic = grad[idx]
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
            worst = max(worst, rel)
    return worst
