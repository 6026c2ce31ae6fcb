"""Bias-corrected Adam."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch


class AdamState:
    """First/second moment estimates for one parameter array."""

    def __init__(self, shape, dtype):
        self.m = np.zeros(shape, dtype=dtype)
        self.v = np.zeros(shape, dtype=dtype)


def adam_update(state: AdamState, param, grad, lr, step, beta1=0.9, beta2=0.999, eps=1e-8):
    """One Adam update in place; ``step`` counts from 1."""
    if state.m.shape != param.shape or grad.shape != param.shape:
        raise ShapeMismatch(f"adam shapes {state.m.shape}/{param.shape}/{grad.shape}")
    state.m[...] = beta1 * state.m + (1 - beta1) * grad
    state.v[...] = beta2 * state.v + (1 - beta2) * grad * grad
    mhat = state.m / (1 - beta1**step)
    vhat = state.v / (1 - beta2**step)
    param -= (lr * mhat / (np.sqrt(vhat) + eps)).astype(param.dtype, copy=False)


class Adam:
    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        if lr <= 0:
            raise ValueError(f"lr must be positive, got {lr}")
        self.params = list(params)
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.step_count = 0
        self.states = [AdamState(p.shape, p.data.dtype) for p in self.params]

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()

    def step(self):
        self.step_count += 1
        for p, s in zip(self.params, self.states):
            adam_update(
                s, p.data, p.grad, self.lr, self.step_count, self.beta1, self.beta2, self.eps
            )
