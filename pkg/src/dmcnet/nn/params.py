"""Trainable parameter container."""

from __future__ import annotations

import numpy as np


class Param:
    """A learnable array plus its gradient accumulator.

    ``role`` tags what the parameter is ("weight", "bias", "gamma", "beta")
    so callers can, e.g., zero every weight without touching biases.
    """

    __slots__ = ("data", "grad", "role")

    def __init__(self, data: np.ndarray, role: str = "weight"):
        self.data = data
        self.grad = np.zeros_like(data)
        self.role = role

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def zero_grad(self) -> None:
        self.grad[...] = 0

    def astype(self, dtype) -> None:
        self.data = self.data.astype(dtype)
        self.grad = np.zeros_like(self.data)
