"""Primitive layers with explicit forward/backward passes on NCHW tensors.

Convolution is cross-correlation via im2col and (grouped) matrix multiply;
backward recomputes the column matrix from the cached padded input instead
of keeping it around, which caps memory at roughly one activation per layer.
Gradients are exact (finite-difference-checked in the test suite).

Parameters default to float32 so checkpoints round-trip bit-exactly;
activation dtype follows the input (feed float64 for tight numeric tests,
float32 for training throughput).
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ShapeMismatch
from .params import Param

PARAM_DTYPE = np.float32


def he_uniform(rng, shape, fan_in, dtype=PARAM_DTYPE) -> np.ndarray:
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


class Layer:
    def forward(self, x, train=True):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError

    def parameters(self):
        return []

    def state_arrays(self):
        """Arrays a checkpoint must persist, in fixed order."""
        return [p.data for p in self.parameters()]

    def load_state_arrays(self, arrays):
        own = self.state_arrays()
        if len(arrays) != len(own):
            raise ShapeMismatch(f"{type(self).__name__}: expected {len(own)} arrays")
        for dst, src in zip(own, arrays):
            if dst.shape != src.shape:
                raise ShapeMismatch(f"{dst.shape} vs {src.shape}")
            dst[...] = src

    def astype(self, dtype):
        for p in self.parameters():
            p.astype(dtype)


def _out_size(size, k, stride, pad):
    return (size + 2 * pad - k) // stride + 1


def _windows(padded, k, stride):
    """(N, C, Ho, Wo, k, k) view of all kernel windows."""
    win = sliding_window_view(padded, (k, k), axis=(2, 3))
    return win[:, :, ::stride, ::stride]


class Conv2d(Layer):
    def __init__(self, in_ch, out_ch, k, stride=1, pad=0, groups=1, bias=True, rng=None):
        if in_ch % groups or out_ch % groups:
            raise ShapeMismatch(f"groups={groups} must divide in={in_ch} and out={out_ch}")
        self.in_ch, self.out_ch, self.k = in_ch, out_ch, k
        self.stride, self.pad, self.groups = stride, pad, groups
        rng = rng or np.random.default_rng(0)
        fan_in = (in_ch // groups) * k * k
        self.weight = Param(he_uniform(rng, (out_ch, in_ch // groups, k, k), fan_in))
        self.bias = Param(np.zeros(out_ch, dtype=PARAM_DTYPE), role="bias") if bias else None
        self._x_padded = None

    def parameters(self):
        return [self.weight] + ([self.bias] if self.bias is not None else [])

    def _cols(self, padded):
        """im2col: (G, N*Ho*Wo, Cg*k*k)."""
        n = padded.shape[0]
        win = _windows(padded, self.k, self.stride)  # N,C,Ho,Wo,k,k
        ho, wo = win.shape[2], win.shape[3]
        cg = self.in_ch // self.groups
        win = win.reshape(n, self.groups, cg, ho, wo, self.k, self.k)
        cols = win.transpose(1, 0, 3, 4, 2, 5, 6).reshape(
            self.groups, n * ho * wo, cg * self.k * self.k
        )
        return cols, ho, wo

    def forward(self, x, train=True):
        if x.ndim != 4 or x.shape[1] != self.in_ch:
            raise ShapeMismatch(f"conv expects (N,{self.in_ch},H,W), got {x.shape}")
        p = self.pad
        padded = np.pad(x, ((0, 0), (0, 0), (p, p), (p, p))) if p else x
        self._x_padded = padded
        cols, ho, wo = self._cols(padded)
        og = self.out_ch // self.groups
        w = self.weight.data.reshape(self.groups, og, -1).transpose(0, 2, 1)
        out = cols @ w  # (G, N*Ho*Wo, Og)
        n = x.shape[0]
        out = out.reshape(self.groups, n, ho, wo, og).transpose(1, 0, 4, 2, 3)
        out = out.reshape(n, self.out_ch, ho, wo)
        if self.bias is not None:
            out = out + self.bias.data.reshape(1, -1, 1, 1)
        return out

    def backward(self, dy):
        padded = self._x_padded
        n, _, hp, wp = padded.shape
        ho, wo = dy.shape[2], dy.shape[3]
        og = self.out_ch // self.groups
        cg = self.in_ch // self.groups
        dy_g = dy.reshape(n, self.groups, og, ho, wo).transpose(1, 0, 3, 4, 2)
        dy_g = dy_g.reshape(self.groups, n * ho * wo, og)

        cols, _, _ = self._cols(padded)
        dw = cols.transpose(0, 2, 1) @ dy_g  # (G, Cg*k*k, Og)
        dw = dw.transpose(0, 2, 1).reshape(self.out_ch, cg, self.k, self.k)
        self.weight.grad += dw
        if self.bias is not None:
            self.bias.grad += dy.sum(axis=(0, 2, 3))

        w = self.weight.data.reshape(self.groups, og, cg * self.k * self.k)
        dcols = dy_g @ w  # (G, N*Ho*Wo, Cg*k*k)
        dcols = dcols.reshape(self.groups, n, ho, wo, cg, self.k, self.k)
        dcols = dcols.transpose(1, 0, 4, 5, 6, 2, 3)  # N,G,Cg,k,k,Ho,Wo
        dcols = dcols.reshape(n, self.in_ch, self.k, self.k, ho, wo)
        dxp = np.zeros_like(padded)
        s = self.stride
        for ky in range(self.k):
            for kx in range(self.k):
                dxp[:, :, ky : ky + s * ho : s, kx : kx + s * wo : s] += dcols[
                    :, :, ky, kx
                ]
        p = self.pad
        self._x_padded = None
        return dxp[:, :, p : hp - p, p : wp - p] if p else dxp


class Linear(Layer):
    def __init__(self, in_features, out_features, rng=None):
        rng = rng or np.random.default_rng(0)
        self.in_features, self.out_features = in_features, out_features
        self.weight = Param(he_uniform(rng, (in_features, out_features), in_features))
        self.bias = Param(np.zeros(out_features, dtype=PARAM_DTYPE), role="bias")
        self._x = None

    def parameters(self):
        return [self.weight, self.bias]

    def forward(self, x, train=True):
        if x.ndim != 2 or x.shape[1] != self.in_features:
            raise ShapeMismatch(f"linear expects (N,{self.in_features}), got {x.shape}")
        self._x = x
        return x @ self.weight.data + self.bias.data

    def backward(self, dy):
        self.weight.grad += self._x.T @ dy
        self.bias.grad += dy.sum(axis=0)
        dx = dy @ self.weight.data.T
        self._x = None
        return dx


class ReLU(Layer):
    def forward(self, x, train=True):
        self._mask = x > 0
        return x * self._mask

    def backward(self, dy):
        return dy * self._mask


class BatchNorm2d(Layer):
    """Per-channel batch normalization; batch statistics while training,
    exponential running averages (momentum 0.9) at inference.

    eps is small enough that fresh running stats (mean 0, var 1) make
    inference an identity to within 1e-6."""

    def __init__(self, ch, momentum=0.9, eps=1e-8):
        self.ch, self.momentum, self.eps = ch, momentum, eps
        self.gamma = Param(np.ones(ch, dtype=PARAM_DTYPE), role="gamma")
        self.beta = Param(np.zeros(ch, dtype=PARAM_DTYPE), role="beta")
        self.running_mean = np.zeros(ch, dtype=PARAM_DTYPE)
        self.running_var = np.ones(ch, dtype=PARAM_DTYPE)
        self._cache = None

    def parameters(self):
        return [self.gamma, self.beta]

    def state_arrays(self):
        return [self.gamma.data, self.beta.data, self.running_mean, self.running_var]

    def astype(self, dtype):
        super().astype(dtype)
        self.running_mean = self.running_mean.astype(dtype)
        self.running_var = self.running_var.astype(dtype)

    def forward(self, x, train=True):
        if x.ndim != 4 or x.shape[1] != self.ch:
            raise ShapeMismatch(f"bn expects (N,{self.ch},H,W), got {x.shape}")
        g = self.gamma.data.reshape(1, -1, 1, 1)
        b = self.beta.data.reshape(1, -1, 1, 1)
        if train:
            mean = x.mean(axis=(0, 2, 3))
            var = x.var(axis=(0, 2, 3))
            self.running_mean[...] = self.momentum * self.running_mean + (
                1 - self.momentum
            ) * mean
            self.running_var[...] = self.momentum * self.running_var + (
                1 - self.momentum
            ) * var
        else:
            mean, var = self.running_mean, self.running_var
        inv_std = 1.0 / np.sqrt(var + self.eps)
        xhat = (x - mean.reshape(1, -1, 1, 1)) * inv_std.reshape(1, -1, 1, 1)
        self._cache = (xhat, inv_std, train)
        return g * xhat + b

    def backward(self, dy):
        xhat, inv_std, train = self._cache
        self._cache = None
        self.gamma.grad += (dy * xhat).sum(axis=(0, 2, 3))
        self.beta.grad += dy.sum(axis=(0, 2, 3))
        g = self.gamma.data.reshape(1, -1, 1, 1)
        dxhat = dy * g
        istd = inv_std.reshape(1, -1, 1, 1)
        if not train:
            return dxhat * istd
        m = dy.shape[0] * dy.shape[2] * dy.shape[3]
        sum_dxhat = dxhat.sum(axis=(0, 2, 3), keepdims=True)
        sum_dxhat_xhat = (dxhat * xhat).sum(axis=(0, 2, 3), keepdims=True)
        return istd / m * (m * dxhat - sum_dxhat - xhat * sum_dxhat_xhat)


class MaxPool2d(Layer):
    def __init__(self, k=2, stride=2, pad=0):
        self.k, self.stride, self.pad = k, stride, pad

    def forward(self, x, train=True):
        p = self.pad
        if p:
            x = np.pad(x, ((0, 0), (0, 0), (p, p), (p, p)), constant_values=-np.inf)
        self._in_shape = x.shape
        win = _windows(x, self.k, self.stride)
        n, c, ho, wo = win.shape[:4]
        flat = win.reshape(n, c, ho, wo, self.k * self.k)
        self._argmax = flat.argmax(axis=4)
        return flat.max(axis=4)

    def backward(self, dy):
        n, c, hp, wp = self._in_shape
        ho, wo = dy.shape[2], dy.shape[3]
        dxp = np.zeros((n, c, hp, wp), dtype=dy.dtype)
        s = self.stride
        for idx in range(self.k * self.k):
            ky, kx = divmod(idx, self.k)
            mask = self._argmax == idx
            dxp[:, :, ky : ky + s * ho : s, kx : kx + s * wo : s] += dy * mask
        p = self.pad
        self._argmax = None
        return dxp[:, :, p : hp - p, p : wp - p] if p else dxp


class AvgPool2d(Layer):
    def __init__(self, k, stride=None):
        self.k = k
        self.stride = stride if stride is not None else k

    def forward(self, x, train=True):
        self._in_shape = x.shape
        win = _windows(x, self.k, self.stride)
        return win.mean(axis=(4, 5))

    def backward(self, dy):
        n, c, h, w = self._in_shape
        ho, wo = dy.shape[2], dy.shape[3]
        dx = np.zeros((n, c, h, w), dtype=dy.dtype)
        s = self.stride
        share = dy / (self.k * self.k)
        for ky in range(self.k):
            for kx in range(self.k):
                dx[:, :, ky : ky + s * ho : s, kx : kx + s * wo : s] += share
        return dx


class GlobalAvgPool(Layer):
    """Mean over the spatial grid; emits (N, C)."""

    def forward(self, x, train=True):
        self._in_shape = x.shape
        return x.mean(axis=(2, 3))

    def backward(self, dy):
        n, c, h, w = self._in_shape
        return np.broadcast_to(dy[:, :, None, None], (n, c, h, w)) / (h * w)


class Flatten(Layer):
    def forward(self, x, train=True):
        self._in_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dy):
        return dy.reshape(self._in_shape)
