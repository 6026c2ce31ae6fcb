"""Composite modules: residual blocks, dense blocks, separable convolutions.

Convolutions followed by batch norm carry no bias (the BN shift absorbs it).
"""

from __future__ import annotations

import numpy as np

from .layers import AvgPool2d, BatchNorm2d, Conv2d, Layer, ReLU


class Sequential(Layer):
    def __init__(self, layers):
        self.layers = list(layers)

    def forward(self, x, train=True):
        for layer in self.layers:
            x = layer.forward(x, train)
        return x

    def backward(self, dy):
        for layer in reversed(self.layers):
            dy = layer.backward(dy)
        return dy

    def parameters(self):
        return [p for layer in self.layers for p in layer.parameters()]

    def state_arrays(self):
        return [a for layer in self.layers for a in layer.state_arrays()]

    def load_state_arrays(self, arrays):
        pos = 0
        for layer in self.layers:
            n = len(layer.state_arrays())
            layer.load_state_arrays(arrays[pos : pos + n])
            pos += n

    def astype(self, dtype):
        for layer in self.layers:
            layer.astype(dtype)


class BasicConv2d(Sequential):
    """3x3 convolution + batch norm + ReLU."""

    def __init__(self, in_ch, out_ch, stride=1, rng=None):
        super().__init__(
            [
                Conv2d(in_ch, out_ch, 3, stride=stride, pad=1, bias=False, rng=rng),
                BatchNorm2d(out_ch),
                ReLU(),
            ]
        )


class DepthwiseSeparable(Sequential):
    """Per-channel 3x3 convolution then 1x1 pointwise mixing, BN+ReLU after each.

    The depthwise stage uses groups equal to its input channels.
    """

    def __init__(self, in_ch, out_ch, stride=1, rng=None):
        self.depthwise = Conv2d(
            in_ch, in_ch, 3, stride=stride, pad=1, groups=in_ch, bias=False, rng=rng
        )
        self.pointwise = Conv2d(in_ch, out_ch, 1, bias=False, rng=rng)
        super().__init__(
            [
                self.depthwise,
                BatchNorm2d(in_ch),
                ReLU(),
                self.pointwise,
                BatchNorm2d(out_ch),
                ReLU(),
            ]
        )


class ResidualBlock(Layer):
    """Two 3x3 conv+BN stages with a shortcut added before the final ReLU.

    The shortcut is the identity when stride is 1 and the channel counts
    match; otherwise it is a 1x1 strided conv + BN projection.
    """

    def __init__(self, in_ch, out_ch, stride=1, rng=None):
        if stride not in (1, 2):
            raise ValueError(f"stride must be 1 or 2, got {stride}")
        self.main = Sequential(
            [
                Conv2d(in_ch, out_ch, 3, stride=stride, pad=1, bias=False, rng=rng),
                BatchNorm2d(out_ch),
                ReLU(),
                Conv2d(out_ch, out_ch, 3, stride=1, pad=1, bias=False, rng=rng),
                BatchNorm2d(out_ch),
            ]
        )
        if stride == 1 and in_ch == out_ch:
            self.shortcut = None
        else:
            self.shortcut = Sequential(
                [
                    Conv2d(in_ch, out_ch, 1, stride=stride, bias=False, rng=rng),
                    BatchNorm2d(out_ch),
                ]
            )

    def forward(self, x, train=True):
        main = self.main.forward(x, train)
        short = x if self.shortcut is None else self.shortcut.forward(x, train)
        summed = main + short
        self._mask = summed > 0
        return summed * self._mask

    def backward(self, dy):
        dy = dy * self._mask
        dx = self.main.backward(dy)
        if self.shortcut is None:
            dx = dx + dy
        else:
            dx = dx + self.shortcut.backward(dy)
        self._mask = None
        return dx

    def parameters(self):
        extra = [] if self.shortcut is None else self.shortcut.parameters()
        return self.main.parameters() + extra

    def state_arrays(self):
        extra = [] if self.shortcut is None else self.shortcut.state_arrays()
        return self.main.state_arrays() + extra

    def load_state_arrays(self, arrays):
        n_main = len(self.main.state_arrays())
        self.main.load_state_arrays(arrays[:n_main])
        if self.shortcut is not None:
            self.shortcut.load_state_arrays(arrays[n_main:])

    def astype(self, dtype):
        self.main.astype(dtype)
        if self.shortcut is not None:
            self.shortcut.astype(dtype)


class DenseBlock(Layer):
    """Stack where layer i consumes the concatenation of the block input and
    every earlier layer's output, and emits ``growth`` new channels.

    Each layer is BN-ReLU-conv3x3; with ``bottleneck=True`` a BN-ReLU-conv1x1
    stage producing 4*growth channels runs first (the deep-classifier
    configuration).  Output channels: in_ch + n_layers * growth.
    """

    def __init__(self, in_ch, n_layers, growth, bottleneck=False, rng=None):
        self.in_ch, self.n_layers, self.growth = in_ch, n_layers, growth
        self.bottleneck = bottleneck
        self.layers = []
        ch = in_ch
        for _ in range(n_layers):
            stages = []
            if bottleneck:
                stages += [
                    BatchNorm2d(ch),
                    ReLU(),
                    Conv2d(ch, 4 * growth, 1, bias=False, rng=rng),
                    BatchNorm2d(4 * growth),
                    ReLU(),
                    Conv2d(4 * growth, growth, 3, pad=1, bias=False, rng=rng),
                ]
            else:
                stages += [
                    BatchNorm2d(ch),
                    ReLU(),
                    Conv2d(ch, growth, 3, pad=1, bias=False, rng=rng),
                ]
            self.layers.append(Sequential(stages))
            ch += growth
        self.out_ch = ch

    def forward(self, x, train=True):
        feats = [x]
        self._widths = [x.shape[1]]
        for layer in self.layers:
            inp = np.concatenate(feats, axis=1) if len(feats) > 1 else feats[0]
            out = layer.forward(inp, train)
            feats.append(out)
            self._widths.append(out.shape[1])
        return np.concatenate(feats, axis=1)

    def backward(self, dy):
        bounds = np.cumsum([0] + self._widths)
        # gradient w.r.t. each stored feature, accumulated across consumers
        grads = [
            dy[:, bounds[i] : bounds[i + 1]].copy() for i in range(len(self._widths))
        ]
        for i in range(len(self.layers) - 1, -1, -1):
            dinp = self.layers[i].backward(grads[i + 1])
            for j in range(i + 1):
                grads[j] += dinp[:, bounds[j] : bounds[j + 1]]
        self._widths = None
        return grads[0]

    def parameters(self):
        return [p for layer in self.layers for p in layer.parameters()]

    def state_arrays(self):
        return [a for layer in self.layers for a in layer.state_arrays()]

    def load_state_arrays(self, arrays):
        pos = 0
        for layer in self.layers:
            n = len(layer.state_arrays())
            layer.load_state_arrays(arrays[pos : pos + n])
            pos += n

    def astype(self, dtype):
        for layer in self.layers:
            layer.astype(dtype)


class Transition(Sequential):
    """BN-ReLU-1x1 conv channel reduction followed by 2x2 average pooling."""

    def __init__(self, in_ch, out_ch, rng=None):
        super().__init__(
            [
                BatchNorm2d(in_ch),
                ReLU(),
                Conv2d(in_ch, out_ch, 1, bias=False, rng=rng),
                AvgPool2d(2, 2),
            ]
        )
