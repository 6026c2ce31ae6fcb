"""Declarative network specs and their runtime instantiation.

A NetworkSpec is a JSON-serializable list of layer records plus a loss
name; ``Network`` materializes it with seeded He-uniform initialization.
Keeping the two separate lets checkpoints embed the spec and rebuild the
exact architecture before loading parameters.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyTrainingSet, ShapeMismatch
from .blocks import (
    BasicConv2d,
    DenseBlock,
    DepthwiseSeparable,
    ResidualBlock,
    Transition,
)
from .layers import (
    AvgPool2d,
    BatchNorm2d,
    Conv2d,
    Flatten,
    GlobalAvgPool,
    Linear,
    MaxPool2d,
    ReLU,
)
from .losses import LOSSES, one_hot, softmax


@dataclass
class NetworkSpec:
    name: str
    layers: list  # layer records (dicts with a "kind" key)
    loss: str = "ce"
    in_channels: int = 1
    input_size: int = 100
    feature_tap: int | None = None  # layer index whose output is the feature vector

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "layers": self.layers,
            "loss": self.loss,
            "in_channels": self.in_channels,
            "input_size": self.input_size,
            "feature_tap": self.feature_tap,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NetworkSpec":
        return cls(**obj)

    def conv_layer_count(self) -> int:
        """Countable learnable layers: convolutions plus linear heads."""
        total = 0
        for rec in self.layers:
            kind = rec["kind"]
            if kind in ("conv", "linear", "basic_conv"):
                total += 1
            elif kind == "residual":
                total += 2  # shortcut projections not counted
            elif kind == "depthwise_sep":
                total += 2
            elif kind == "transition":
                total += 1
            elif kind == "dense_block":
                total += rec["layers"] * (2 if rec.get("bottleneck") else 1)
        return total


def _build_layer(rec: dict, rng):
    kind = rec["kind"]
    if kind == "conv":
        return Conv2d(
            rec["in"],
            rec["out"],
            rec["k"],
            stride=rec.get("stride", 1),
            pad=rec.get("pad", 0),
            groups=rec.get("groups", 1),
            bias=rec.get("bias", True),
            rng=rng,
        )
    if kind == "bn":
        return BatchNorm2d(rec["ch"])
    if kind == "relu":
        return ReLU()
    if kind == "maxpool":
        return MaxPool2d(rec.get("k", 2), rec.get("stride", 2), rec.get("pad", 0))
    if kind == "avgpool":
        return AvgPool2d(rec["k"], rec.get("stride"))
    if kind == "gap":
        return GlobalAvgPool()
    if kind == "flatten":
        return Flatten()
    if kind == "linear":
        return Linear(rec["in"], rec["out"], rng=rng)
    if kind == "basic_conv":
        return BasicConv2d(rec["in"], rec["out"], rec.get("stride", 1), rng=rng)
    if kind == "depthwise_sep":
        return DepthwiseSeparable(rec["in"], rec["out"], rec.get("stride", 1), rng=rng)
    if kind == "residual":
        return ResidualBlock(rec["in"], rec["out"], rec.get("stride", 1), rng=rng)
    if kind == "dense_block":
        return DenseBlock(
            rec["in"],
            rec["layers"],
            rec["growth"],
            bottleneck=rec.get("bottleneck", False),
            rng=rng,
        )
    if kind == "transition":
        return Transition(rec["in"], rec["out"], rng=rng)
    raise ValueError(f"unknown layer kind {kind!r}")


class Network:
    def __init__(self, spec: NetworkSpec, seed: int = 0):
        self.spec = spec
        rng = np.random.Generator(np.random.PCG64(seed))
        self.layers = [_build_layer(rec, rng) for rec in spec.layers]
        self.loss = LOSSES[spec.loss]()

    def forward(self, x, train=True):
        for layer in self.layers:
            x = layer.forward(x, train)
        return x

    def forward_until(self, x, index, train=False):
        """Run layers [0, index) and return that activation (feature tap)."""
        for layer in self.layers[:index]:
            x = layer.forward(x, train)
        return x

    def features(self, x):
        """Flattened activation at the spec's feature_tap layer."""
        if self.spec.feature_tap is None:
            raise ShapeMismatch(f"{self.spec.name} declares no feature tap")
        out = self.forward_until(x, self.spec.feature_tap, train=False)
        return out.reshape(out.shape[0], -1)

    def backward(self, dlogits):
        dy = dlogits
        for layer in reversed(self.layers):
            dy = layer.backward(dy)
        return dy

    def parameters(self):
        return [p for layer in self.layers for p in layer.parameters()]

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def predict_proba(self, x) -> np.ndarray:
        return softmax(self.forward(x, train=False))

    def predict(self, x) -> np.ndarray:
        return np.argmax(self.forward(x, train=False), axis=1)

    def loss_on(self, x, labels, train=True):
        logits = self.forward(x, train)
        targets = one_hot(labels, logits.shape[1])
        loss, dz = self.loss.forward_backward(logits, targets)
        return loss, dz

    def clone(self, dtype=None) -> "Network":
        other = copy.deepcopy(self)
        if dtype is not None:
            for layer in other.layers:
                layer.astype(dtype)
        return other


@dataclass
class FitConfig:
    epochs: int = 10
    batch: int = 16
    lr: float = 1e-4
    seed: int = 0
    stop_at_train_accuracy: float | None = None


def train(net: Network, X, labels, cfg: FitConfig):
    """Mini-batch Adam training with seeded per-epoch shuffling.

    Returns (net, per-epoch mean loss history).  With
    ``stop_at_train_accuracy`` set, training ends early once the whole
    training set is classified at or above that accuracy.
    """
    from .optim import Adam

    X = np.asarray(X)
    labels = np.asarray(labels, dtype=np.int64)
    if X.shape[0] == 0:
        raise EmptyTrainingSet("no training samples")
    if cfg.batch < 1:
        raise ValueError(f"batch must be >= 1, got {cfg.batch}")
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    opt = Adam(net.parameters(), lr=cfg.lr)
    history = []
    n = X.shape[0]
    for _ in range(cfg.epochs):
        perm = rng.permutation(n)
        losses = []
        for start in range(0, n, cfg.batch):
            idx = perm[start : start + cfg.batch]
            opt.zero_grad()
            loss, dz = net.loss_on(X[idx], labels[idx], train=True)
            net.backward(dz)
            opt.step()
            losses.append(loss)
        history.append(float(np.mean(losses)))
        if cfg.stop_at_train_accuracy is not None:
            acc = float((net.predict(X) == labels).mean())
            if acc >= cfg.stop_at_train_accuracy:
                break
    return net, history
