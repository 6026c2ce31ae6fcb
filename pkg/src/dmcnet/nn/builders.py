"""Table-driven builders for the four classifier architectures, plus the
convolution cost model.

All builders take the input resolution (default 100, grayscale) and emit a
NetworkSpec whose head size matches the traced spatial dimensions, so the
same architectures run at toy resolutions for fast probes.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ShapeMismatch
from .network import NetworkSpec


@dataclass
class ConvSpec:
    in_channels: int
    out_channels: int
    kernel: int
    stride: int = 1
    padding: int = 0
    groups: int = 1

    def __post_init__(self):
        if self.in_channels % self.groups or self.out_channels % self.groups:
            raise ShapeMismatch(
                f"groups={self.groups} must divide {self.in_channels} and {self.out_channels}"
            )


@dataclass
class ConvCost:
    standard: int
    depthwise: int
    separable_total: int


def conv_cost(spec: ConvSpec, d_f: int) -> ConvCost:
    """Multiply counts for a d_f x d_f output feature map.

    standard:   D_K^2 * M * N * D_F^2
    depthwise:  D_K^2 * M * D_F^2           (the per-channel stage alone)
    separable:  depthwise + M * N * D_F^2   (adds the 1x1 pointwise stage)
    """
    if d_f <= 0 or spec.kernel <= 0:
        raise ValueError("dimensions must be positive")
    k2 = spec.kernel * spec.kernel
    m, n = spec.in_channels, spec.out_channels
    f2 = d_f * d_f
    standard = k2 * m * n * f2
    depthwise = k2 * m * f2
    return ConvCost(
        standard=standard,
        depthwise=depthwise,
        separable_total=depthwise + m * n * f2,
    )


def _conv_out(size: int, k: int, stride: int, pad: int) -> int:
    return (size + 2 * pad - k) // stride + 1


def trace_shapes(spec: NetworkSpec):
    """(channels, height, width) after each layer; linear layers yield (out,)."""
    c, h, w = spec.in_channels, spec.input_size, spec.input_size
    shapes = []
    for rec in spec.layers:
        kind = rec["kind"]
        if kind == "conv":
            c = rec["out"]
            h = _conv_out(h, rec["k"], rec.get("stride", 1), rec.get("pad", 0))
            w = _conv_out(w, rec["k"], rec.get("stride", 1), rec.get("pad", 0))
        elif kind in ("basic_conv", "depthwise_sep", "residual"):
            s = rec.get("stride", 1)
            c = rec["out"]
            h = _conv_out(h, 3, s, 1)
            w = _conv_out(w, 3, s, 1)
        elif kind == "maxpool":
            k, s, p = rec.get("k", 2), rec.get("stride", 2), rec.get("pad", 0)
            h, w = _conv_out(h, k, s, p), _conv_out(w, k, s, p)
        elif kind == "avgpool":
            k = rec["k"]
            s = rec.get("stride") or k
            h, w = _conv_out(h, k, s, 0), _conv_out(w, k, s, 0)
        elif kind == "dense_block":
            c = rec["in"] + rec["layers"] * rec["growth"]
        elif kind == "transition":
            c = rec["out"]
            h, w = _conv_out(h, 2, 2, 0), _conv_out(w, 2, 2, 0)
        elif kind == "gap":
            shapes.append((c,))
            continue
        elif kind == "flatten":
            shapes.append((c * h * w,))
            continue
        elif kind == "linear":
            shapes.append((rec["out"],))
            continue
        shapes.append((c, h, w))
    return shapes


def build_small_cnn(input_size: int = 100, in_channels: int = 1) -> NetworkSpec:
    """Three conv+ReLU+maxpool stages with 3, 6, 9 kernels, then a softmax
    head trained with MSE.  The feature tap sits after the last pooling."""
    layers = []
    size = input_size
    chans = in_channels
    for out in (3, 6, 9):
        layers.append({"kind": "conv", "in": chans, "out": out, "k": 3, "pad": 1})
        layers.append({"kind": "relu"})
        layers.append({"kind": "maxpool", "k": 2, "stride": 2})
        size = _conv_out(size, 2, 2, 0)
        chans = out
    feature_tap = len(layers)
    layers.append({"kind": "flatten"})
    layers.append({"kind": "linear", "in": 9 * size * size, "out": 3})
    return NetworkSpec(
        name="small_cnn",
        layers=layers,
        loss="mse",
        in_channels=in_channels,
        input_size=input_size,
        feature_tap=feature_tap,
    )


RESNET18_BLOCKS = (
    (64, 64, 1),
    (64, 64, 1),
    (64, 128, 2),
    (128, 128, 1),
    (128, 256, 2),
    (256, 256, 1),
    (256, 512, 2),
    (512, 512, 1),
)


def build_resnet18(input_size: int = 100, in_channels: int = 1) -> NetworkSpec:
    layers = [
        {"kind": "conv", "in": in_channels, "out": 64, "k": 3, "stride": 1, "pad": 1, "bias": False},
        {"kind": "bn", "ch": 64},
        {"kind": "relu"},
    ]
    for cin, cout, stride in RESNET18_BLOCKS:
        layers.append({"kind": "residual", "in": cin, "out": cout, "stride": stride})
    layers.append({"kind": "gap"})
    layers.append({"kind": "linear", "in": 512, "out": 3})
    return NetworkSpec(
        name="resnet18",
        layers=layers,
        loss="ce",
        in_channels=in_channels,
        input_size=input_size,
    )


MOBILENET_ROWS = (
    # (in, out, stride, repeat)
    (32, 64, 1, 1),
    (64, 128, 2, 1),
    (128, 128, 1, 1),
    (128, 256, 1, 1),
    (256, 256, 1, 1),
    (256, 512, 2, 1),
    (512, 512, 1, 5),
    (512, 1024, 2, 1),
    (1024, 1024, 1, 1),
)


def build_mobilenetv1(input_size: int = 100, in_channels: int = 1) -> NetworkSpec:
    layers = [{"kind": "basic_conv", "in": in_channels, "out": 32, "stride": 1}]
    size = _conv_out(input_size, 3, 1, 1)
    for cin, cout, stride, repeat in MOBILENET_ROWS:
        for _ in range(repeat):
            layers.append({"kind": "depthwise_sep", "in": cin, "out": cout, "stride": stride})
            size = _conv_out(size, 3, stride, 1)
            cin, stride = cout, 1
    layers.append({"kind": "avgpool", "k": 4, "stride": 4})
    size = _conv_out(size, 4, 4, 0)
    layers.append({"kind": "flatten"})
    layers.append({"kind": "linear", "in": 1024 * size * size, "out": 3})
    return NetworkSpec(
        name="mobilenetv1",
        layers=layers,
        loss="ce",
        in_channels=in_channels,
        input_size=input_size,
    )


DENSENET121_BLOCKS = (6, 12, 24, 16)
DENSENET_GROWTH = 32


def build_densenet121(input_size: int = 100, in_channels: int = 1) -> NetworkSpec:
    """Stem conv, four bottleneck dense blocks (6/12/24/16 two-conv layers,
    growth 32) with 1x1+avgpool transitions between, global pool, linear.

    conv_layer_count() on the result is 121:
    1 stem + 2*(6+12+24+16) block convs + 3 transition convs + 1 linear."""
    layers = [
        {"kind": "conv", "in": in_channels, "out": 64, "k": 7, "stride": 2, "pad": 3, "bias": False},
        {"kind": "bn", "ch": 64},
        {"kind": "relu"},
        {"kind": "maxpool", "k": 3, "stride": 2, "pad": 1},
    ]
    ch = 64
    for i, n_layers in enumerate(DENSENET121_BLOCKS):
        layers.append(
            {
                "kind": "dense_block",
                "in": ch,
                "layers": n_layers,
                "growth": DENSENET_GROWTH,
                "bottleneck": True,
            }
        )
        ch += n_layers * DENSENET_GROWTH
        if i < len(DENSENET121_BLOCKS) - 1:
            layers.append({"kind": "transition", "in": ch, "out": ch // 2})
            ch //= 2
    layers.append({"kind": "bn", "ch": ch})
    layers.append({"kind": "relu"})
    layers.append({"kind": "gap"})
    layers.append({"kind": "linear", "in": ch, "out": 3})
    return NetworkSpec(
        name="densenet121",
        layers=layers,
        loss="ce",
        in_channels=in_channels,
        input_size=input_size,
    )


BUILDERS = {
    "small_cnn": build_small_cnn,
    "resnet18": build_resnet18,
    "mobilenetv1": build_mobilenetv1,
    "densenet121": build_densenet121,
}
