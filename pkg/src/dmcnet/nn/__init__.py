"""Minimal layer library and builders for the four classifier networks."""

from .blocks import (
    BasicConv2d,
    DenseBlock,
    DepthwiseSeparable,
    ResidualBlock,
    Sequential,
    Transition,
)
from .builders import (
    BUILDERS,
    ConvCost,
    ConvSpec,
    build_densenet121,
    build_mobilenetv1,
    build_resnet18,
    build_small_cnn,
    conv_cost,
    trace_shapes,
)
from .checkpoint import load_checkpoint, save_checkpoint
from .gradcheck import gradient_check
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
from .losses import SoftmaxCrossEntropy, SoftmaxMSE, one_hot, softmax
from .network import FitConfig, Network, NetworkSpec, train
from .optim import Adam, AdamState, adam_update
from .params import Param

__all__ = [
    "Adam",
    "AdamState",
    "AvgPool2d",
    "BUILDERS",
    "BasicConv2d",
    "BatchNorm2d",
    "Conv2d",
    "ConvCost",
    "ConvSpec",
    "DenseBlock",
    "DepthwiseSeparable",
    "FitConfig",
    "Flatten",
    "GlobalAvgPool",
    "Linear",
    "MaxPool2d",
    "Network",
    "NetworkSpec",
    "Param",
    "ReLU",
    "ResidualBlock",
    "Sequential",
    "SoftmaxCrossEntropy",
    "SoftmaxMSE",
    "Transition",
    "adam_update",
    "build_densenet121",
    "build_mobilenetv1",
    "build_resnet18",
    "build_small_cnn",
    "conv_cost",
    "gradient_check",
    "load_checkpoint",
    "one_hot",
    "save_checkpoint",
    "softmax",
    "trace_shapes",
    "train",
]
