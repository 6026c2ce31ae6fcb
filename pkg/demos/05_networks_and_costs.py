"""The four classifier architectures and the separable-convolution cost model.

Builders are declarative (JSON-able layer records), so shapes, channel
traces, and layer counts can be inspected without instantiating weights;
the cost table shows why depthwise separable stages are cheap.
"""

import numpy as np

from dmcnet.nn import (
    BUILDERS,
    ConvSpec,
    Network,
    build_densenet121,
    build_mobilenetv1,
    build_resnet18,
    conv_cost,
    trace_shapes,
)

for name, build in BUILDERS.items():
    spec = build(input_size=100)
    print(f"{name:12s} countable conv/linear layers: {spec.conv_layer_count():3d}, "
          f"loss={spec.loss}")

print("\nresidual-stack spatial trace at 100px:",
      [s[1] for s in trace_shapes(build_resnet18(100)) if len(s) == 3])

mob = build_mobilenetv1(100)
dw = [(r["in"], r["out"], r["stride"]) for r in mob.layers if r["kind"] == "depthwise_sep"]
print("depthwise rows (in, out, stride):", dw)

dense = build_densenet121(100)
blocks = [(r["in"], r["layers"], r["growth"]) for r in dense.layers if r["kind"] == "dense_block"]
print("dense blocks (in, layers, growth):", blocks)

# Forward pass at batch 2 to confirm the head shapes.
rng = np.random.default_rng(0)
x = rng.normal(size=(2, 1, 100, 100)).astype(np.float32)
for name in ("small_cnn", "resnet18", "mobilenetv1", "densenet121"):
    net = Network(BUILDERS[name](input_size=100), seed=0)
    print(f"{name:12s} forward (2,1,100,100) -> {net.forward(x, train=True).shape}")

# Cost model: standard vs depthwise vs full separable, 3x3 kernels.
print(f"\n{'M':>5} {'N':>5} {'D_F':>4} {'standard':>12} {'depthwise':>10} "
      f"{'separable':>10} {'ratio':>7}")
for m, n, f in ((16, 32, 10), (64, 128, 50), (512, 512, 12)):
    c = conv_cost(ConvSpec(m, n, 3), f)
    print(f"{m:5d} {n:5d} {f:4d} {c.standard:12,d} {c.depthwise:10,d} "
          f"{c.separable_total:10,d} {c.separable_total / c.standard:7.4f}")
print("ratio converges to 1/N + 1/9 for 3x3 kernels")
