import numpy as np
import pytest

from dmcnet.nn import (
    BUILDERS,
    ConvSpec,
    DenseBlock,
    FitConfig,
    Network,
    build_densenet121,
    build_mobilenetv1,
    build_resnet18,
    build_small_cnn,
    conv_cost,
    trace_shapes,
    train,
)


class TestConvCost:
    def test_hand_evaluated(self):
        c = conv_cost(ConvSpec(16, 32, 3), 10)
        assert c.standard == 460800
        assert c.depthwise == 14400
        assert c.separable_total == 14400 + 16 * 32 * 100

    def test_k1_identity(self):
        c = conv_cost(ConvSpec(8, 24, 1), 7)
        assert c.standard == c.depthwise * 24

    def test_separable_ratio_identity(self, rng):
        for _ in range(20):
            k = int(rng.integers(1, 8))
            m = int(rng.integers(1, 256))
            n = int(rng.integers(1, 256))
            f = int(rng.integers(1, 64))
            c = conv_cost(ConvSpec(m, n, k), f)
            assert c.separable_total / c.standard == pytest.approx(1 / n + 1 / k**2, rel=1e-12)

    def test_positive_dims_required(self):
        with pytest.raises(ValueError):
            conv_cost(ConvSpec(1, 1, 3), 0)


class TestSmallCnn:
    def test_flatten_dim_at_100(self):
        spec = build_small_cnn(100)
        # pooling chain 100 -> 50 -> 25 -> 12, 9 channels
        linear = spec.layers[-1]
        assert linear["in"] == 9 * 12 * 12 == 1296
        assert spec.loss == "mse"

    def test_forward_shapes(self, rng):
        net = Network(build_small_cnn(100), seed=0)
        x = rng.normal(size=(2, 1, 100, 100)).astype(np.float32)
        assert net.forward(x).shape == (2, 3)

    def test_softmax_probabilities(self, rng):
        net = Network(build_small_cnn(48), seed=0)
        p = net.predict_proba(rng.normal(size=(4, 1, 48, 48)).astype(np.float32))
        assert p.sum(axis=1) == pytest.approx(np.ones(4), abs=1e-6)

    def test_feature_tap_is_last_pool(self, rng):
        spec = build_small_cnn(100)
        net = Network(spec, seed=0)
        feats = net.features(rng.normal(size=(2, 1, 100, 100)).astype(np.float32))
        assert feats.shape == (2, 1296)

    def test_pool_halves_dimensions(self):
        shapes = trace_shapes(build_small_cnn(100))
        spatial = [s for s in shapes if len(s) == 3]
        assert [s[1] for s in spatial] == [100, 100, 50, 50, 50, 25, 25, 25, 12]


class TestResnet18:
    def test_logits_shape_batch16(self, rng):
        net = Network(build_resnet18(100), seed=0)
        x = rng.normal(size=(16, 1, 100, 100)).astype(np.float32)
        assert net.forward(x, train=True).shape == (16, 3)

    def test_spatial_trace(self):
        shapes = trace_shapes(build_resnet18(100))
        resblock_shapes = [s for s in shapes if len(s) == 3][1:]  # skip stem convs
        heights = [s[1] for s in resblock_shapes]
        assert heights == [100, 100, 100, 100, 50, 50, 25, 25, 13, 13]

    def test_block_table(self):
        spec = build_resnet18()
        blocks = [r for r in spec.layers if r["kind"] == "residual"]
        assert [(b["in"], b["out"], b["stride"]) for b in blocks] == [
            (64, 64, 1), (64, 64, 1), (64, 128, 2), (128, 128, 1),
            (128, 256, 2), (256, 256, 1), (256, 512, 2), (512, 512, 1),
        ]

    def test_layer_count_is_18(self):
        assert build_resnet18().conv_layer_count() == 18


class TestMobilenet:
    def test_logits_shape_batch16(self, rng):
        net = Network(build_mobilenetv1(100), seed=0)
        x = rng.normal(size=(16, 1, 100, 100)).astype(np.float32)
        assert net.forward(x, train=True).shape == (16, 3)

    def test_channel_trace(self):
        spec = build_mobilenetv1()
        rows = [r for r in spec.layers if r["kind"] == "depthwise_sep"]
        trace = [r["in"] for r in rows] + [rows[-1]["out"]]
        assert trace == [32, 64, 128, 128, 256, 256, 512, 512, 512, 512, 512, 512, 1024, 1024]

    def test_five_repeats_of_512(self):
        spec = build_mobilenetv1()
        n512 = sum(
            1 for r in spec.layers
            if r["kind"] == "depthwise_sep" and r["in"] == 512 and r["out"] == 512
        )
        assert n512 == 5

    def test_depthwise_groups_structural(self):
        net = Network(build_mobilenetv1(100), seed=0)
        from dmcnet.nn import DepthwiseSeparable

        blocks = [l for l in net.layers if isinstance(l, DepthwiseSeparable)]
        assert len(blocks) == 13
        for b in blocks:
            assert b.depthwise.groups == b.depthwise.in_ch
            assert b.pointwise.k == 1

    def test_avgpool_4x4_tail(self):
        spec = build_mobilenetv1(100)
        kinds = [r["kind"] for r in spec.layers]
        assert kinds[-3:] == ["avgpool", "flatten", "linear"]
        assert spec.layers[-3]["k"] == 4
        # 13 -> 3 under a 4x4 stride-4 window; head is 1024 * 3 * 3
        assert spec.layers[-1]["in"] == 1024 * 3 * 3


class TestDensenet:
    def test_layer_count_is_121(self):
        assert build_densenet121().conv_layer_count() == 121

    def test_logits_shape(self, rng):
        net = Network(build_densenet121(100), seed=0)
        x = rng.normal(size=(4, 1, 100, 100)).astype(np.float32)
        assert net.forward(x, train=True).shape == (4, 3)

    def test_block_channel_arithmetic(self):
        spec = build_densenet121()
        blocks = [r for r in spec.layers if r["kind"] == "dense_block"]
        assert [b["layers"] for b in blocks] == [6, 12, 24, 16]
        assert [b["in"] for b in blocks] == [64, 128, 256, 512]
        assert all(b["growth"] == 32 for b in blocks)


class TestShapeChaining:
    @pytest.mark.parametrize("name", ["small_cnn", "resnet18", "mobilenetv1", "densenet121"])
    def test_batch_one_and_sixteen_chain(self, rng, name):
        net = Network(BUILDERS[name](input_size=100), seed=0)
        one = rng.normal(size=(1, 1, 100, 100)).astype(np.float32)
        assert net.forward(one, train=False).shape == (1, 3)
        # batch 16 at full resolution is covered by the acceptance suite for
        # the deep builders; repeat it cheaply here for the small net only
        if name == "small_cnn":
            sixteen = rng.normal(size=(16, 1, 100, 100)).astype(np.float32)
            assert net.forward(sixteen, train=True).shape == (16, 3)


class TestDenseBlockSemantics:
    def test_channel_count_rule(self, rng):
        block = DenseBlock(16, 5, 12, rng=rng)
        x = rng.normal(size=(1, 16, 8, 8))
        assert block.forward(x, train=True).shape[1] == 16 + 5 * 12 == 76

    def test_single_layer_zero_conv_concats_zeros(self, rng):
        block = DenseBlock(4, 1, 3, rng=rng)
        for p in block.parameters():
            if p.role == "weight":
                p.data[:] = 0
        x = rng.normal(size=(1, 4, 6, 6))
        out = block.forward(x, train=False)
        assert np.array_equal(out[:, :4], x)
        assert np.abs(out[:, 4:]).max() == 0.0

    def test_zeroing_early_output_propagates(self, rng):
        # connectivity: layer 1's output feeds every later layer
        block = DenseBlock(4, 3, 2, rng=rng)
        x = rng.normal(size=(1, 4, 6, 6))
        base = block.forward(x, train=False)

        original = block.layers[0].forward

        def zeroed(inp, train=True):
            return np.zeros_like(original(inp, train))

        block.layers[0].forward = zeroed
        ablated = block.forward(x, train=False)
        # all later layers' outputs change, not just the zeroed slice
        for layer_idx in (2, 3):
            lo = 4 + layer_idx * 2 - 2
            hi = lo + 2
            assert np.abs(ablated[:, lo:hi] - base[:, lo:hi]).max() > 1e-8


class TestOverfitProbes:
    @pytest.mark.parametrize("builder", ["small_cnn"])
    def test_small_cnn_memorizes(self, rng, builder):
        x = rng.normal(size=(10, 1, 48, 48)).astype(np.float32)
        y = rng.integers(0, 3, size=10)
        net = Network(BUILDERS[builder](input_size=48), seed=0)
        cfg = FitConfig(epochs=200, batch=10, lr=1e-3, seed=0, stop_at_train_accuracy=1.0)
        net, history = train(net, x, y, cfg)
        assert (net.predict(x) == y).mean() == 1.0
        assert len(history) <= 200
