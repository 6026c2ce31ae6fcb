import numpy as np
import pytest

from dmcnet import errors
from dmcnet.nn import (
    Adam,
    AdamState,
    BatchNorm2d,
    Conv2d,
    DepthwiseSeparable,
    Network,
    NetworkSpec,
    Param,
    adam_update,
    gradient_check,
    load_checkpoint,
    one_hot,
    save_checkpoint,
    softmax,
)
from dmcnet.harness.verify import GRADCHECK_CASES, gradcheck_case
from dmcnet.nn.losses import SoftmaxCrossEntropy, SoftmaxMSE


class TestConvForward:
    def test_identity_kernel(self, rng):
        conv = Conv2d(1, 1, 3, pad=1, rng=rng)
        conv.weight.data[:] = 0
        conv.weight.data[0, 0, 1, 1] = 1
        conv.bias.data[:] = 0
        x = rng.normal(size=(1, 1, 3, 3))
        assert np.abs(conv.forward(x) - x).max() < 1e-12

    def test_stem_shape(self, rng):
        conv = Conv2d(1, 64, 3, stride=1, pad=1, rng=rng)
        x = rng.normal(size=(16, 1, 100, 100)).astype(np.float32)
        assert conv.forward(x).shape == (16, 64, 100, 100)

    def test_output_size_formula(self, rng):
        conv = Conv2d(1, 2, 3, stride=2, pad=1, rng=rng)
        x = rng.normal(size=(1, 1, 25, 25))
        assert conv.forward(x).shape == (1, 2, 13, 13)

    def test_channel_mismatch(self, rng):
        conv = Conv2d(3, 4, 3, rng=rng)
        with pytest.raises(errors.ShapeMismatch):
            conv.forward(rng.normal(size=(1, 2, 8, 8)))

    def test_groups_must_divide(self):
        with pytest.raises(errors.ShapeMismatch):
            Conv2d(3, 4, 3, groups=2)


class TestGradientChecks:
    @pytest.mark.parametrize("name", [case[0] for case in GRADCHECK_CASES])
    def test_layer_kind(self, name):
        assert gradcheck_case(name) < 1e-3

    def test_linear_only_is_tight(self, rng):
        spec = NetworkSpec(
            name="lin", layers=[{"kind": "flatten"}, {"kind": "linear", "in": 8, "out": 3}],
            loss="ce", in_channels=2, input_size=2,
        )
        net = Network(spec, seed=0)
        x = rng.normal(size=(2, 2, 2, 2))
        y = rng.integers(0, 3, size=2)
        assert gradient_check(net, x, y) < 1e-6

    def test_corrupted_backward_is_caught(self, rng):
        # class-level fault so the corruption survives gradient_check's clone
        class BrokenConv(Conv2d):
            def backward(self, dy):
                dx = super().backward(dy)
                self.weight.grad *= 2.0
                return dx

        spec = NetworkSpec(
            name="toy",
            layers=[{"kind": "conv", "in": 1, "out": 2, "k": 3}, {"kind": "flatten"},
                    {"kind": "linear", "in": 2 * 36, "out": 3}],
            loss="ce", in_channels=1, input_size=8,
        )
        net = Network(spec, seed=0)
        good = net.layers[0]
        broken = BrokenConv(1, 2, 3, rng=rng)
        broken.weight.data = good.weight.data.copy()
        broken.bias.data = good.bias.data.copy()
        net.layers[0] = broken
        x = rng.normal(size=(1, 1, 8, 8))
        y = rng.integers(0, 3, size=1)
        assert gradient_check(net, x, y) > 0.3

    def test_parameter_budget_enforced(self, rng):
        spec = NetworkSpec(
            name="big", layers=[{"kind": "flatten"}, {"kind": "linear", "in": 10000, "out": 10}],
            loss="ce", in_channels=1, input_size=100,
        )
        net = Network(spec, seed=0)
        with pytest.raises(ValueError):
            gradient_check(net, rng.normal(size=(1, 1, 100, 100)), [0])


class TestBatchNorm:
    def test_eval_passthrough_identity(self, rng):
        bn = BatchNorm2d(3)
        x = rng.normal(size=(2, 3, 4, 4))
        assert np.abs(bn.forward(x, train=False) - x).max() < 1e-6

    def test_train_normalizes(self, rng):
        bn = BatchNorm2d(2)
        x = rng.normal(5.0, 3.0, size=(8, 2, 6, 6))
        y = bn.forward(x, train=True)
        assert y.mean(axis=(0, 2, 3)) == pytest.approx(np.zeros(2), abs=1e-9)
        assert y.var(axis=(0, 2, 3)) == pytest.approx(np.ones(2), rel=1e-3)

    def test_running_stats_updated(self, rng):
        bn = BatchNorm2d(1, momentum=0.9)
        x = rng.normal(4.0, 1.0, size=(16, 1, 8, 8))
        bn.forward(x, train=True)
        assert bn.running_mean[0] == pytest.approx(0.9 * 0.0 + 0.1 * x.mean(), rel=1e-5)


class TestLosses:
    def test_softmax_rows_sum_to_one(self, rng):
        p = softmax(rng.normal(size=(20, 3)) * 10)
        assert p.sum(axis=1) == pytest.approx(np.ones(20), abs=1e-9)

    def test_losses_zero_only_on_exact_match(self):
        logits = np.array([[100.0, -100.0, -100.0]])
        targets = one_hot([0])
        for loss in (SoftmaxMSE(), SoftmaxCrossEntropy()):
            value, _ = loss.forward_backward(logits, targets)
            assert value == pytest.approx(0.0, abs=1e-12)
            wrong, _ = loss.forward_backward(logits, one_hot([1]))
            assert wrong > 0.1

    def test_loss_nonnegative(self, rng):
        logits = rng.normal(size=(10, 3))
        targets = one_hot(rng.integers(0, 3, 10))
        for loss in (SoftmaxMSE(), SoftmaxCrossEntropy()):
            assert loss.forward_backward(logits, targets)[0] >= 0.0


class TestAdam:
    def test_zero_gradient_keeps_params(self):
        p = np.array([1.0, 2.0])
        state = AdamState(p.shape, p.dtype)
        adam_update(state, p, np.zeros(2), lr=0.1, step=1)
        assert np.array_equal(p, [1.0, 2.0])

    def test_moments_decay_on_zero_grad(self):
        state = AdamState((1,), np.float64)
        state.m[:] = 1.0
        state.v[:] = 1.0
        p = np.array([0.0])
        adam_update(state, p, np.zeros(1), lr=0.0, step=1)
        assert state.m[0] == pytest.approx(0.9)
        assert state.v[0] == pytest.approx(0.999)

    def test_first_step_is_lr_times_sign(self):
        lr = 0.05
        for g in (3.0, -0.7, 123.0):
            p = np.array([0.0])
            state = AdamState((1,), np.float64)
            adam_update(state, p, np.array([g]), lr=lr, step=1)
            assert p[0] == pytest.approx(-lr * np.sign(g), abs=lr * 1e-6)

    def test_shape_mismatch(self):
        state = AdamState((2,), np.float64)
        with pytest.raises(errors.ShapeMismatch):
            adam_update(state, np.zeros(3), np.zeros(3), lr=0.1, step=1)

    def test_optimizer_moves_toward_minimum(self):
        p = Param(np.array([5.0]))
        opt = Adam([p], lr=0.5)
        for _ in range(200):
            opt.zero_grad()
            p.grad[:] = 2 * p.data  # d/dx of x^2
            opt.step()
        assert abs(p.data[0]) < 0.05


class TestDepthwiseSeparable:
    def test_zero_pointwise_gives_zero_output(self, rng):
        block = DepthwiseSeparable(4, 8, rng=rng)
        block.pointwise.weight.data[:] = 0
        x = rng.normal(size=(2, 4, 6, 6))
        assert np.abs(block.forward(x, train=True)).max() == 0.0

    def test_single_channel_equals_rank1_standard_conv(self, rng):
        # with one input channel the conv stages compose to an ordinary
        # convolution whose per-output-kernels are p_c * w
        block = DepthwiseSeparable(1, 5, rng=rng)
        x = rng.normal(size=(2, 1, 7, 7))
        dw_out = block.depthwise.forward(x)
        composed = block.pointwise.forward(dw_out)

        std = Conv2d(1, 5, 3, pad=1, bias=False, rng=rng)
        w = block.depthwise.weight.data[0, 0].astype(np.float64)
        p = block.pointwise.weight.data[:, 0, 0, 0].astype(np.float64)
        std.weight.data = (p[:, None, None, None] * w[None, None]).astype(np.float64)
        assert np.abs(std.forward(x) - composed).max() < 1e-9

    def test_depthwise_stage_uses_groups(self):
        block = DepthwiseSeparable(16, 32)
        assert block.depthwise.groups == 16
        assert block.pointwise.k == 1


class TestCheckpoint:
    def build(self, seed=3):
        spec = NetworkSpec(
            name="ck",
            layers=[
                {"kind": "conv", "in": 1, "out": 2, "k": 3, "pad": 1},
                {"kind": "bn", "ch": 2},
                {"kind": "relu"},
                {"kind": "maxpool", "k": 2, "stride": 2},
                {"kind": "flatten"},
                {"kind": "linear", "in": 2 * 16, "out": 3},
            ],
            loss="mse", in_channels=1, input_size=8,
        )
        return Network(spec, seed=seed)

    def test_roundtrip_bit_exact(self, tmp_path, rng):
        net = self.build()
        x = rng.normal(size=(4, 1, 8, 8)).astype(np.float32)
        net.forward(x, train=True)  # move BN running stats off their init
        p = tmp_path / "net.dmcn"
        save_checkpoint(p, net)
        loaded = load_checkpoint(p)
        for la, lb in zip(net.layers, loaded.layers):
            for a, b in zip(la.state_arrays(), lb.state_arrays()):
                assert np.array_equal(a, b)
        assert np.array_equal(net.predict(x), loaded.predict(x))
        assert np.array_equal(
            net.forward(x, train=False), loaded.forward(x, train=False)
        )

    def test_magic_and_version_checked(self, tmp_path):
        p = tmp_path / "bad.dmcn"
        p.write_bytes(b"NOPE" + bytes(10))
        with pytest.raises(errors.BadCheckpoint):
            load_checkpoint(p)

    def test_truncated_payload(self, tmp_path):
        net = self.build()
        p = tmp_path / "net.dmcn"
        save_checkpoint(p, net)
        blob = p.read_bytes()
        p.write_bytes(blob[:-8])
        with pytest.raises(errors.BadCheckpoint):
            load_checkpoint(p)


class TestZeroWeightNetworks:
    def test_logits_equal_final_bias(self, rng):
        from dmcnet.nn import build_resnet18

        net = Network(build_resnet18(input_size=32), seed=0)
        for p in net.parameters():
            if p.role == "weight":
                p.data[:] = 0
        final_bias = net.layers[-1].bias.data.copy()
        x = rng.normal(size=(2, 1, 32, 32)).astype(np.float32)
        logits = net.forward(x, train=False)
        assert logits == pytest.approx(np.tile(final_bias, (2, 1)), abs=1e-6)

    def test_residual_shortcut_dominates(self, rng):
        from dmcnet.nn import ResidualBlock

        block = ResidualBlock(3, 3, stride=1, rng=rng)
        for p in block.parameters():
            if p.role == "weight":
                p.data[:] = 0
        x = rng.normal(size=(1, 3, 6, 6))
        out = block.forward(x, train=False)
        assert np.abs(out - np.maximum(x, 0)).max() < 1e-6
