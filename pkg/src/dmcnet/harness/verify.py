"""Self-verification suite: every analytic path checked against an
independent brute-force oracle.

Checks (one PASS/FAIL line each):

* trapezoidal AUC == O(n^2) pair-counting AUC on random instances
* SMO dual objective vs dense grid search on tiny random problems
* PCA components vs a dense library eigensolve, after sign normalization
* backprop vs central finite differences for every layer kind
* t-SNE analytic gradient vs finite differences of the KL objective
"""

from __future__ import annotations

import numpy as np

from ..dimred import pca_fit, tsne_affinities, tsne_kl, tsne_q
from ..dimred.tsne import _gradient as tsne_gradient
from ..metrics import auc_pair_count, roc_auc
from ..nn import Network, NetworkSpec, gradient_check
from ..svm import KernelSpec, TrainConfig, dual_grid_search, dual_objective, smo_train_binary
from ..svm.kernels import kernel_matrix

# (name, layers, loss, input shape, net seed, data seed) - seeds picked so the
# finite-difference sweep stays clear of ReLU/maxpool kinks at eps=1e-3.
GRADCHECK_CASES = (
    ("conv", [{"kind": "conv", "in": 2, "out": 2, "k": 3, "pad": 1}, {"kind": "flatten"}, {"kind": "linear", "in": 50, "out": 3}], "ce", (1, 2, 5, 5), 0, 1000),
    ("depthwise-conv", [{"kind": "conv", "in": 2, "out": 2, "k": 3, "pad": 1, "groups": 2}, {"kind": "flatten"}, {"kind": "linear", "in": 50, "out": 3}], "ce", (1, 2, 5, 5), 0, 1000),
    ("batchnorm", [{"kind": "conv", "in": 1, "out": 2, "k": 3}, {"kind": "bn", "ch": 2}, {"kind": "flatten"}, {"kind": "linear", "in": 18, "out": 3}], "ce", (2, 1, 5, 5), 0, 1000),
    ("maxpool", [{"kind": "maxpool", "k": 2, "stride": 2}, {"kind": "flatten"}, {"kind": "linear", "in": 8, "out": 3}], "ce", (2, 2, 4, 4), 0, 1000),
    ("avgpool", [{"kind": "avgpool", "k": 2}, {"kind": "flatten"}, {"kind": "linear", "in": 8, "out": 3}], "ce", (2, 2, 4, 4), 0, 1000),
    ("relu", [{"kind": "relu"}, {"kind": "flatten"}, {"kind": "linear", "in": 32, "out": 3}], "ce", (2, 2, 4, 4), 0, 1000),
    ("softmax-mse", [{"kind": "flatten"}, {"kind": "linear", "in": 8, "out": 3}], "mse", (2, 2, 2, 2), 0, 1000),
    ("softmax-ce", [{"kind": "flatten"}, {"kind": "linear", "in": 8, "out": 3}], "ce", (2, 2, 2, 2), 0, 1000),
    ("residual-block", [{"kind": "residual", "in": 3, "out": 3, "stride": 1}, {"kind": "gap"}, {"kind": "linear", "in": 3, "out": 3}], "ce", (1, 3, 5, 5), 4, 1004),
    ("residual-projection", [{"kind": "residual", "in": 2, "out": 4, "stride": 2}, {"kind": "gap"}, {"kind": "linear", "in": 4, "out": 3}], "ce", (1, 2, 6, 6), 2, 1002),
    ("dense-block", [{"kind": "dense_block", "in": 2, "layers": 2, "growth": 2}, {"kind": "gap"}, {"kind": "linear", "in": 6, "out": 3}], "ce", (1, 2, 5, 5), 1, 1001),
    ("depthwise-separable", [{"kind": "depthwise_sep", "in": 2, "out": 3, "stride": 1}, {"kind": "gap"}, {"kind": "linear", "in": 3, "out": 3}], "ce", (1, 2, 5, 5), 0, 1000),
)


def gradcheck_case(name: str) -> float:
    for case_name, layers, loss, shape, net_seed, data_seed in GRADCHECK_CASES:
        if case_name == name:
            spec = NetworkSpec(
                name=f"toy_{name}", layers=layers, loss=loss,
                in_channels=shape[1], input_size=shape[2],
            )
            net = Network(spec, seed=net_seed)
            rng = np.random.Generator(np.random.PCG64(data_seed))
            x = rng.normal(size=shape)
            y = rng.integers(0, 3, size=shape[0])
            return gradient_check(net, x, y)
    raise KeyError(name)


def check_auc(instances: int = 100, seed: int = 0):
    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(4, 201))
        scores = np.round(rng.normal(size=n), 2)  # rounding forces ties
        truth = rng.random(n) < rng.uniform(0.2, 0.8)
        if truth.all() or not truth.any():
            continue
        _, trap = roc_auc(scores, truth)
        worst = max(worst, abs(trap - auc_pair_count(scores, truth)))
    return worst < 1e-9, f"max |trapezoid - paircount| = {worst:.2e}"


def random_tiny_svm(rng):
    n = int(rng.integers(2, 7))
    while True:
        y = rng.choice([-1.0, 1.0], size=n)
        if np.any(y > 0) and np.any(y < 0):
            break
    X = rng.normal(size=(n, 2))
    C = float(rng.choice([0.5, 1.0, 10.0]))
    if rng.random() < 0.5:
        kernel = KernelSpec("linear")
    else:
        kernel = KernelSpec("rbf", gamma=float(rng.uniform(0.2, 2.0)))
    return X, y, C, kernel


def check_smo(instances: int = 20, seed: int = 0):
    """SMO must reach at least the grid-search value minus tolerance.

    The grid value never exceeds the true optimum (it maximizes over a
    finite feasible subset), so a converged SMO may legitimately end up
    above it; only a shortfall indicates an optimizer bug.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    for _ in range(instances):
        X, y, C, kernel = random_tiny_svm(rng)
        final = {}
        smo_train_binary(
            X, y, TrainConfig(C=C, tol=1e-5, max_passes=50, seed=int(rng.integers(2**31))),
            kernel, on_update=lambda a, b: final.__setitem__("alpha", a.copy()),
        )
        alpha = final.get("alpha", np.zeros(len(y)))
        K = kernel_matrix(kernel.resolve(X), X, X)
        smo_obj = dual_objective(K, y, alpha)
        grid_obj = dual_grid_search(K, y, C)
        worst = max(worst, grid_obj - smo_obj)
    return worst < 1e-3, f"max (grid - smo) = {worst:.2e} over {instances} problems"


def check_pca(instances: int = 10, seed: int = 0):
    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    for _ in range(instances):
        X = rng.normal(size=(10, 6))
        model = pca_fit(X, 4)
        cov = np.cov(X.T, ddof=1)
        w, v = np.linalg.eigh(cov)
        w, v = w[::-1], v[:, ::-1]
        idx = np.argmax(np.abs(v), axis=0)
        v = v * np.sign(v[idx, np.arange(v.shape[1])])
        worst = max(worst, float(np.abs(model.components - v[:, :4]).max()))
    return worst < 1e-8, f"max component deviation = {worst:.2e}"


def check_gradients():
    worst_name, worst = "", 0.0
    for case in GRADCHECK_CASES:
        err = gradcheck_case(case[0])
        if err > worst:
            worst_name, worst = case[0], err
    return worst < 1e-3, f"max rel err = {worst:.2e} ({worst_name})"


def check_tsne_gradient(seed: int = 0):
    rng = np.random.Generator(np.random.PCG64(seed))
    X = rng.normal(size=(6, 3))
    P = tsne_affinities(X, 3.0)
    Y = rng.normal(size=(6, 2))
    g = tsne_gradient(P, Y)
    num = np.zeros_like(Y)
    eps = 1e-6
    for i in range(Y.shape[0]):
        for d in range(Y.shape[1]):
            up, down = Y.copy(), Y.copy()
            up[i, d] += eps
            down[i, d] -= eps
            num[i, d] = (tsne_kl(P, tsne_q(up)) - tsne_kl(P, tsne_q(down))) / (2 * eps)
    rel = float(np.abs(g - num).max() / max(np.abs(num).max(), 1e-8))
    return rel < 1e-4, f"rel err = {rel:.2e}"


CHECKS = (
    ("auc-pair-counting", check_auc),
    ("smo-dual-grid", check_smo),
    ("pca-eigensolve", check_pca),
    ("gradient-checks", check_gradients),
    ("tsne-gradient", check_tsne_gradient),
)


def run_verify(out=print) -> bool:
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return all_ok
