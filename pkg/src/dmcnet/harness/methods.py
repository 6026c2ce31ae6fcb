"""Single-run execution of each benchmark method.

Every run follows the same protocol: draw a balanced per-class sample from
the manifest with the run's seed, split it 80/20 stratified, fit the
method's pipeline on the training side only, and score the held-out side.
Train/test path disjointness is asserted on every run.

Method pipelines:

* ``cnn``            - grayscale tensors into the small 3-6-9 conv net (MSE head)
* ``hog_svm``        - HOG vectors into the one-vs-rest RBF SVM
* ``hog_cnn``        - HOG concatenated with the small CNN's last-pooling
                       features, into a fresh linear+softmax head (CNN frozen)
* ``hog_sift_svm``   - HOG plus a zero-padded 10x128 keypoint-descriptor block
* ``surf_svm``       - zero-padded 10x64 blob-descriptor block into the SVM
* ``densenet121`` / ``resnet18`` / ``mobilenetv1``
                     - grayscale tensors into the deep builders (CE loss)
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..dataset import (
    DatasetManifest,
    GrayImage,
    SplitConfig,
    balanced_sample,
    load_image,
    preprocess,
    split,
)
from ..errors import UnknownMethod
from ..features import (
    hog_extract,
    sift_describe,
    sift_keypoints,
    surf_describe,
    surf_keypoints,
)
from ..features.fusion import concat_features, pack_keypoint_block
from ..metrics import MetricReport, evaluate_method
from ..nn import FitConfig, Network, NetworkSpec, build_small_cnn, BUILDERS, train
from ..svm import KernelSpec, TrainConfig, ovr_train

METHOD_IDS = (
    "cnn",
    "hog_svm",
    "hog_cnn",
    "hog_sift_svm",
    "surf_svm",
    "densenet121",
    "resnet18",
    "mobilenetv1",
)

SIFT_KEYPOINTS = 10
SIFT_DIM = 128
SURF_KEYPOINTS = 10
SURF_DIM = 64


@dataclass
class RunResult:
    seed: int
    report: MetricReport
    wall_seconds: float
    loss_history: list | None = None


class ImageStore:
    """Decode + preprocess cache keyed by (path, size); shared across runs."""

    def __init__(self, manifest: DatasetManifest):
        self.manifest = manifest
        self._gray: dict = {}
        self._rgb: dict = {}

    def gray(self, rel_path: str, size: int = 100) -> GrayImage:
        key = (rel_path, size)
        if key not in self._gray:
            rgb, gray = preprocess(load_image(self.manifest.abspath(rel_path)), size)
            self._gray[key] = gray
            self._rgb[key] = rgb
        return self._gray[key]

    def rgb(self, rel_path: str, size: int = 100):
        key = (rel_path, size)
        if key not in self._rgb:
            self.gray(rel_path, size)
        return self._rgb[key]

    def gray_tensor(self, paths, size: int = 100) -> np.ndarray:
        """(N, 1, size, size) float32 tensor scaled to [0, 1]."""
        out = np.stack([self.gray(p, size).pixels for p in paths])
        return (out[:, None, :, :] / 255.0).astype(np.float32)

    def flat_rgb(self, paths, size: int = 100) -> np.ndarray:
        """(N, size*size*3) float64 matrix of raw channel intensities."""
        return np.stack(
            [self.rgb(p, size).pixels.reshape(-1).astype(np.float64) for p in paths]
        )

    def flat_gray(self, paths, size: int = 100) -> np.ndarray:
        return np.stack([self.gray(p, size).pixels.reshape(-1) for p in paths])


@dataclass
class _Overrides:
    """Per-run hyperparameter knobs with method-appropriate defaults."""

    raw: dict = field(default_factory=dict)

    def get(self, key, default):
        return self.raw.get(key, default)


def _hog_matrix(store, paths, size):
    return np.stack([hog_extract(store.gray(p, size)).values for p in paths])


def _sift_matrix(store, paths, size):
    rows = []
    for p in paths:
        gray = store.gray(p, size)
        kps = sift_keypoints(gray, SIFT_KEYPOINTS)
        descs = [sift_describe(gray, kp) for kp in kps]
        rows.append(pack_keypoint_block(descs, SIFT_KEYPOINTS, SIFT_DIM))
    return np.stack(rows)


def _surf_matrix(store, paths, size):
    rows = []
    for p in paths:
        gray = store.gray(p, size)
        kps = surf_keypoints(gray, SURF_KEYPOINTS)
        descs = [surf_describe(gray, kp) for kp in kps]
        rows.append(pack_keypoint_block(descs, SURF_KEYPOINTS, SURF_DIM))
    return np.stack(rows)


def _svm_run(X_train, y_train, X_test, ov, seed):
    cfg = TrainConfig(
        C=ov.get("C", 1.0),
        tol=ov.get("tol", 1e-3),
        max_passes=ov.get("max_passes", 10),
        seed=seed,
    )
    kernel = KernelSpec(kind=ov.get("kernel", "rbf"), gamma=ov.get("gamma", None))
    clf = ovr_train(X_train, y_train, cfg, kernel)
    scores = clf.decision_matrix(X_test)
    return scores, np.argmax(scores, axis=1), None


def _train_small_cnn(store, train_paths, y_train, ov, seed, size):
    x = store.gray_tensor(train_paths, size)
    net = Network(build_small_cnn(input_size=size), seed=seed)
    cfg = FitConfig(
        epochs=ov.get("epochs", 10),
        batch=ov.get("batch", 16),
        lr=ov.get("lr", 1e-4),
        seed=seed,
    )
    net, history = train(net, x, y_train, cfg)
    return net, history


def _nn_run(builder_name, store, train_paths, y_train, test_paths, ov, seed, size):
    x_train = store.gray_tensor(train_paths, size)
    net = Network(BUILDERS[builder_name](input_size=size), seed=seed)
    default_lr = 1e-4 if builder_name == "small_cnn" else 1e-5
    cfg = FitConfig(
        epochs=ov.get("epochs", 10),
        batch=ov.get("batch", 16),
        lr=ov.get("lr", default_lr),
        seed=seed,
    )
    net, history = train(net, x_train, y_train, cfg)
    scores = net.predict_proba(store.gray_tensor(test_paths, size))
    return scores, np.argmax(scores, axis=1), history


def _fusion_head_run(feat_train, y_train, feat_test, ov, seed):
    """Standardize fused features and train a linear+softmax head (MSE)."""
    mean = feat_train.mean(axis=0)
    std = feat_train.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    z_train = ((feat_train - mean) / std).astype(np.float32)
    z_test = ((feat_test - mean) / std).astype(np.float32)
    spec = NetworkSpec(
        name="fusion_head",
        layers=[{"kind": "linear", "in": z_train.shape[1], "out": 3}],
        loss="mse",
        in_channels=0,
        input_size=0,
    )
    head = Network(spec, seed=seed)
    cfg = FitConfig(
        epochs=ov.get("head_epochs", 10),
        batch=ov.get("batch", 16),
        lr=ov.get("head_lr", 1e-4),
        seed=seed,
    )
    head, history = train(head, z_train, y_train, cfg)
    scores = head.predict_proba(z_test)
    return scores, np.argmax(scores, axis=1), history


def run_method(
    method: str,
    seed: int,
    manifest: DatasetManifest,
    store: ImageStore | None = None,
    overrides: dict | None = None,
) -> RunResult:
    if method not in METHOD_IDS:
        raise UnknownMethod(f"{method!r} is not one of {METHOD_IDS}")
    ov = _Overrides(overrides or {})
    store = store or ImageStore(manifest)
    size = ov.get("input_size", 100)
    t0 = time.perf_counter()

    balanced = balanced_sample(manifest, seed, ov.get("balance_count", None))
    cfg = SplitConfig(train_fraction=ov.get("train_fraction", 0.8), seed=seed)
    train_set, test_set = split(balanced, cfg)
    train_paths, y_train = train_set.paths(), train_set.labels()
    test_paths, y_test = test_set.paths(), test_set.labels()
    overlap = set(train_paths) & set(test_paths)
    if overlap:
        raise AssertionError(f"train/test leak: {sorted(overlap)[:3]}")

    history = None
    if method == "cnn":
        net, history = _train_small_cnn(store, train_paths, y_train, ov, seed, size)
        scores = net.predict_proba(store.gray_tensor(test_paths, size))
        y_pred = np.argmax(scores, axis=1)
    elif method == "hog_svm":
        scores, y_pred, _ = _svm_run(
            _hog_matrix(store, train_paths, size),
            y_train,
            _hog_matrix(store, test_paths, size),
            ov,
            seed,
        )
    elif method == "hog_cnn":
        net, cnn_history = _train_small_cnn(store, train_paths, y_train, ov, seed, size)
        feat_train = np.concatenate(
            [
                _hog_matrix(store, train_paths, size),
                net.features(store.gray_tensor(train_paths, size)),
            ],
            axis=1,
        )
        feat_test = np.concatenate(
            [
                _hog_matrix(store, test_paths, size),
                net.features(store.gray_tensor(test_paths, size)),
            ],
            axis=1,
        )
        scores, y_pred, head_history = _fusion_head_run(
            feat_train, y_train, feat_test, ov, seed
        )
        history = cnn_history + head_history
    elif method == "hog_sift_svm":
        hog_tr = _hog_matrix(store, train_paths, size)
        hog_te = _hog_matrix(store, test_paths, size)
        sift_tr = _sift_matrix(store, train_paths, size)
        sift_te = _sift_matrix(store, test_paths, size)
        dims = [hog_tr.shape[1], SIFT_KEYPOINTS * SIFT_DIM]

        def fuse(hog_rows, sift_rows):
            return np.stack(
                [concat_features([h, s], dims) for h, s in zip(hog_rows, sift_rows)]
            )

        scores, y_pred, _ = _svm_run(
            fuse(hog_tr, sift_tr), y_train, fuse(hog_te, sift_te), ov, seed
        )
    elif method == "surf_svm":
        scores, y_pred, _ = _svm_run(
            _surf_matrix(store, train_paths, size),
            y_train,
            _surf_matrix(store, test_paths, size),
            ov,
            seed,
        )
    else:  # densenet121 | resnet18 | mobilenetv1
        scores, y_pred, history = _nn_run(
            method, store, train_paths, y_train, test_paths, ov, seed, size
        )

    report = evaluate_method(y_test, scores, y_pred, method=method)
    return RunResult(
        seed=seed,
        report=report,
        wall_seconds=time.perf_counter() - t0,
        loss_history=history,
    )
