"""One-vs-rest composition of binary SVMs over the three engagement classes.

Features are standardized (zero mean, unit variance per dimension, training
statistics) before any kernel sees them; raw descriptor scales differ by
orders of magnitude between HOG magnitudes and keypoint histograms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import IoFailure, MissingClass
from .kernels import KernelSpec
from .smo import SvmModel, TrainConfig, decision_batch, smo_train_binary

N_CLASSES = 3


@dataclass
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        std = X.std(axis=0)
        std = np.where(std > 0, std, 1.0)  # constant dims pass through
        return cls(mean=X.mean(axis=0), std=std)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.std


@dataclass
class OvrClassifier:
    models: list  # one SvmModel per class, index = class id
    standardizer: Standardizer

    def decision_matrix(self, X: np.ndarray) -> np.ndarray:
        """(n_samples, 3) signed margins, one column per class."""
        Z = self.standardizer.transform(np.atleast_2d(X))
        return np.stack([decision_batch(m, Z) for m in self.models], axis=1)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Argmax of per-class margins; exact ties go to the lower class id."""
        return np.argmax(self.decision_matrix(X), axis=1)

    def to_json(self) -> dict:
        return {
            "models": [m.to_json() for m in self.models],
            "standardizer": {
                "mean": self.standardizer.mean.tolist(),
                "std": self.standardizer.std.tolist(),
            },
        }

    def save(self, path) -> None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(self.to_json(), fh)
        except OSError as exc:
            raise IoFailure(f"cannot write model {path}: {exc}") from exc

    @classmethod
    def from_json(cls, obj: dict) -> "OvrClassifier":
        std = Standardizer(
            mean=np.array(obj["standardizer"]["mean"], dtype=np.float64),
            std=np.array(obj["standardizer"]["std"], dtype=np.float64),
        )
        return cls(models=[SvmModel.from_json(m) for m in obj["models"]], standardizer=std)

    @classmethod
    def load(cls, path) -> "OvrClassifier":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return cls.from_json(json.load(fh))
        except OSError as exc:
            raise IoFailure(f"cannot read model {path}: {exc}") from exc


def ovr_train(
    X: np.ndarray,
    y: np.ndarray,
    cfg: TrainConfig | None = None,
    kernel: KernelSpec | None = None,
) -> OvrClassifier:
    """Train one binary machine per class (class c vs rest)."""
    cfg = cfg or TrainConfig()
    kernel = kernel or KernelSpec()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    present = set(y.tolist())
    missing = [c for c in range(N_CLASSES) if c not in present]
    if missing:
        raise MissingClass(f"training labels missing classes {missing}")
    standardizer = Standardizer.fit(X)
    Z = standardizer.transform(X)
    resolved = kernel.resolve(Z)
    models = []
    for c in range(N_CLASSES):
        yc = np.where(y == c, 1.0, -1.0)
        sub_cfg = TrainConfig(
            C=cfg.C, tol=cfg.tol, max_passes=cfg.max_passes, seed=cfg.seed + c
        )
        models.append(smo_train_binary(Z, yc, sub_cfg, resolved))
    return OvrClassifier(models=models, standardizer=standardizer)


def ovr_predict(classifier: OvrClassifier, X: np.ndarray) -> np.ndarray:
    return classifier.predict(X)
