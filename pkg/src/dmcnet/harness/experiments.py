"""Repeated seeded experiments and their aggregate statistics.

The k-th run uses seed base_seed + k; each run re-draws its own balanced
sample and split, so repeats measure sampling variance as well as model
variance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dataset import DatasetManifest
from .methods import ImageStore, RunResult, run_method

# Run counts used when none are given: the small CNN protocol averages 20
# experiments, everything else uses the 10-run boxplot protocol.
DEFAULT_REPEATS = {"cnn": 20}
DEFAULT_REPEATS_OTHER = 10


def default_repeats(method: str) -> int:
    return DEFAULT_REPEATS.get(method, DEFAULT_REPEATS_OTHER)


@dataclass
class ExperimentConfig:
    method: str
    repeats: int = 1
    base_seed: int = 0
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")

    def seed_for(self, k: int) -> int:
        return self.base_seed + k


@dataclass
class MethodSummary:
    method: str
    base_seed: int
    runs: list  # RunResult per repeat, ordered by run index
    dataset_checksum: str

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([r.report.accuracy for r in self.runs])

    @property
    def mean(self) -> float:
        return float(self.accuracies.mean())

    @property
    def std(self) -> float:
        return float(self.accuracies.std())

    @property
    def min(self) -> float:
        return float(self.accuracies.min())

    @property
    def max(self) -> float:
        return float(self.accuracies.max())


def repeat_experiments(
    cfg: ExperimentConfig,
    manifest: DatasetManifest,
    store: ImageStore | None = None,
) -> MethodSummary:
    store = store or ImageStore(manifest)
    runs: list[RunResult] = []
    for k in range(cfg.repeats):
        runs.append(
            run_method(cfg.method, cfg.seed_for(k), manifest, store, cfg.overrides)
        )
    return MethodSummary(
        method=cfg.method,
        base_seed=cfg.base_seed,
        runs=runs,
        dataset_checksum=manifest.checksum,
    )
