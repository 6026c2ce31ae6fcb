"""Soft-margin SVMs trained by sequential minimal optimization."""

from .kernels import KernelSpec, kernel_matrix, kernel_vector
from .smo import SvmModel, TrainConfig, decision, dual_objective, smo_train_binary
from .ovr import OvrClassifier, Standardizer, ovr_predict, ovr_train
from .oracle import dual_grid_search

__all__ = [
    "KernelSpec",
    "OvrClassifier",
    "Standardizer",
    "SvmModel",
    "TrainConfig",
    "decision",
    "dual_grid_search",
    "dual_objective",
    "kernel_matrix",
    "kernel_vector",
    "ovr_predict",
    "ovr_train",
    "smo_train_binary",
]
