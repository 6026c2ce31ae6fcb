"""End-to-end benchmark orchestration: methods, repeats, reports."""

from .experiments import ExperimentConfig, MethodSummary, repeat_experiments
from .methods import METHOD_IDS, ImageStore, RunResult, run_method
from .report import emit_report, write_embedding_csv

__all__ = [
    "ExperimentConfig",
    "ImageStore",
    "METHOD_IDS",
    "MethodSummary",
    "RunResult",
    "emit_report",
    "repeat_experiments",
    "run_method",
    "write_embedding_csv",
]
