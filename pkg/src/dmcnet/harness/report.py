"""Deterministic report emission: JSON, per-class CSV, boxplot CSV.

Emitted bytes are a pure function of the summaries: keys are sorted, floats
use repr, timing is deliberately excluded, and newlines are always LF.
Re-emitting the same summaries yields byte-identical files.
"""

from __future__ import annotations

import json
import os

import numpy as np

from ..errors import IoFailure
from ..metrics import N_CLASSES
from .experiments import MethodSummary

REPORT_JSON = "report.json"
REPORT_CSV = "report.csv"
BOXPLOT_CSV = "boxplot.csv"


def _summary_json(s: MethodSummary) -> dict:
    return {
        "method": s.method,
        "base_seed": s.base_seed,
        "dataset_checksum": s.dataset_checksum,
        "repeats": len(s.runs),
        "accuracy": {"mean": s.mean, "std": s.std, "min": s.min, "max": s.max},
        "rendered": _mean_report(s)["rendered"],
        "runs": [
            {
                "seed": r.seed,
                "report": r.report.to_json(),
                "loss_history": r.loss_history,
            }
            for r in s.runs
        ],
    }


def _mean_report(s: MethodSummary) -> dict:
    """Per-class metric means over runs, plus their compact rendering."""
    out = {}
    for metric in ("gini", "auc", "agf", "sensitivity", "precision"):
        out[metric] = {
            c: float(np.mean([getattr(r.report, metric)[c] for r in s.runs]))
            for c in range(N_CLASSES)
        }
    rendered = {
        "acc": f"{s.mean:.4g}",
        "gini": ",".join(f"{c}:{out['gini'][c]:.4g}" for c in range(N_CLASSES)),
        "auc": ",".join(f"{c}:{out['auc'][c]:.4g}" for c in range(N_CLASSES)),
        "agf": ",".join(f"{c}:{out['agf'][c]:.4g}" for c in range(N_CLASSES)),
    }
    return {"means": out, "rendered": rendered}


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def emit_report(summaries, out_dir) -> dict:
    """Write report.json, report.csv, boxplot.csv; returns the file paths."""
    if not summaries:
        raise ValueError("need at least one summary")
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "json": os.path.join(out_dir, REPORT_JSON),
        "csv": os.path.join(out_dir, REPORT_CSV),
        "boxplot": os.path.join(out_dir, BOXPLOT_CSV),
    }

    obj = {"methods": [_summary_json(s) for s in summaries]}
    _write(paths["json"], json.dumps(obj, indent=2, sort_keys=True) + "\n")

    lines = ["method,class,acc,gini,auc,agf,sensitivity,precision"]
    for s in summaries:
        means = _mean_report(s)["means"]
        for c in range(N_CLASSES):
            lines.append(
                ",".join(
                    [
                        s.method,
                        str(c),
                        repr(s.mean),
                        repr(means["gini"][c]),
                        repr(means["auc"][c]),
                        repr(means["agf"][c]),
                        repr(means["sensitivity"][c]),
                        repr(means["precision"][c]),
                    ]
                )
            )
    _write(paths["csv"], "\n".join(lines) + "\n")

    lines = ["method,run,accuracy"]
    for s in summaries:
        for k, r in enumerate(s.runs):
            lines.append(f"{s.method},{k},{r.report.accuracy!r}")
    _write(paths["boxplot"], "\n".join(lines) + "\n")
    return paths


def write_embedding_csv(path, points, labels) -> None:
    points = np.asarray(points)
    lines = ["x,y,label"]
    for (x, y), label in zip(points, labels):
        lines.append(f"{float(x)!r},{float(y)!r},{int(label)}")
    _write(path, "\n".join(lines) + "\n")
