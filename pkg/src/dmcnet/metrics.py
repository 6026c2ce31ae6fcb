"""Classification metrics: confusion matrices, ROC/AUC, Gini, AGF, reports.

Two distinct "Gini" quantities ship here because both are in circulation:

* ``gini_coefficient`` is the ranking statistic 2*AUC - 1 in [-1, 1];
  per-class report columns use this one.
* ``gini_impurity`` is the distribution impurity 1 - sum(p_i^2).

Sensitivity is TP/(TP+FN) and the AGF is the geometric mean of F2 and the
F0.5 score computed on the label-inverted confusion matrix.  Degenerate
one-vs-rest collapses (empty denominators) yield 0 together with a flag
instead of NaN.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    EmptyMatrix,
    InvalidLabel,
    LengthMismatch,
    NotADistribution,
    OutOfRange,
    SingleClassTruth,
)

N_CLASSES = 3


@dataclass
class ConfusionMatrix:
    """counts[t][p] = samples of true class t predicted as p."""

    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def collapse(self, c: int):
        """One-vs-rest counts (tp, fn, fp, tn) for class c."""
        tp = int(self.counts[c, c])
        fn = int(self.counts[c].sum() - tp)
        fp = int(self.counts[:, c].sum() - tp)
        tn = self.total - tp - fn - fp
        return tp, fn, fp, tn


def confusion_matrix(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f"{y_true.shape} vs {y_pred.shape}")
    for arr, name in ((y_true, "y_true"), (y_pred, "y_pred")):
        if arr.size and (arr.min() < 0 or arr.max() >= N_CLASSES):
            raise InvalidLabel(f"{name} contains labels outside 0..{N_CLASSES - 1}")
    counts = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts=counts)


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise EmptyMatrix("confusion matrix has no samples")
    return float(np.trace(cm.counts)) / cm.total


class SensPrec(NamedTuple):
    sensitivity: float
    precision: float
    degenerate: bool


def sensitivity_precision(cm: ConfusionMatrix, c: int) -> SensPrec:
    tp, fn, fp, _ = cm.collapse(c)
    degenerate = (tp + fn == 0) or (tp + fp == 0)
    sens = tp / (tp + fn) if tp + fn > 0 else 0.0
    prec = tp / (tp + fp) if tp + fp > 0 else 0.0
    return SensPrec(sens, prec, degenerate)


@dataclass
class RocCurve:
    thresholds: np.ndarray  # descending
    points: np.ndarray  # (n, 2) columns (FPR, TPR), starts (0,0) ends (1,1)


def roc_auc(scores, truth) -> tuple:
    """ROC curve and trapezoidal AUC for binary truth over real scores.

    Thresholds sweep the distinct score values in descending order; the
    trapezoid rule over the resulting curve equals the probability that a
    random positive outranks a random negative (ties count half).
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth, dtype=bool)
    if scores.shape != truth.shape:
        raise LengthMismatch(f"{scores.shape} vs {truth.shape}")
    n_pos = int(truth.sum())
    n_neg = truth.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassTruth("need at least one positive and one negative")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_truth = truth[order]
    # group ties: cumulative counts at each distinct threshold
    distinct = np.nonzero(np.diff(sorted_scores))[0]
    boundaries = np.concatenate([distinct, [scores.size - 1]])
    tp_cum = np.cumsum(sorted_truth)[boundaries]
    fp_cum = (boundaries + 1) - tp_cum
    tpr = np.concatenate([[0.0], tp_cum / n_pos])
    fpr = np.concatenate([[0.0], fp_cum / n_neg])
    thresholds = sorted_scores[boundaries]
    auc = float(np.trapezoid(tpr, fpr))
    curve = RocCurve(thresholds=thresholds, points=np.stack([fpr, tpr], axis=1))
    return curve, auc


def auc_pair_count(scores, truth) -> float:
    """O(n^2) pair-counting AUC: correctly ordered pos/neg pairs, ties 0.5."""
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth, dtype=bool)
    pos = scores[truth]
    neg = scores[~truth]
    if pos.size == 0 or neg.size == 0:
        raise SingleClassTruth("need at least one positive and one negative")
    diff = pos[:, None] - neg[None, :]
    wins = (diff > 0).sum() + 0.5 * (diff == 0).sum()
    return float(wins / (pos.size * neg.size))


def gini_coefficient(auc: float) -> float:
    if not 0.0 <= auc <= 1.0:
        raise OutOfRange(f"auc must be in [0,1], got {auc}")
    return 2.0 * auc - 1.0


def gini_impurity(probabilities) -> float:
    p = np.asarray(probabilities, dtype=np.float64)
    if p.size == 0 or (p < 0).any() or abs(p.sum() - 1.0) > 1e-9:
        raise NotADistribution(f"probabilities {p} are not a distribution")
    return float(1.0 - (p * p).sum())


class AgfResult(NamedTuple):
    value: float
    degenerate: bool


def agf(cm: ConfusionMatrix, c: int) -> AgfResult:
    """Geometric mean of F2 and the inverted-matrix F0.5 for class c."""
    tp, fn, fp, tn = cm.collapse(c)
    f2, d1 = _fbeta(tp, fn, fp, beta=2.0)
    # inverted matrix: positives and negatives swap roles
    inv_f05, d2 = _fbeta(tn, fp, fn, beta=0.5)
    if d1 or d2 or f2 == 0.0 or inv_f05 == 0.0:
        return AgfResult(0.0, True)
    return AgfResult(float(np.sqrt(f2 * inv_f05)), False)


def _fbeta(tp: int, fn: int, fp: int, beta: float):
    if tp + fn == 0 or tp + fp == 0:
        return 0.0, True
    recall = tp / (tp + fn)
    prec = tp / (tp + fp)
    if prec == 0.0 and recall == 0.0:
        return 0.0, True
    b2 = beta * beta
    return (1 + b2) * prec * recall / (b2 * prec + recall), False


@dataclass
class MetricReport:
    """Per-method record: accuracy plus per-class metric maps keyed 0/1/2."""

    method: str
    accuracy: float
    auc: dict
    gini: dict
    agf: dict
    sensitivity: dict
    precision: dict

    def to_json(self) -> dict:
        def fmt(d):
            return {str(k): d[k] for k in sorted(d)}

        return {
            "method": self.method,
            "acc": self.accuracy,
            "gini": fmt(self.gini),
            "auc": fmt(self.auc),
            "agf": fmt(self.agf),
            "sensitivity": fmt(self.sensitivity),
            "precision": fmt(self.precision),
        }

    def rendered(self) -> dict:
        """Compact per-class rendering: "0:v,1:v,2:v" with 4 significant digits."""

        def render(d):
            return ",".join(f"{k}:{d[k]:.4g}" for k in sorted(d))

        return {
            "method": self.method,
            "acc": f"{self.accuracy:.4g}",
            "gini": render(self.gini),
            "auc": render(self.auc),
            "agf": render(self.agf),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MetricReport":
        def keys_int(d):
            return {int(k): v for k, v in d.items()}

        return cls(
            method=obj["method"],
            accuracy=obj["acc"],
            auc=keys_int(obj["auc"]),
            gini=keys_int(obj["gini"]),
            agf=keys_int(obj["agf"]),
            sensitivity=keys_int(obj["sensitivity"]),
            precision=keys_int(obj["precision"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def evaluate_method(y_true, class_scores, y_pred, method: str = "") -> MetricReport:
    """Fill the full per-class report from labels, per-class scores, predictions."""
    y_true = np.asarray(y_true, dtype=np.int64)
    scores = np.asarray(class_scores, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if scores.shape != (y_true.size, N_CLASSES):
        raise LengthMismatch(f"scores shape {scores.shape} != ({y_true.size}, {N_CLASSES})")
    if not np.isfinite(scores).all():
        raise OutOfRange("scores contain non-finite values")
    cm = confusion_matrix(y_true, y_pred)
    auc_map, gini_map, agf_map, sens_map, prec_map = {}, {}, {}, {}, {}
    for c in range(N_CLASSES):
        _, auc = roc_auc(scores[:, c], y_true == c)
        auc_map[c] = auc
        gini_map[c] = gini_coefficient(auc)
        agf_map[c] = agf(cm, c).value
        sp = sensitivity_precision(cm, c)
        sens_map[c] = sp.sensitivity
        prec_map[c] = sp.precision
    return MetricReport(
        method=method,
        accuracy=accuracy(cm),
        auc=auc_map,
        gini=gini_map,
        agf=agf_map,
        sensitivity=sens_map,
        precision=prec_map,
    )
