import numpy as np
import pytest

from dmcnet import errors
from dmcnet.metrics import (
    ConfusionMatrix,
    MetricReport,
    accuracy,
    agf,
    auc_pair_count,
    confusion_matrix,
    evaluate_method,
    gini_coefficient,
    gini_impurity,
    roc_auc,
    sensitivity_precision,
)


class TestConfusion:
    def test_perfect_diagonal(self):
        cm = confusion_matrix([0, 1, 2, 1], [0, 1, 2, 1])
        assert np.array_equal(np.diag(np.diag(cm.counts)), cm.counts)
        assert accuracy(cm) == 1.0

    def test_hand_counts(self):
        cm = confusion_matrix([0, 1, 2, 2], [0, 2, 2, 1])
        expect = np.zeros((3, 3), dtype=int)
        expect[0, 0] = expect[1, 2] = expect[2, 2] = expect[2, 1] = 1
        assert np.array_equal(cm.counts, expect)
        assert accuracy(cm) == 0.5

    def test_total_conservation(self, rng):
        y_true = rng.integers(0, 3, 100)
        y_pred = rng.integers(0, 3, 100)
        assert confusion_matrix(y_true, y_pred).total == 100

    def test_length_mismatch(self):
        with pytest.raises(errors.LengthMismatch):
            confusion_matrix([0, 1], [0])

    def test_invalid_label(self):
        with pytest.raises(errors.InvalidLabel):
            confusion_matrix([0, 3], [0, 1])

    def test_empty_matrix_accuracy(self):
        with pytest.raises(errors.EmptyMatrix):
            accuracy(ConfusionMatrix(np.zeros((3, 3), dtype=int)))


class TestSensitivityPrecision:
    def test_diagonal_is_perfect(self):
        cm = confusion_matrix([0, 1, 2], [0, 1, 2])
        for c in range(3):
            sp = sensitivity_precision(cm, c)
            assert (sp.sensitivity, sp.precision) == (1.0, 1.0)
            assert not sp.degenerate

    def test_hand_case(self):
        # class-0 collapse TP=3, FN=1, FP=2
        counts = np.array([[3, 1, 0], [1, 9, 0], [1, 0, 9]])
        sp = sensitivity_precision(ConfusionMatrix(counts), 0)
        assert sp.sensitivity == pytest.approx(0.75)
        assert sp.precision == pytest.approx(0.6)

    def test_absent_class_degenerate(self):
        cm = confusion_matrix([1, 1, 2], [1, 1, 2])
        sp = sensitivity_precision(cm, 0)
        assert sp.sensitivity == 0.0 and sp.degenerate


class TestRocAuc:
    def test_perfect_separation(self):
        _, auc = roc_auc([0.9, 0.8, 0.2, 0.1], [True, True, False, False])
        assert auc == 1.0

    def test_all_ties(self):
        _, auc = roc_auc([0.5] * 6, [True, False] * 3)
        assert auc == pytest.approx(0.5)

    def test_matches_pair_counting(self, rng):
        for _ in range(30):
            n = int(rng.integers(5, 200))
            scores = np.round(rng.normal(size=n), 1)  # coarse rounding forces ties
            truth = rng.random(n) < 0.5
            if truth.all() or not truth.any():
                continue
            _, trap = roc_auc(scores, truth)
            assert trap == pytest.approx(auc_pair_count(scores, truth), abs=1e-9)

    def test_curve_endpoints_and_monotonicity(self, rng):
        scores = rng.normal(size=50)
        truth = rng.random(50) < 0.4
        curve, _ = roc_auc(scores, truth)
        assert tuple(curve.points[0]) == (0.0, 0.0)
        assert tuple(curve.points[-1]) == (1.0, 1.0)
        assert np.all(np.diff(curve.points[:, 0]) >= 0)
        assert np.all(np.diff(curve.points[:, 1]) >= 0)
        assert np.all(np.diff(curve.thresholds) < 0)

    def test_complement_symmetry(self, rng):
        scores = rng.normal(size=40)  # continuous, tie-free
        truth = rng.random(40) < 0.5
        truth[0], truth[1] = True, False
        _, a1 = roc_auc(scores, truth)
        _, a2 = roc_auc(-scores, truth)
        assert a1 + a2 == pytest.approx(1.0, abs=1e-9)

    def test_monotone_transform_invariance(self, rng):
        scores = rng.normal(size=30)
        truth = rng.random(30) < 0.5
        truth[0], truth[1] = True, False
        _, a1 = roc_auc(scores, truth)
        _, a2 = roc_auc(np.exp(2.0 * scores) + 5.0, truth)
        assert a1 == pytest.approx(a2, abs=1e-12)

    def test_single_class_rejected(self):
        with pytest.raises(errors.SingleClassTruth):
            roc_auc([0.1, 0.2], [True, True])


class TestGini:
    def test_coefficient_table_pairs(self):
        assert gini_coefficient(0.75) == pytest.approx(0.5)
        assert gini_coefficient(0.89) == pytest.approx(0.78)
        assert gini_coefficient(0.5) == 0.0

    def test_coefficient_range(self):
        with pytest.raises(errors.OutOfRange):
            gini_coefficient(1.2)

    def test_impurity_values(self):
        assert gini_impurity([1, 0, 0]) == 0.0
        assert gini_impurity([1 / 3] * 3) == pytest.approx(2 / 3)
        assert gini_impurity([0.5, 0.5, 0.0]) == pytest.approx(0.5)

    def test_impurity_validates(self):
        with pytest.raises(errors.NotADistribution):
            gini_impurity([0.7, 0.7])
        with pytest.raises(errors.NotADistribution):
            gini_impurity([1.2, -0.2])


def fbeta_reference(tp, fn, fp, beta):
    recall = tp / (tp + fn)
    prec = tp / (tp + fp)
    return (1 + beta**2) * prec * recall / (beta**2 * prec + recall)


class TestAgf:
    def test_diagonal_is_one(self):
        cm = confusion_matrix([0, 1, 2] * 4, [0, 1, 2] * 4)
        for c in range(3):
            r = agf(cm, c)
            assert r.value == pytest.approx(1.0) and not r.degenerate

    def test_hand_case_against_reference(self):
        # class-0 collapse TP=8, FN=2, FP=4, TN=16
        counts = np.array([[8, 1, 1], [2, 14, 0], [2, 0, 2]])
        cm = ConfusionMatrix(counts)
        assert cm.collapse(0) == (8, 2, 4, 16)
        f2 = fbeta_reference(8, 2, 4, beta=2.0)
        inv_f05 = fbeta_reference(16, 4, 2, beta=0.5)  # swapped positives
        assert agf(cm, 0).value == pytest.approx(np.sqrt(f2 * inv_f05), abs=1e-12)

    def test_all_wrong_degenerate(self):
        cm = confusion_matrix([0, 0, 0, 1, 2], [1, 1, 2, 0, 0])
        r = agf(cm, 0)
        assert r.value == 0.0 and r.degenerate

    def test_range(self, rng):
        for _ in range(20):
            cm = confusion_matrix(rng.integers(0, 3, 30), rng.integers(0, 3, 30))
            for c in range(3):
                assert 0.0 <= agf(cm, c).value <= 1.0


class TestEvaluateMethod:
    def test_oracle_classifier_all_ones(self, rng):
        y = rng.integers(0, 3, 60)
        scores = np.zeros((60, 3))
        scores[np.arange(60), y] = 1.0
        report = evaluate_method(y, scores, y, method="oracle")
        assert report.accuracy == 1.0
        for c in range(3):
            assert report.auc[c] == 1.0
            assert report.gini[c] == 1.0
            assert report.agf[c] == 1.0

    def test_random_scores_near_half_auc(self):
        rng = np.random.Generator(np.random.PCG64(2024))
        y = np.repeat([0, 1, 2], 100)
        scores = rng.random((300, 3))
        report = evaluate_method(y, scores, np.argmax(scores, axis=1), method="noise")
        for c in range(3):
            assert abs(report.auc[c] - 0.5) < 0.1

    def test_report_schema(self, rng):
        y = rng.integers(0, 3, 30)
        scores = rng.random((30, 3))
        report = evaluate_method(y, scores, np.argmax(scores, axis=1), method="m")
        obj = report.to_json()
        assert set(obj) == {"method", "acc", "gini", "auc", "agf", "sensitivity", "precision"}
        for key in ("gini", "auc", "agf", "sensitivity", "precision"):
            assert set(obj[key]) == {"0", "1", "2"}
        assert MetricReport.from_json(obj).accuracy == report.accuracy

    def test_rendered_format(self, rng):
        y = rng.integers(0, 3, 30)
        scores = rng.random((30, 3))
        report = evaluate_method(y, scores, np.argmax(scores, axis=1), method="m")
        rendered = report.rendered()
        assert rendered["auc"].count(",") == 2
        assert rendered["auc"].startswith("0:")
