"""Metrics oracles, ROC/AUC pair-counting, and report file writers."""

import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import feature_matrix
from rumorfuse.learners import default_spec, fit
from rumorfuse.report import (
    Metrics,
    class_distribution_summary,
    classification_metrics,
    feature_importance,
    roc_curve,
    write_report_dir,
)


def pair_counting_auc(y_true, scores):
    """AUC = P(score_pos > score_neg) + 0.5 * P(tie), by exhaustive pairs."""
    pos = [s for s, t in zip(scores, y_true) if t == 1]
    neg = [s for s, t in zip(scores, y_true) if t == 0]
    total = 0.0
    for sp, sn in itertools.product(pos, neg):
        if sp > sn:
            total += 1.0
        elif sp == sn:
            total += 0.5
    return total / (len(pos) * len(neg))


def test_metrics_hand_case():
    # confusion: tn=1 fp=1 / fn=1 tp=2 -> acc 0.75... hand-checked
    y_true = [0, 0, 1, 1, 1, 0, 1, 0]
    y_pred = [0, 1, 1, 0, 1, 0, 1, 0]
    m = classification_metrics(y_true, y_pred)
    assert m.accuracy == 0.75
    assert m.precision == 0.75  # 3 / (3 + 1)
    assert m.recall == 0.75  # 3 / (3 + 1)
    assert m.f1 == 0.75
    assert m.confusion.tolist() == [[3, 1], [1, 3]]


def test_metrics_asymmetric_case():
    y_true = [1, 1, 1, 1, 0, 0, 0, 0, 0, 0]
    y_pred = [1, 1, 0, 0, 1, 0, 0, 0, 0, 0]
    m = classification_metrics(y_true, y_pred)
    assert m.accuracy == 0.7
    assert m.precision == pytest.approx(2 / 3)
    assert m.recall == 0.5
    assert m.f1 == pytest.approx(2 * (2 / 3) * 0.5 / ((2 / 3) + 0.5))


def test_metrics_degenerate_predictions():
    m = classification_metrics([0, 1], [0, 0])
    assert m.precision == 0.0 and m.recall == 0.0 and m.f1 == 0.0
    all_fake = classification_metrics([0, 1], [1, 1])
    assert all_fake.recall == 1.0 and all_fake.precision == 0.5


def test_metrics_rejects_mismatch():
    with pytest.raises(ValueError):
        classification_metrics([0, 1], [0])


def test_roc_endpoints_and_monotonicity():
    rng = np.random.default_rng(0)
    y = rng.integers(0, 2, 50)
    y[:2] = [0, 1]
    s = rng.random(50)
    curve = roc_curve(y, s)
    assert curve.points[0] == (0.0, 0.0)
    assert curve.points[-1] == (1.0, 1.0)
    xs = [p[0] for p in curve.points]
    ys = [p[1] for p in curve.points]
    assert xs == sorted(xs) and ys == sorted(ys)
    assert 0.0 <= curve.auc <= 1.0


def test_roc_perfect_and_inverted():
    y = [0, 0, 1, 1]
    assert roc_curve(y, [0.1, 0.2, 0.8, 0.9]).auc == 1.0
    assert roc_curve(y, [0.9, 0.8, 0.2, 0.1]).auc == 0.0
    assert roc_curve(y, [0.5, 0.5, 0.5, 0.5]).auc == 0.5  # all tied


def test_roc_needs_both_classes():
    with pytest.raises(ValueError):
        roc_curve([1, 1], [0.5, 0.6])


@settings(deadline=None, max_examples=150)
@given(
    data=st.lists(
        st.tuples(
            st.integers(0, 1),
            st.sampled_from([0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0]),
        ),
        min_size=2,
        max_size=12,
    )
)
def test_auc_matches_pair_counting(data):
    y = [t for t, _ in data]
    s = [v for _, v in data]
    if len(set(y)) < 2:
        return
    curve = roc_curve(y, s)
    assert curve.auc == pytest.approx(pair_counting_auc(y, s), abs=1e-12)


def test_feature_importance_normalized_descending():
    rng = np.random.default_rng(1)
    y = np.arange(100) % 2
    x = rng.standard_normal((100, 3))
    x[:, 1] += 4.0 * y  # column 'b' carries the signal
    m = fit(default_spec("rf", seed=0), feature_matrix(x, labels=y, names=("a", "b", "c")))
    pairs = feature_importance(m)
    assert pairs[0][0] == "b"
    assert sum(v for _, v in pairs) == pytest.approx(1.0)
    assert all(pairs[i][1] >= pairs[i + 1][1] for i in range(len(pairs) - 1))


def test_feature_importance_requires_rf():
    x, y = np.random.default_rng(0).standard_normal((20, 2)), np.arange(20) % 2
    m = fit(default_spec("cart", seed=0), x, y)
    with pytest.raises(ValueError, match="rf"):
        feature_importance(m)


def test_class_distribution_summary():
    vals = np.array([[0.0], [1.0], [2.0], [3.0], [10.0], [20.0]])
    m = feature_matrix(vals, labels=[0, 0, 0, 0, 1, 1], names=("x",))
    rows = class_distribution_summary(m)
    assert len(rows) == 2
    r0 = rows[0]
    assert (r0["feature"], r0["class"]) == ("x", 0)
    assert (r0["min"], r0["median"], r0["max"]) == (0.0, 1.5, 3.0)
    assert r0["q1"] == 0.75 and r0["q3"] == 2.25  # linear interpolation
    assert rows[1]["median"] == 15.0


def test_write_report_dir_layout(tmp_path):
    y_true = [0, 1, 0, 1, 1]
    y_pred = [0, 1, 1, 1, 0]
    per_model = {"rf": classification_metrics(y_true, y_pred)}
    curve = roc_curve(y_true, [0.2, 0.9, 0.6, 0.7, 0.3])
    vals = np.arange(10, dtype=float).reshape(5, 2)
    dist = class_distribution_summary(feature_matrix(vals, labels=y_true, names=("a", "b")))
    files = write_report_dir(
        tmp_path,
        per_model,
        rocs={"rf": curve},
        importance=[("a", 0.7), ("b", 0.3)],
        distributions=dist,
        folds=[("rf", 0, 1, 0.8), ("rf", 0, 2, 0.9)],
    )
    assert files == ["metrics.json", "roc_rf.csv", "importance.csv", "distributions.csv", "folds.csv"]
    doc = json.loads((tmp_path / "metrics.json").read_text())
    assert doc["rf"]["accuracy"] == 0.6
    roc_lines = (tmp_path / "roc_rf.csv").read_text().splitlines()
    assert roc_lines[0] == "fpr,tpr"
    assert roc_lines[1] == "0.0,0.0"
    assert roc_lines[-1] == "1.0,1.0"
    imp_lines = (tmp_path / "importance.csv").read_text().splitlines()
    assert imp_lines[0] == "feature,importance"
    fold_lines = (tmp_path / "folds.csv").read_text().splitlines()
    assert fold_lines[0] == "model,repeat,fold,accuracy"
    # identical inputs -> byte-identical outputs
    again = tmp_path / "again"
    again.mkdir()
    write_report_dir(again, per_model, rocs={"rf": curve}, importance=[("a", 0.7), ("b", 0.3)], distributions=dist, folds=[("rf", 0, 1, 0.8), ("rf", 0, 2, 0.9)])
    for name in files:
        assert (tmp_path / name).read_bytes() == (again / name).read_bytes()
