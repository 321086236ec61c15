"""Metrics, ROC curves, importances, distribution summaries, report files.

The positive class is fake (label 1) everywhere. Report files are plain
CSV/JSON data; figure rendering stays out of the core so the package has
no plotting dependency.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from rumorfuse.data import FeatureMatrix
from rumorfuse.learners import TrainedModel


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    confusion: np.ndarray  # rows: true class, cols: predicted class

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "confusion": self.confusion.tolist(),
        }


def classification_metrics(y_true, y_pred) -> Metrics:
    """Accuracy/precision/recall/F1 with fake (1) as the positive class."""
    t = np.asarray(y_true, dtype=np.int64)
    p = np.asarray(y_pred, dtype=np.int64)
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape} vs {p.shape}")
    confusion = np.zeros((2, 2), dtype=np.int64)
    for i in range(2):
        for j in range(2):
            confusion[i, j] = int(np.sum((t == i) & (p == j)))
    tp = confusion[1, 1]
    fp = confusion[0, 1]
    fn = confusion[1, 0]
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return Metrics(
        accuracy=float(np.trace(confusion) / t.size),
        precision=float(precision),
        recall=float(recall),
        f1=float(f1),
        confusion=confusion,
    )


@dataclass(frozen=True)
class RocCurve:
    points: tuple[tuple[float, float], ...]  # (fpr, tpr) from (0,0) to (1,1)
    auc: float


def roc_curve(y_true, scores) -> RocCurve:
    """Threshold sweep over unique scores, ties grouped; trapezoid AUC."""
    t = np.asarray(y_true, dtype=np.int64)
    s = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    n_pos = int(np.sum(t == 1))
    n_neg = int(np.sum(t == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs both classes present")
    order = np.argsort(-s, kind="stable")
    t_sorted = t[order]
    s_sorted = s[order]
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < t.size:
        j = i
        while j < t.size and s_sorted[j] == s_sorted[i]:
            tp += int(t_sorted[j] == 1)
            fp += int(t_sorted[j] == 0)
            j += 1
        points.append((fp / n_neg, tp / n_pos))
        i = j
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    auc = float(np.trapezoid(ys, xs))
    return RocCurve(points=tuple(points), auc=auc)


def feature_importance(rf: TrainedModel) -> list[tuple[str, float]]:
    """Impurity-decrease importances of a random forest, descending."""
    if rf.kind != "rf":
        raise ValueError(f"feature importance requires an rf model, got {rf.kind!r}")
    imp = np.asarray(rf.estimator.feature_importances_, dtype=np.float64)
    total = imp.sum()
    if total > 0:
        imp = imp / total
    pairs = list(zip(rf.feature_names, imp.tolist()))
    pairs.sort(key=lambda e: (-e[1], e[0]))
    return pairs


def class_distribution_summary(X: FeatureMatrix, y=None) -> list[dict]:
    """Five-number summary per (feature, class), linear quantiles."""
    labels = X.labels if y is None else np.asarray(y)
    if labels is None:
        raise ValueError("unlabeled matrix")
    rows = []
    for idx, name in enumerate(X.column_names):
        col = X.values[:, idx]
        for cls in (0, 1):
            vals = col[labels == cls]
            if vals.size == 0:
                continue
            q = np.quantile(vals, [0.0, 0.25, 0.5, 0.75, 1.0], method="linear")
            rows.append(
                {
                    "feature": name,
                    "class": int(cls),
                    "min": float(q[0]),
                    "q1": float(q[1]),
                    "median": float(q[2]),
                    "q3": float(q[3]),
                    "max": float(q[4]),
                }
            )
    return rows


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="\n")


def write_metrics(path, per_model: dict[str, Metrics]) -> None:
    doc = {name: m.as_dict() for name, m in sorted(per_model.items())}
    with _open_out(path) as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_roc(path, curve: RocCurve) -> None:
    with _open_out(path) as fh:
        fh.write("fpr,tpr\n")
        for fpr, tpr in curve.points:
            fh.write(f"{fpr!r},{tpr!r}\n")


def write_importance(path, pairs) -> None:
    with _open_out(path) as fh:
        fh.write("feature,importance\n")
        for name, value in pairs:
            fh.write(f"{name},{value!r}\n")


def write_distributions(path, rows) -> None:
    with _open_out(path) as fh:
        fh.write("feature,class,min,q1,median,q3,max\n")
        for r in rows:
            fh.write(
                f"{r['feature']},{r['class']},{r['min']!r},{r['q1']!r},"
                f"{r['median']!r},{r['q3']!r},{r['max']!r}\n"
            )


def write_folds(path, rows) -> None:
    """rows: iterable of (model, repeat, fold, accuracy)."""
    with _open_out(path) as fh:
        fh.write("model,repeat,fold,accuracy\n")
        for model, rep, fold, acc in rows:
            fh.write(f"{model},{rep},{fold},{acc!r}\n")


def write_report_dir(
    directory,
    per_model: dict[str, Metrics],
    rocs: dict[str, RocCurve] | None = None,
    importance: list[tuple[str, float]] | None = None,
    distributions: list[dict] | None = None,
    folds: list[tuple] | None = None,
) -> list[str]:
    """Emit the standard report layout; returns the filenames written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    write_metrics(directory / "metrics.json", per_model)
    written.append("metrics.json")
    for name, curve in sorted((rocs or {}).items()):
        fname = f"roc_{name}.csv"
        write_roc(directory / fname, curve)
        written.append(fname)
    if importance is not None:
        write_importance(directory / "importance.csv", importance)
        written.append("importance.csv")
    if distributions is not None:
        write_distributions(directory / "distributions.csv", distributions)
        written.append("distributions.csv")
    if folds is not None:
        write_folds(directory / "folds.csv", folds)
        written.append("folds.csv")
    return written
