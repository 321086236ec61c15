"""Early and late fusion of the textual and visual modalities.

Early fusion concatenates per-modality feature blocks (textual first)
after min-max scaling learned on training rows only. Late fusion combines
the positive-class probabilities of two per-modality classifiers, either
by plain averaging or through a logistic regression fitted on out-of-fold
training probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.linear_model import LogisticRegression

from rumorfuse.data import FeatureMatrix


@dataclass(frozen=True)
class Scaler:
    """Per-column min-max map to [0,1]; constant columns collapse to 0."""

    col_min: np.ndarray
    col_max: np.ndarray
    mode: str = "minmax"

    def apply(self, X: np.ndarray) -> np.ndarray:
        values = np.asarray(X, dtype=np.float64)
        if values.shape[1] != self.col_min.size:
            raise ValueError(
                f"scaler fitted on {self.col_min.size} columns, got {values.shape[1]}"
            )
        span = self.col_max - self.col_min
        safe = np.where(span > 0, span, 1.0)
        out = (values - self.col_min) / safe
        out[:, span == 0] = 0.0
        return np.clip(out, 0.0, 1.0)


def fit_scaler(X_train) -> Scaler:
    values = X_train.values if isinstance(X_train, FeatureMatrix) else np.asarray(X_train)
    values = values.astype(np.float64)
    return Scaler(col_min=values.min(axis=0), col_max=values.max(axis=0))


def apply_scaler(s: Scaler, X):
    """Scaled copy; FeatureMatrix in -> FeatureMatrix out."""
    if isinstance(X, FeatureMatrix):
        return FeatureMatrix(
            column_names=X.column_names,
            column_modalities=X.column_modalities,
            values=s.apply(X.values),
            row_ids=X.row_ids,
            labels=X.labels,
        )
    return s.apply(X)


def early_fuse(textual: FeatureMatrix, visual: FeatureMatrix) -> FeatureMatrix:
    """Column-wise concatenation, textual block first, modality tags kept."""
    if textual.row_ids != visual.row_ids:
        raise ValueError("modalities cover different rows (ids must match in order)")
    if visual.n_cols == 0:
        return textual
    labels = textual.labels
    if labels is None:
        labels = visual.labels
    elif visual.labels is not None and not np.array_equal(labels, visual.labels):
        raise ValueError("modalities disagree on labels")
    return FeatureMatrix(
        column_names=textual.column_names + visual.column_names,
        column_modalities=textual.column_modalities + visual.column_modalities,
        values=np.hstack([textual.values, visual.values]),
        row_ids=textual.row_ids,
        labels=labels,
    )


def labels_from_proba(p_fake: np.ndarray) -> np.ndarray:
    """Fixed tie rule: fused probability >= 0.5 means fake."""
    return (np.asarray(p_fake) >= 0.5).astype(np.int64)


def late_fuse_equal(p_text, p_visual) -> np.ndarray:
    """Arithmetic mean of the two positive-class probability vectors."""
    a = np.asarray(p_text, dtype=np.float64)
    b = np.asarray(p_visual, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return (a + b) / 2.0


@dataclass(frozen=True)
class LateFusionModel:
    """mode 'equal' carries no state; 'optimized' wraps a 2-feature logreg."""

    mode: str
    weight_model: object | None = None

    def fuse(self, p_text, p_visual) -> np.ndarray:
        if self.mode == "equal":
            return late_fuse_equal(p_text, p_visual)
        X = np.column_stack([p_text, p_visual])
        return self.weight_model.predict_proba(X)[:, 1]


def fit_late_fuse_optimized(p_text_train, p_visual_train, y_train) -> LateFusionModel:
    """Learn combination weights; inputs must be out-of-fold probabilities."""
    y = np.asarray(y_train, dtype=np.int64)
    if np.unique(y).size < 2:
        raise ValueError("single-class labels")
    X = np.column_stack([p_text_train, p_visual_train])
    lr = LogisticRegression(max_iter=1000)
    lr.fit(X, y)
    return LateFusionModel(mode="optimized", weight_model=lr)
