"""Five metalearners over the four base classifiers (cart, knn, svm, rf).

soft_vote        sum of base probability vectors, argmax label.
weighted_vote    same, weighted by normalized training accuracy.
stacking         meta logistic regression on per-base out-of-fold
                 probabilities (mean of 3 repeats of stratified 10-fold
                 CV) concatenated with the original features.
blending         50/50 outer split, then 67/33 train/validation; meta fit
                 on holdout-validation predictions.
super_learner    one shared 10-fold split; meta fit on the n x m OOF
                 probability matrix alone.

Probability ties at 0.5 resolve to fake everywhere. All protocols are
seed-deterministic, and the out-of-fold constructions never let a model
predict a row it was trained on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rumorfuse.data import FeatureMatrix, proportional_counts
from rumorfuse.learners import (
    ClassifierSpec,
    TrainedModel,
    _derive_seed,
    cross_validate,
    default_spec,
    fit,
    load_trained_model,
    predict_proba,
    save_trained_model,
    stratified_kfold,
)

ENSEMBLE_KINDS = ("soft_vote", "weighted_vote", "stacking", "blending", "super_learner")
BASE_ORDER = ("cart", "knn", "svm", "rf")


def default_base_specs(seed: int = 0) -> tuple[ClassifierSpec, ...]:
    return tuple(default_spec(kind, seed=seed) for kind in BASE_ORDER)


@dataclass(frozen=True)
class EnsembleModel:
    kind: str
    base_models: tuple[TrainedModel, ...]
    feature_names: tuple[str, ...]
    meta: TrainedModel | None = None
    weights: np.ndarray | None = None
    protocol: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.size != len(self.base_models):
                raise ValueError("one weight per base model required")
            if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
                raise ValueError("weights must be non-negative and sum to 1")
            object.__setattr__(self, "weights", w)
        if self.kind in ("stacking", "blending", "super_learner") and self.meta is None:
            raise ValueError(f"{self.kind} requires a fitted meta model")


def _values_of(X) -> np.ndarray:
    return X.values if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=np.float64)


def _resolve(X, y):
    values = _values_of(X)
    if y is None and isinstance(X, FeatureMatrix):
        y = X.labels
    y = np.asarray(y, dtype=np.int64)
    if isinstance(X, FeatureMatrix):
        names = X.column_names
    else:
        names = tuple(f"f{i}" for i in range(values.shape[1]))
    return values, y, names


def _proba_stack(base_models, X) -> np.ndarray:
    """(n, m, 2) probability tensor over base models in fixed order."""
    return np.stack([predict_proba(m, X) for m in base_models], axis=1)


def soft_vote(base_models, X) -> tuple[np.ndarray, np.ndarray]:
    """Labels and mean-fused probabilities; tie goes to fake."""
    if not base_models:
        raise ValueError("need at least one base model")
    probs = _proba_stack(base_models, X)
    fused = probs.mean(axis=1)
    return (fused[:, 1] >= fused[:, 0]).astype(np.int64), fused


def compute_vote_weights(base_models, X_train, y_train) -> np.ndarray:
    """Per-model training accuracy, normalized to sum 1."""
    y = np.asarray(y_train, dtype=np.int64)
    accs = np.array(
        [
            float(np.mean((predict_proba(m, X_train)[:, 1] >= 0.5).astype(np.int64) == y))
            for m in base_models
        ]
    )
    total = accs.sum()
    if total == 0:
        raise ValueError("all base models score zero accuracy")
    return accs / total


def weighted_vote(base_models, weights, X) -> tuple[np.ndarray, np.ndarray]:
    """Labels and weight-fused probabilities; tie goes to fake."""
    w = np.asarray(weights, dtype=np.float64)
    if w.size != len(base_models):
        raise ValueError("weight length mismatch")
    probs = _proba_stack(base_models, X)
    fused = np.einsum("nmc,m->nc", probs, w)
    return (fused[:, 1] >= fused[:, 0]).astype(np.int64), fused


def _fit_bases(base_specs, values, y, feature_names) -> tuple[TrainedModel, ...]:
    return tuple(fit(s, values, y, feature_names=feature_names) for s in base_specs)


_META_SPEC = ClassifierSpec(kind="logreg")


def fit_soft_vote(base_specs, X, y=None, seed: int = 0) -> EnsembleModel:
    values, y, names = _resolve(X, y)
    return EnsembleModel(
        kind="soft_vote",
        base_models=_fit_bases(base_specs, values, y, names),
        feature_names=names,
        protocol={"seed": seed},
    )


def fit_weighted_vote(base_specs, X, y=None, seed: int = 0) -> EnsembleModel:
    values, y, names = _resolve(X, y)
    bases = _fit_bases(base_specs, values, y, names)
    return EnsembleModel(
        kind="weighted_vote",
        base_models=bases,
        feature_names=names,
        weights=compute_vote_weights(bases, values, y),
        protocol={"seed": seed},
    )


def fit_stacking(
    base_specs, X, y=None, k: int = 10, repeats: int = 3, seed: int = 0
) -> EnsembleModel:
    """Canonical stacking: repeated-CV OOF probabilities + original features.

    Every base model is cross-validated on the same fold plans (one plan
    per repeat); each training row collects exactly ``repeats``
    out-of-fold probabilities per base, whose mean forms one meta column
    per base. Meta input is those m columns concatenated before the
    original feature block. The meta logistic regression is additionally
    cross-validated (5-fold) purely for validation reporting; its fold
    accuracies land in the protocol.
    """
    values, y, names = _resolve(X, y)
    oof_cols = []
    assignments = None
    for spec in base_specs:
        cv = cross_validate(spec, values, y, k=k, repeats=repeats, seed=seed)
        oof_cols.append(cv.mean_oof())
        assignments = cv.assignments  # identical across specs by construction
    meta_x = np.column_stack(oof_cols + [values])
    meta_names = tuple(f"oof_{s.kind}" for s in base_specs) + names
    meta = fit(_META_SPEC, meta_x, y, feature_names=meta_names)
    meta_cv = cross_validate(_META_SPEC, meta_x, y, k=5, repeats=1, seed=seed)
    return EnsembleModel(
        kind="stacking",
        base_models=_fit_bases(base_specs, values, y, names),
        feature_names=names,
        meta=meta,
        protocol={
            "k": k,
            "repeats": repeats,
            "seed": seed,
            "fold_assignments": assignments.tolist(),
            "meta_validation_accuracy": meta_cv.fold_scores.mean(axis=1).tolist(),
        },
    )


def stratified_take(y, n_take: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Split row indices into (taken, rest): |taken| = n_take exactly, with
    per-class counts within one of proportionality."""
    y = np.asarray(y)
    classes, class_counts = np.unique(y, return_counts=True)
    per_class = proportional_counts(class_counts.tolist(), n_take)
    rng = np.random.default_rng(_derive_seed(seed))
    taken = []
    for cls, want in zip(classes, per_class):
        members = np.flatnonzero(y == cls)
        picked = rng.permutation(members.size)[:want]
        taken.extend(members[picked].tolist())
    taken = np.array(sorted(taken), dtype=np.int64)
    mask = np.ones(y.size, dtype=bool)
    mask[taken] = False
    return taken, np.flatnonzero(mask)


def fit_blending(base_specs, X, y=None, seed: int = 0) -> EnsembleModel:
    """Holdout blending: outer 50/50 split, then 67/33 train/validation.

    The outer half is set aside untouched (its indices are recorded as
    ``test_idx`` in the protocol so callers can evaluate on it). Base
    models fit on the inner train part only; the logistic-regression
    blender fits on their validation-part predictions, one positive-class
    probability per base. Split sizes follow the floor convention:
    n_test = floor(n/2), n_train = floor(0.67 * remaining).
    """
    values, y, names = _resolve(X, y)
    n = y.size
    n_test = int(np.floor(0.5 * n + 1e-9))
    test_idx, devel_idx = stratified_take(y, n_test, seed=_derive_seed(seed, 1))
    n_train = int(np.floor(0.67 * devel_idx.size + 1e-9))
    train_rel, val_rel = stratified_take(y[devel_idx], n_train, seed=_derive_seed(seed, 2))
    train_idx = devel_idx[train_rel]
    val_idx = devel_idx[val_rel]
    if np.unique(y[train_idx]).size < 2 or np.unique(y[val_idx]).size < 2:
        raise ValueError("nested blending split produced a single-class subset")
    bases = _fit_bases(base_specs, values[train_idx], y[train_idx], names)
    meta_x = np.column_stack([predict_proba(m, values[val_idx])[:, 1] for m in bases])
    meta_names = tuple(f"p_{s.kind}" for s in base_specs)
    meta = fit(_META_SPEC, meta_x, y[val_idx], feature_names=meta_names)
    return EnsembleModel(
        kind="blending",
        base_models=bases,
        feature_names=names,
        meta=meta,
        protocol={
            "seed": seed,
            "split_sizes": {
                "train": int(train_idx.size),
                "val": int(val_idx.size),
                "test": int(test_idx.size),
            },
            "train_idx": train_idx.tolist(),
            "val_idx": val_idx.tolist(),
            "test_idx": test_idx.tolist(),
        },
    )


def fit_super_learner(
    base_specs, X, y=None, k: int = 10, seed: int = 0
) -> EnsembleModel:
    """Super learner: one shared k-fold plan feeds every base model.

    Each row's out-of-fold positive-class probabilities form the n x m
    meta matrix the logistic regression fits on; base models are then
    refit on the full training data for inference.
    """
    values, y, names = _resolve(X, y)
    plan = stratified_kfold(y, k, seed=_derive_seed(seed))
    oof = np.zeros((y.size, len(base_specs)))
    for col, spec in enumerate(base_specs):
        for train, val in plan.folds():
            model = fit(spec, values[train], y[train], feature_names=names)
            oof[val, col] = predict_proba(model, values[val])[:, 1]
    meta_names = tuple(f"p_{s.kind}" for s in base_specs)
    meta = fit(_META_SPEC, oof, y, feature_names=meta_names)
    return EnsembleModel(
        kind="super_learner",
        base_models=_fit_bases(base_specs, values, y, names),
        feature_names=names,
        meta=meta,
        protocol={
            "k": k,
            "seed": seed,
            "fold_assignments": plan.assignments.tolist(),
            "oof_shape": list(oof.shape),
        },
    )


def fit_ensemble(
    kind: str,
    base_specs,
    X,
    y=None,
    k: int = 10,
    repeats: int = 3,
    seed: int = 0,
) -> EnsembleModel:
    """Dispatch to the requested metalearner's fit protocol."""
    if kind == "soft_vote":
        return fit_soft_vote(base_specs, X, y, seed=seed)
    if kind == "weighted_vote":
        return fit_weighted_vote(base_specs, X, y, seed=seed)
    if kind == "stacking":
        return fit_stacking(base_specs, X, y, k=k, repeats=repeats, seed=seed)
    if kind == "blending":
        return fit_blending(base_specs, X, y, seed=seed)
    if kind == "super_learner":
        return fit_super_learner(base_specs, X, y, k=k, seed=seed)
    raise ValueError(f"unknown ensemble kind {kind!r}")


def ensemble_predict(e: EnsembleModel, X) -> tuple[np.ndarray, np.ndarray]:
    """Labels and (n, 2) fused probabilities for any ensemble kind."""
    if e.kind == "soft_vote":
        return soft_vote(e.base_models, X)
    if e.kind == "weighted_vote":
        return weighted_vote(e.base_models, e.weights, X)
    p_bases = np.column_stack(
        [predict_proba(m, X)[:, 1] for m in e.base_models]
    )
    if e.kind == "stacking":
        meta_x = np.column_stack([p_bases, _values_of(X)])
    else:
        meta_x = p_bases
    fused = predict_proba(e.meta, meta_x)
    return (fused[:, 1] >= fused[:, 0]).astype(np.int64), fused


def save_ensemble(e: EnsembleModel, directory) -> None:
    """Manifest + one model file per base + optional meta model file."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    base_files = []
    for i, m in enumerate(e.base_models):
        name = f"base_{i}_{m.spec.kind}.json"
        save_trained_model(m, directory / name)
        base_files.append(name)
    manifest = {
        "format_version": 1,
        "kind": e.kind,
        "feature_names": list(e.feature_names),
        "base_models": base_files,
        "meta_model": None,
        "weights": None if e.weights is None else e.weights.tolist(),
        "protocol": e.protocol,
    }
    if e.meta is not None:
        save_trained_model(e.meta, directory / "meta.json")
        manifest["meta_model"] = "meta.json"
    with open(directory / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_ensemble(directory) -> EnsembleModel:
    directory = Path(directory)
    with open(directory / "manifest.json", encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format_version") != 1:
        raise ValueError(f"unsupported manifest version: {manifest.get('format_version')}")
    bases = tuple(load_trained_model(directory / f) for f in manifest["base_models"])
    meta = None
    if manifest["meta_model"]:
        meta = load_trained_model(directory / manifest["meta_model"])
    weights = manifest["weights"]
    return EnsembleModel(
        kind=manifest["kind"],
        base_models=bases,
        feature_names=tuple(manifest["feature_names"]),
        meta=meta,
        weights=None if weights is None else np.array(weights),
        protocol=manifest["protocol"],
    )
