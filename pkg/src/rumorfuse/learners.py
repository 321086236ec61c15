"""Base classifiers behind a uniform spec, plus fold/grid/CV utilities.

Five learner kinds: cart, knn, svm, rf, logreg. The fitted estimators come
from scikit-learn (the reference implementation the original experiments
used), wrapped so that every model obeys the same contracts: determinism
under a fixed seed, predict_proba rows over the fixed class order
(real=0, fake=1) summing to 1, feature-name checking at predict time, and
versioned serialization. Fold assignment, grid search and repeated
cross-validation are implemented here so their protocols stay inspectable
and seed-stable.
"""

from __future__ import annotations

import base64
import json
import pickle
from dataclasses import dataclass, field

import numpy as np
from sklearn.linear_model import LogisticRegression
from sklearn.neighbors import KNeighborsClassifier
from sklearn.svm import SVC
from sklearn.tree import DecisionTreeClassifier
from sklearn.ensemble import RandomForestClassifier

from rumorfuse.data import FeatureMatrix

KINDS = ("cart", "knn", "svm", "rf", "logreg")

MODEL_FORMAT_VERSION = 1

DEFAULT_HYPERPARAMETERS = {
    "cart": {"criterion": "gini", "max_depth": 10},
    "knn": {"n_neighbors": 5},
    "svm": {"kernel": "rbf", "C": 1.0, "gamma": 0.1},
    "rf": {"n_estimators": 100, "max_depth": 10},
    "logreg": {"C": 1.0},
}


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown learner kind {self.kind!r}")
        merged = dict(DEFAULT_HYPERPARAMETERS[self.kind])
        merged.update(self.hyperparameters)
        object.__setattr__(self, "hyperparameters", merged)


def default_spec(kind: str, seed: int = 0) -> ClassifierSpec:
    return ClassifierSpec(kind=kind, seed=seed)


def _build_estimator(spec: ClassifierSpec):
    hp = spec.hyperparameters
    if spec.kind == "cart":
        return DecisionTreeClassifier(
            criterion=hp["criterion"], max_depth=hp["max_depth"], random_state=spec.seed
        )
    if spec.kind == "knn":
        return KNeighborsClassifier(n_neighbors=hp["n_neighbors"])
    if spec.kind == "svm":
        kwargs = {"kernel": hp["kernel"], "C": hp["C"]}
        if hp["kernel"] != "linear":
            kwargs["gamma"] = hp["gamma"]
        return SVC(probability=True, random_state=spec.seed, **kwargs)
    if spec.kind == "rf":
        return RandomForestClassifier(
            n_estimators=hp["n_estimators"],
            max_depth=hp["max_depth"],
            random_state=spec.seed,
        )
    return LogisticRegression(C=hp["C"], max_iter=1000)


@dataclass(frozen=True)
class TrainedModel:
    """A fitted classifier bound to its feature schema.

    ``scaler`` holds optional normalization fitted on the training rows;
    when present it is applied inside predict_proba so the model file is
    self-contained.
    """

    spec: ClassifierSpec
    estimator: object
    feature_names: tuple[str, ...]
    scaler: object | None = None

    @property
    def kind(self) -> str:
        return self.spec.kind


def _as_array(X, feature_names=None):
    if isinstance(X, FeatureMatrix):
        return X.values, X.column_names
    return np.asarray(X, dtype=np.float64), feature_names


def fit(
    spec: ClassifierSpec, X, y=None, feature_names=None, scaler=None
) -> TrainedModel:
    """Deterministic fit; raises on single-class labels or non-finite data."""
    values, names = _as_array(X, feature_names)
    if y is None and isinstance(X, FeatureMatrix):
        y = X.labels
    y = np.asarray(y, dtype=np.int64)
    if values.shape[0] != y.shape[0]:
        raise ValueError("row/label count mismatch")
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite features")
    if np.unique(y).size < 2:
        raise ValueError("single-class training set")
    if names is None:
        names = tuple(f"f{i}" for i in range(values.shape[1]))
    if scaler is not None:
        values = scaler.apply(values)
    est = _build_estimator(spec)
    est.fit(values, y)
    return TrainedModel(spec=spec, estimator=est, feature_names=tuple(names), scaler=scaler)


def _check_columns(m: TrainedModel, X):
    values, names = _as_array(X, None)
    if isinstance(X, FeatureMatrix) and X.column_names != m.feature_names:
        missing = set(m.feature_names) - set(X.column_names)
        extra = set(X.column_names) - set(m.feature_names)
        raise ValueError(
            f"feature columns differ from training: missing {sorted(missing)}, "
            f"unexpected {sorted(extra)}"
        )
    if values.shape[1] != len(m.feature_names):
        raise ValueError(
            f"expected {len(m.feature_names)} columns, got {values.shape[1]}"
        )
    return values


def predict_proba(m: TrainedModel, X) -> np.ndarray:
    """n x 2 matrix over (real, fake); rows sum to 1."""
    values = _check_columns(m, X)
    if m.scaler is not None:
        values = m.scaler.apply(values)
    proba = m.estimator.predict_proba(values)
    classes = list(m.estimator.classes_)
    out = np.zeros((values.shape[0], 2))
    for col, cls in enumerate(classes):
        out[:, int(cls)] = proba[:, col]
    return out


def predict(m: TrainedModel, X) -> np.ndarray:
    """Labels under the fixed tie rule: probability of fake >= 0.5 -> fake."""
    return (predict_proba(m, X)[:, 1] >= 0.5).astype(np.int64)


def save_trained_model(m: TrainedModel, path) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": m.spec.kind,
        "hyperparameters": m.spec.hyperparameters,
        "seed": m.spec.seed,
        "feature_names": list(m.feature_names),
        "estimator": base64.b64encode(pickle.dumps(m.estimator, protocol=4)).decode(),
        "scaler": base64.b64encode(pickle.dumps(m.scaler, protocol=4)).decode(),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def load_trained_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format: {doc.get('format_version')}")
    return TrainedModel(
        spec=ClassifierSpec(
            kind=doc["kind"], hyperparameters=doc["hyperparameters"], seed=doc["seed"]
        ),
        estimator=pickle.loads(base64.b64decode(doc["estimator"])),
        feature_names=tuple(doc["feature_names"]),
        scaler=pickle.loads(base64.b64decode(doc["scaler"])),
    )


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray  # row -> fold id
    stratified: bool
    seed: int

    def __post_init__(self):
        a = np.asarray(self.assignments, dtype=np.int64)
        object.__setattr__(self, "assignments", a)
        sizes = np.bincount(a, minlength=self.k)
        if sizes.max() - sizes.min() > 1:
            raise ValueError(f"fold sizes differ by more than 1: {sizes.tolist()}")

    def folds(self):
        """Yield (train_idx, val_idx) per fold in fold order."""
        for f in range(self.k):
            val = np.flatnonzero(self.assignments == f)
            train = np.flatnonzero(self.assignments != f)
            yield train, val


def _derive_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([seed, *key]).generate_state(1)[0])


def stratified_kfold(y, k: int, seed: int = 0) -> FoldPlan:
    """Class-balanced folds: overall sizes within 1, per-class within 1.

    Each class's shuffled rows are dealt by a largest-remainder rule; the
    remainder slots go to the currently lightest folds so the overall size
    invariant holds no matter how class remainders stack up.
    """
    y = np.asarray(y)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(_derive_seed(seed))
    assignments = np.empty(y.shape[0], dtype=np.int64)
    load = np.zeros(k, dtype=np.int64)
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        if idx.size < k:
            raise ValueError(f"class {cls!r} has {idx.size} rows, fewer than k={k}")
        idx = rng.permutation(idx)
        counts = np.full(k, idx.size // k, dtype=np.int64)
        for _ in range(idx.size % k):
            f = int(np.argmin(load + counts))
            counts[f] += 1
        start = 0
        for f in range(k):
            assignments[idx[start : start + counts[f]]] = f
            start += counts[f]
        load += counts
    return FoldPlan(k=k, assignments=assignments, stratified=True, seed=seed)


@dataclass(frozen=True)
class CvResult:
    """Per-fold accuracies and out-of-fold probabilities.

    fold_scores: (repeats, k); oof_proba: (repeats, n) probability of
    fake, every row predicted exactly once per repeat by a model whose
    training fold excluded it; assignments: (repeats, n) fold ids.
    """

    fold_scores: np.ndarray
    oof_proba: np.ndarray
    assignments: np.ndarray

    def mean_oof(self) -> np.ndarray:
        return self.oof_proba.mean(axis=0)


def cross_validate(
    spec: ClassifierSpec, X, y=None, k: int = 10, repeats: int = 1, seed: int = 0
) -> CvResult:
    """Repeated stratified k-fold CV returning leakage-free OOF predictions."""
    values, names = _as_array(X, None)
    if y is None and isinstance(X, FeatureMatrix):
        y = X.labels
    y = np.asarray(y, dtype=np.int64)
    fold_scores = np.zeros((repeats, k))
    oof = np.zeros((repeats, y.size))
    plans = np.zeros((repeats, y.size), dtype=np.int64)
    for r in range(repeats):
        plan = stratified_kfold(y, k, seed=_derive_seed(seed, r))
        plans[r] = plan.assignments
        for f, (train, val) in enumerate(plan.folds()):
            model = fit(spec, values[train], y[train], feature_names=names)
            p = predict_proba(model, values[val])[:, 1]
            oof[r, val] = p
            fold_scores[r, f] = float(np.mean((p >= 0.5).astype(np.int64) == y[val]))
    return CvResult(fold_scores=fold_scores, oof_proba=oof, assignments=plans)


def candidate_grid(kind: str) -> list[dict]:
    """The admissible hyperparameter grid, in lexicographic order."""
    if kind == "cart":
        grid = [
            {"criterion": c, "max_depth": d}
            for c in ("entropy", "gini")
            for d in range(1, 22)
        ]
    elif kind == "knn":
        grid = [{"n_neighbors": n} for n in range(1, 22)]
    elif kind == "svm":
        cs = [i / 10 for i in range(1, 21)]
        gammas = [i / 10 for i in range(1, 11)]
        grid = [{"C": c, "kernel": "linear"} for c in cs]
        grid += [
            {"C": c, "gamma": g, "kernel": kern}
            for kern in ("poly", "rbf", "sigmoid")
            for c in cs
            for g in gammas
        ]
    elif kind == "rf":
        grid = [
            {"max_depth": d, "n_estimators": n}
            for d in (3, 5, 10, 15, 20)
            for n in (10, 50, 100, 200, 500)
        ]
    elif kind == "logreg":
        grid = [{"C": c} for c in (0.01, 0.1, 1.0, 10.0)]
    else:
        raise ValueError(f"unknown learner kind {kind!r}")
    grid.sort(key=lambda hp: tuple(sorted(hp.items())))
    return grid


def grid_search(kind: str, X, y=None, folds: int = 5, seed: int = 0) -> ClassifierSpec:
    """Best spec by mean stratified-CV accuracy; first-in-grid wins ties."""
    values, names = _as_array(X, None)
    if y is None and isinstance(X, FeatureMatrix):
        y = X.labels
    y = np.asarray(y, dtype=np.int64)
    grid = candidate_grid(kind)
    if not grid:
        raise ValueError("empty grid")
    plan = stratified_kfold(y, folds, seed=seed)
    best_spec, best_score = None, -1.0
    for hp in grid:
        spec = ClassifierSpec(kind=kind, hyperparameters=hp, seed=seed)
        accs = []
        for train, val in plan.folds():
            model = fit(spec, values[train], y[train], feature_names=names)
            accs.append(float(np.mean(predict(model, values[val]) == y[val])))
        score = float(np.mean(accs))
        if score > best_score:
            best_spec, best_score = spec, score
    return best_spec
