"""End-to-end pipeline: extract, select, train, evaluate, report.

Every step is a pure function of (inputs, config, seed) writing
deterministic artifacts; wall-clock timestamps only ever go to the run
log, so repeated runs with one config produce byte-identical outputs.
Configuration precedence is config file over command-line flags over
defaults.
"""

from __future__ import annotations

import base64
import importlib.resources
import json
import math
import pickle
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from rumorfuse import data as _data
from rumorfuse import ensembles as _ens
from rumorfuse import fusion as _fusion
from rumorfuse import learners as _learners
from rumorfuse import report as _report
from rumorfuse import selection as _selection
from rumorfuse import textfeat as _textfeat
from rumorfuse import visual as _visual
from rumorfuse.data import Dataset, DatasetError, FeatureMatrix
from rumorfuse.iqa.model import IqaModel, load_model

EXIT_SCHEMA = 2
EXIT_SINGLE_CLASS = 3
EXIT_FEATURE_MISMATCH = 4

FUSION_MODES = ("early", "late_equal", "late_optimized")


class PipelineError(RuntimeError):
    """Operator-facing failure carrying the documented exit code."""

    def __init__(self, message: str, exit_code: int = 1):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob of the pipeline, with reproducible protocol defaults."""

    dataset: str | None = None
    format: str = "jsonl"
    out: str = "out"
    seed: int = 0
    test_fraction: float = 0.2
    selection_threshold: float = 0.0
    top_k: int = 15
    grid_search: bool = False
    fusion: str = "early"
    ensembles: tuple[str, ...] = _ens.ENSEMBLE_KINDS
    require_image: bool = False
    cv_k: int = 10
    cv_repeats: int = 3
    report_folds: int = 5
    brisque_model: str | None = None
    niqe_model: str | None = None

    def __post_init__(self):
        if self.fusion not in FUSION_MODES:
            raise PipelineError(f"unknown fusion mode {self.fusion!r}")
        unknown = set(self.ensembles) - set(_ens.ENSEMBLE_KINDS)
        if unknown:
            raise PipelineError(f"unknown ensemble kinds: {sorted(unknown)}")
        object.__setattr__(self, "ensembles", tuple(self.ensembles))


_CONFIG_FIELDS = {f.name for f in fields(PipelineConfig)}


def load_config_file(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    unknown = set(doc) - _CONFIG_FIELDS
    if unknown:
        raise PipelineError(f"unknown config keys: {sorted(unknown)}")
    return doc


def resolve_config(flag_values: dict, config_path=None) -> PipelineConfig:
    """Defaults, overridden by flags, overridden by the config file."""
    merged = {k: v for k, v in flag_values.items() if v is not None and k in _CONFIG_FIELDS}
    if config_path is not None:
        merged.update(load_config_file(config_path))
    return PipelineConfig(**merged)


def default_iqa_models() -> tuple[IqaModel, IqaModel]:
    res = importlib.resources.files("rumorfuse").joinpath("resources/iqa")
    return load_model(res / "brisque_model.json"), load_model(res / "niqe_model.json")


def _iqa_models(cfg: PipelineConfig) -> tuple[IqaModel, IqaModel]:
    brisque, niqe = None, None
    if cfg.brisque_model or cfg.niqe_model:
        if cfg.brisque_model:
            brisque = load_model(cfg.brisque_model)
        if cfg.niqe_model:
            niqe = load_model(cfg.niqe_model)
    if brisque is None or niqe is None:
        db, dn = default_iqa_models()
        brisque = brisque or db
        niqe = niqe or dn
    return brisque, niqe


def _drop_imageless(d: Dataset, log) -> Dataset:
    kept = tuple(r for r in d.records if r.image_paths)
    dropped = len(d.records) - len(kept)
    if dropped:
        log(f"require-image: excluded {dropped} message(s) without images")
    if not kept:
        raise PipelineError("require-image left no messages", EXIT_SCHEMA)
    return Dataset(records=kept, provenance=f"{d.provenance} [with-image]")


def cmd_extract(cfg: PipelineConfig, log=print) -> dict:
    """Write textual.csv and visual.csv (+ modality sidecars) under out/."""
    if not cfg.dataset:
        raise PipelineError("extract requires a dataset path", EXIT_SCHEMA)
    try:
        d = _data.load_dataset(cfg.dataset, cfg.format)
    except DatasetError as e:
        raise PipelineError(f"dataset schema failure: {e}", EXIT_SCHEMA) from e
    for rej in d.rejections:
        log(f"rejected record at position {rej.position}: {rej.reason}")
    if cfg.require_image:
        d = _drop_imageless(d, log)
    brisque_model, niqe_model = _iqa_models(cfg)
    tm = _textfeat.textual_feature_matrix(d)
    vm = _visual.visual_feature_matrix(d, brisque_model, niqe_model)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _data.save_feature_matrix(tm, out / "textual.csv")
    _data.save_feature_matrix(vm, out / "visual.csv")
    log(f"textual: {tm.n_rows} rows x {tm.n_cols} columns -> {out / 'textual.csv'}")
    log(f"visual: {vm.n_rows} rows x {vm.n_cols} columns -> {out / 'visual.csv'}")
    return {"textual_columns": tm.n_cols, "visual_columns": vm.n_cols, "rows": tm.n_rows}


def _load_matrices(cfg: PipelineConfig) -> tuple[FeatureMatrix, FeatureMatrix]:
    out = Path(cfg.out)
    tex_path = out / "textual.csv"
    vis_path = out / "visual.csv"
    for p in (tex_path, vis_path):
        if not p.exists():
            raise PipelineError(f"missing feature matrix {p}; run extract first", EXIT_SCHEMA)
    tm = _data.load_feature_matrix(tex_path)
    vm = _data.load_feature_matrix(vis_path)
    if tm.row_ids != vm.row_ids:
        raise PipelineError("textual and visual matrices cover different rows", EXIT_SCHEMA)
    return tm, vm


def cmd_select(cfg: PipelineConfig, log=print) -> _selection.FeatureRanking:
    """Rank the textual columns of out/textual.csv; write ranking.csv."""
    tm, _ = _load_matrices(cfg)
    if tm.labels is None:
        raise PipelineError("selection needs a labeled matrix", EXIT_SCHEMA)
    ranking = _selection.select_features(
        tm, threshold=cfg.selection_threshold, top_k=cfg.top_k
    )
    out = Path(cfg.out)
    _selection.save_ranking(ranking, out / "ranking.csv")
    log(f"selected {len(ranking.selected)} of {len(ranking.entries)} textual columns")
    for name in ranking.selected:
        log(f"  {name}")
    return ranking


def _split_indices(y: np.ndarray, test_fraction: float, seed: int):
    n_test = math.floor(test_fraction * y.size + 1e-9)
    if n_test == 0 or n_test == y.size:
        raise PipelineError(f"degenerate split at fraction {test_fraction}")
    test_idx, train_idx = _ens.stratified_take(y, n_test, seed=seed)
    return train_idx, test_idx


@dataclass(frozen=True)
class FittedPipeline:
    """Everything cmd_train fits, in predictable order for serialization."""

    config: PipelineConfig
    selected: tuple[str, ...]
    scaler: _fusion.Scaler | None
    base_models: tuple
    ensembles: dict
    late: dict | None
    feature_names: tuple[str, ...]


def _save_late_fuser(fuser: _fusion.LateFusionModel, path) -> None:
    doc = {
        "format_version": 1,
        "mode": fuser.mode,
        "weight_model": None
        if fuser.weight_model is None
        else base64.b64encode(pickle.dumps(fuser.weight_model, protocol=4)).decode(),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def _load_late_fuser(path) -> _fusion.LateFusionModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    wm = doc["weight_model"]
    return _fusion.LateFusionModel(
        mode=doc["mode"],
        weight_model=None if wm is None else pickle.loads(base64.b64decode(wm)),
    )


def _transform_early(tm: FeatureMatrix, vm: FeatureMatrix, selected, scaler=None):
    fused = _fusion.early_fuse(tm.select(selected), vm)
    if scaler is None:
        scaler = _fusion.fit_scaler(fused)
    return _fusion.apply_scaler(scaler, fused), scaler


def cmd_train(cfg: PipelineConfig, log=print) -> FittedPipeline:
    """Select, fuse, fit base models and requested ensembles, report.

    The train/test split follows the configured fraction (default
    0.8/0.2, stratified). Selection and all fitting see training rows
    only; the held-out rows are evaluated at the end and the report
    written under out/report/.
    """
    tm, vm = _load_matrices(cfg)
    if tm.labels is None:
        raise PipelineError("training needs labeled matrices", EXIT_SCHEMA)
    y = tm.labels
    if np.unique(y).size < 2:
        raise PipelineError("single-class training data", EXIT_SINGLE_CLASS)
    train_idx, test_idx = _split_indices(y, cfg.test_fraction, cfg.seed)
    tm_train, tm_test = tm.take_rows(train_idx), tm.take_rows(test_idx)
    vm_train, vm_test = vm.take_rows(train_idx), vm.take_rows(test_idx)
    if np.unique(tm_train.labels).size < 2:
        raise PipelineError("single-class training data", EXIT_SINGLE_CLASS)

    ranking = _selection.select_features(
        tm_train, threshold=cfg.selection_threshold, top_k=cfg.top_k
    )
    selected = ranking.selected
    if not selected:
        raise PipelineError("feature selection kept no textual columns")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _selection.save_ranking(ranking, out / "ranking.csv")
    log(f"selected textual columns: {', '.join(selected)}")

    models_dir = out / "models"
    models_dir.mkdir(parents=True, exist_ok=True)
    report_rows: dict[str, _report.Metrics] = {}
    rocs: dict[str, _report.RocCurve] = {}
    folds_rows: list[tuple] = []
    y_train, y_test = tm_train.labels, tm_test.labels

    late = None
    base_models = ()
    fitted_ensembles: dict[str, _ens.EnsembleModel] = {}
    scaler = None

    if cfg.fusion == "early":
        fused_train, scaler = _transform_early(tm_train, vm_train, selected)
        fused_test, _ = _transform_early(tm_test, vm_test, selected, scaler)
        feature_names = fused_train.column_names

        specs = []
        for kind in _ens.BASE_ORDER:
            if cfg.grid_search:
                spec = _learners.grid_search(
                    kind, fused_train, y_train, folds=cfg.report_folds, seed=cfg.seed
                )
                log(f"grid search {kind}: {spec.hyperparameters}")
            else:
                spec = _learners.default_spec(kind, seed=cfg.seed)
            specs.append(spec)

        base_models = tuple(
            _learners.fit(s, fused_train, y_train) for s in specs
        )
        for model in base_models:
            _learners.save_trained_model(model, models_dir / f"base_{model.kind}.json")
            cv = _learners.cross_validate(
                model.spec, fused_train, y_train, k=cfg.report_folds, repeats=1, seed=cfg.seed
            )
            for f, acc in enumerate(cv.fold_scores[0]):
                folds_rows.append((model.kind, 0, f, float(acc)))
            p = _learners.predict_proba(model, fused_test)[:, 1]
            report_rows[model.kind] = _report.classification_metrics(
                y_test, (p >= 0.5).astype(np.int64)
            )
            rocs[model.kind] = _report.roc_curve(y_test, p)

        for ens_kind in cfg.ensembles:
            e = _ens.fit_ensemble(
                ens_kind, specs, fused_train, y_train,
                k=min(cfg.cv_k, int(np.min(np.bincount(y_train)))),
                repeats=cfg.cv_repeats, seed=cfg.seed,
            )
            fitted_ensembles[ens_kind] = e
            _ens.save_ensemble(e, models_dir / ens_kind)
            labels, fused_p = _ens.ensemble_predict(e, fused_test)
            report_rows[ens_kind] = _report.classification_metrics(y_test, labels)
            rocs[ens_kind] = _report.roc_curve(y_test, fused_p[:, 1])

        rf_model = base_models[_ens.BASE_ORDER.index("rf")]
        importance = _report.feature_importance(rf_model)
        distributions = _report.class_distribution_summary(fused_train)
    else:
        # late fusion: one RF per modality (textual block pre-selected);
        # each model carries its own min-max scaler so files stay
        # self-contained for later evaluation
        tm_sel_train = tm_train.select(selected)
        tm_sel_test = tm_test.select(selected)
        rf_spec = _learners.default_spec("rf", seed=cfg.seed)
        rf_tex = _learners.fit(
            rf_spec, tm_sel_train, y_train, scaler=_fusion.fit_scaler(tm_sel_train)
        )
        rf_vis = _learners.fit(
            rf_spec, vm_train, y_train, scaler=_fusion.fit_scaler(vm_train)
        )
        _learners.save_trained_model(rf_tex, models_dir / "late_rf_textual.json")
        _learners.save_trained_model(rf_vis, models_dir / "late_rf_visual.json")
        feature_names = tm_sel_train.column_names + vm_train.column_names
        p_tex_test = _learners.predict_proba(rf_tex, tm_sel_test)[:, 1]
        p_vis_test = _learners.predict_proba(rf_vis, vm_test)[:, 1]
        if cfg.fusion == "late_optimized":
            cv_tex = _learners.cross_validate(
                rf_spec, tm_sel_train, y_train, k=cfg.report_folds, repeats=1, seed=cfg.seed
            )
            cv_vis = _learners.cross_validate(
                rf_spec, vm_train, y_train, k=cfg.report_folds, repeats=1, seed=cfg.seed
            )
            fuser = _fusion.fit_late_fuse_optimized(
                cv_tex.mean_oof(), cv_vis.mean_oof(), y_train
            )
            for f, acc in enumerate(cv_tex.fold_scores[0]):
                folds_rows.append(("rf_textual", 0, f, float(acc)))
            for f, acc in enumerate(cv_vis.fold_scores[0]):
                folds_rows.append(("rf_visual", 0, f, float(acc)))
        else:
            fuser = _fusion.LateFusionModel(mode="equal")
        _save_late_fuser(fuser, models_dir / "late_fusion.json")
        p_fused = fuser.fuse(p_tex_test, p_vis_test)
        name = f"late_{fuser.mode}"
        report_rows[name] = _report.classification_metrics(
            y_test, _fusion.labels_from_proba(p_fused)
        )
        rocs[name] = _report.roc_curve(y_test, p_fused)
        report_rows["rf_textual"] = _report.classification_metrics(
            y_test, (p_tex_test >= 0.5).astype(np.int64)
        )
        report_rows["rf_visual"] = _report.classification_metrics(
            y_test, (p_vis_test >= 0.5).astype(np.int64)
        )
        late = {"mode": fuser.mode, "rf_textual": rf_tex, "rf_visual": rf_vis, "fuser": fuser}
        base_models = (rf_tex, rf_vis)
        importance = _report.feature_importance(rf_tex)
        distributions = _report.class_distribution_summary(tm_sel_train)

    manifest = {
        "format_version": 1,
        "fusion": cfg.fusion,
        "seed": cfg.seed,
        "selected_textual": list(selected),
        "feature_names": list(feature_names),
        "scaler": None
        if scaler is None
        else {"min": scaler.col_min.tolist(), "max": scaler.col_max.tolist()},
        "base_models": [f"base_{k}.json" for k in _ens.BASE_ORDER]
        if cfg.fusion == "early"
        else ["late_rf_textual.json", "late_rf_visual.json"],
        "ensembles": sorted(fitted_ensembles),
    }
    with open(models_dir / "pipeline.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")

    written = _report.write_report_dir(
        out / "report",
        report_rows,
        rocs=rocs,
        importance=importance,
        distributions=distributions,
        folds=folds_rows,
    )
    log(f"report files: {', '.join(written)}")
    for name in sorted(report_rows):
        m = report_rows[name]
        log(
            f"{name}: accuracy {m.accuracy:.4f} precision {m.precision:.4f} "
            f"recall {m.recall:.4f} f1 {m.f1:.4f}"
        )
    return FittedPipeline(
        config=cfg,
        selected=selected,
        scaler=scaler,
        base_models=base_models,
        ensembles=fitted_ensembles,
        late=late,
        feature_names=tuple(feature_names),
    )


def cmd_evaluate(cfg: PipelineConfig, log=print) -> dict[str, _report.Metrics]:
    """Re-evaluate saved models on the matrices in out/ (full rows).

    Applies the training-time selection and scaler from pipeline.json;
    exits with the feature-mismatch code when the matrices do not carry
    the training columns.
    """
    out = Path(cfg.out)
    models_dir = out / "models"
    manifest_path = models_dir / "pipeline.json"
    if not manifest_path.exists():
        raise PipelineError(f"missing {manifest_path}; run train first", EXIT_SCHEMA)
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    tm, vm = _load_matrices(cfg)
    if tm.labels is None:
        raise PipelineError("evaluation needs labeled matrices", EXIT_SCHEMA)
    missing = [c for c in manifest["selected_textual"] if c not in tm.column_names]
    if missing:
        raise PipelineError(
            f"feature-name mismatch: matrix lacks columns {missing}", EXIT_FEATURE_MISMATCH
        )
    y = tm.labels
    report_rows: dict[str, _report.Metrics] = {}
    rocs: dict[str, _report.RocCurve] = {}
    importance = None

    if manifest["fusion"] == "early":
        scaler = _fusion.Scaler(
            col_min=np.array(manifest["scaler"]["min"]),
            col_max=np.array(manifest["scaler"]["max"]),
        )
        fused = _fusion.early_fuse(tm.select(tuple(manifest["selected_textual"])), vm)
        if list(fused.column_names) != manifest["feature_names"]:
            raise PipelineError(
                "feature-name mismatch between matrices and trained models",
                EXIT_FEATURE_MISMATCH,
            )
        X = _fusion.apply_scaler(scaler, fused)
        for fname in manifest["base_models"]:
            model = _learners.load_trained_model(models_dir / fname)
            p = _learners.predict_proba(model, X)[:, 1]
            report_rows[model.kind] = _report.classification_metrics(
                y, (p >= 0.5).astype(np.int64)
            )
            rocs[model.kind] = _report.roc_curve(y, p)
            if model.kind == "rf":
                importance = _report.feature_importance(model)
        for ens_kind in manifest["ensembles"]:
            e = _ens.load_ensemble(models_dir / ens_kind)
            labels, fused_p = _ens.ensemble_predict(e, X)
            report_rows[ens_kind] = _report.classification_metrics(y, labels)
            rocs[ens_kind] = _report.roc_curve(y, fused_p[:, 1])
    else:
        rf_tex = _learners.load_trained_model(models_dir / "late_rf_textual.json")
        rf_vis = _learners.load_trained_model(models_dir / "late_rf_visual.json")
        fuser = _load_late_fuser(models_dir / "late_fusion.json")
        tm_sel = tm.select(tuple(manifest["selected_textual"]))
        p_tex = _learners.predict_proba(rf_tex, tm_sel)[:, 1]
        p_vis = _learners.predict_proba(rf_vis, vm)[:, 1]
        p_fused = fuser.fuse(p_tex, p_vis)
        name = f"late_{fuser.mode}"
        report_rows[name] = _report.classification_metrics(
            y, _fusion.labels_from_proba(p_fused)
        )
        rocs[name] = _report.roc_curve(y, p_fused)
        importance = _report.feature_importance(rf_tex)

    written = _report.write_report_dir(
        out / "report_eval", report_rows, rocs=rocs, importance=importance
    )
    log(f"evaluation report files: {', '.join(written)}")
    for name in sorted(report_rows):
        log(f"{name}: accuracy {report_rows[name].accuracy:.4f}")
    return report_rows


def cmd_report(cfg: PipelineConfig, log=print) -> str:
    """Condense out/report/ into a human-readable summary.txt."""
    report_dir = Path(cfg.out) / "report"
    metrics_path = report_dir / "metrics.json"
    if not metrics_path.exists():
        raise PipelineError(f"missing {metrics_path}; run train first", EXIT_SCHEMA)
    with open(metrics_path, encoding="utf-8") as fh:
        metrics = json.load(fh)
    lines = ["model,accuracy,precision,recall,f1"]
    for name in sorted(metrics):
        m = metrics[name]
        lines.append(
            f"{name},{m['accuracy']:.4f},{m['precision']:.4f},"
            f"{m['recall']:.4f},{m['f1']:.4f}"
        )
    summary = "\n".join(lines) + "\n"
    with open(report_dir / "summary.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(summary)
    log(summary.rstrip("\n"))
    return summary
