"""Command-line pipeline: config precedence, exit codes, artifact round-trips."""

import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import simple_record, write_jsonl_dataset
from rumorfuse.pipeline import (
    EXIT_FEATURE_MISMATCH,
    EXIT_SCHEMA,
    EXIT_SINGLE_CLASS,
    PipelineConfig,
    PipelineError,
    load_config_file,
    resolve_config,
)


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "rumorfuse.cli", *map(str, args)],
        capture_output=True,
        text=True,
    )


def test_resolve_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"top_k": 3, "seed": 42}))
    # config file wins over flags; flags win over defaults
    resolved = resolve_config({"top_k": 9, "test_fraction": 0.3}, cfg)
    assert resolved.top_k == 3
    assert resolved.seed == 42
    assert resolved.test_fraction == 0.3
    assert resolved.fusion == "early"  # untouched default


def test_resolve_config_ignores_none_flags():
    resolved = resolve_config({"top_k": None, "seed": None})
    assert resolved.top_k == 15 and resolved.seed == 0


def test_config_defaults_follow_protocol():
    cfg = PipelineConfig()
    assert cfg.test_fraction == 0.2
    assert cfg.top_k == 15
    assert cfg.cv_k == 10
    assert cfg.cv_repeats == 3
    assert not cfg.grid_search


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nope": 1}))
    with pytest.raises(PipelineError, match="nope"):
        load_config_file(cfg)


def test_invalid_fusion_mode_rejected():
    with pytest.raises(PipelineError, match="fusion"):
        PipelineConfig(fusion="mid")
    with pytest.raises(PipelineError, match="ensemble"):
        PipelineConfig(ensembles=("bagging",))


@pytest.fixture(scope="module")
def balanced_dataset(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("data")
    records = []
    rng = np.random.default_rng(0)
    for i in range(40):
        fake = i % 2 == 1
        text = (
            f"BREAKING!!! shocking disaster at place {i}!!! you must share this!!"
            if fake
            else f"Officials published a calm verified update number {i}."
        )
        records.append(
            simple_record(
                i,
                label="fake" if fake else "real",
                text=text,
                retweet_count=int(rng.integers(30, 90)) if fake else int(rng.integers(0, 10)),
            )
        )
    return write_jsonl_dataset(tmp / "d.jsonl", records)


def test_extract_select_train_evaluate_report(tmp_path, balanced_dataset):
    out = tmp_path / "run"
    r = run_cli("extract", "--dataset", balanced_dataset, "--out", out)
    assert r.returncode == 0, r.stderr
    assert (out / "textual.csv").is_file()
    assert (out / "visual.csv").is_file()

    r = run_cli("select", "--out", out, "--top-k", "5")
    assert r.returncode == 0, r.stderr
    ranking = (out / "ranking.csv").read_text().splitlines()
    assert ranking[0] == "column_name,gain_ratio,selected"
    assert sum(line.endswith(",1") for line in ranking[1:]) == 5

    r = run_cli("train", "--out", out, "--fusion", "early", "--ensemble", "none")
    assert r.returncode == 0, r.stderr
    manifest = json.loads((out / "models" / "pipeline.json").read_text())
    assert manifest["fusion"] == "early"
    assert (out / "report" / "metrics.json").is_file()
    assert (out / "report" / "folds.csv").is_file()

    r = run_cli("evaluate", "--out", out)
    assert r.returncode == 0, r.stderr
    metrics = json.loads((out / "report_eval" / "metrics.json").read_text())
    assert set(metrics) >= {"cart", "knn", "svm", "rf"}

    r = run_cli("report", "--out", out)
    assert r.returncode == 0, r.stderr
    summary = (out / "report" / "summary.txt").read_text()
    assert "accuracy" in summary


def test_exit_code_schema_violation(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x", "text": "missing everything"}\n')
    r = run_cli("extract", "--dataset", bad, "--out", tmp_path / "o")
    assert r.returncode == EXIT_SCHEMA


def test_exit_code_single_class(tmp_path):
    data = write_jsonl_dataset(
        tmp_path / "single.jsonl", [simple_record(i, label="real") for i in range(12)]
    )
    out = tmp_path / "o"
    assert run_cli("extract", "--dataset", data, "--out", out).returncode == 0
    r = run_cli("train", "--out", out)
    assert r.returncode == EXIT_SINGLE_CLASS


def test_exit_code_feature_mismatch(tmp_path, balanced_dataset):
    out = tmp_path / "run"
    assert run_cli("extract", "--dataset", balanced_dataset, "--out", out).returncode == 0
    assert run_cli("select", "--out", out).returncode == 0
    assert run_cli("train", "--out", out, "--ensemble", "none").returncode == 0
    # drop a column the trained manifest requires
    lines = (out / "textual.csv").read_text().splitlines()
    header = lines[0].split(",")
    drop = header.index("n_exclaim")
    rewritten = [
        ",".join(c for j, c in enumerate(line.split(",")) if j != drop) for line in lines
    ]
    (out / "textual.csv").write_text("\n".join(rewritten) + "\n")
    r = run_cli("evaluate", "--out", out)
    assert r.returncode == EXIT_FEATURE_MISMATCH
    assert "n_exclaim" in r.stderr


def test_require_image_logs_exclusions(tmp_path, balanced_dataset):
    out = tmp_path / "o"
    r = run_cli(
        "extract", "--dataset", balanced_dataset, "--out", out, "--require-image"
    )
    assert r.returncode != 0  # every record is imageless -> nothing left
    partial = tmp_path / "partial.jsonl"
    # reuse bundled mini dataset images via absolute paths
    from importlib.resources import files

    img = str(files("rumorfuse") / "resources" / "mini" / "images" / "img_00.png")
    recs = [simple_record(i, label="fake" if i % 2 else "real") for i in range(10)]
    for i in (0, 1, 2, 3):
        recs[i]["image_paths"] = [img]
    write_jsonl_dataset(partial, recs)
    r = run_cli("extract", "--dataset", partial, "--out", tmp_path / "p", "--require-image")
    assert r.returncode == 0
    assert "6" in r.stdout + r.stderr  # six imageless exclusions reported


def test_timestamps_only_in_run_log(tmp_path, balanced_dataset):
    out = tmp_path / "run"
    for args in (
        ("extract", "--dataset", balanced_dataset, "--out", out),
        ("select", "--out", out),
        ("train", "--out", out, "--ensemble", "none"),
    ):
        assert run_cli(*args).returncode == 0
    assert (out / "run.log").is_file()
    log = (out / "run.log").read_text()
    assert any(ch.isdigit() for ch in log)
    # no other artifact embeds a wall-clock timestamp: rerunning from scratch
    # in a different second yields byte-identical files (checked in acceptance)


def test_config_file_flag(tmp_path, balanced_dataset):
    out = tmp_path / "run"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"top_k": 4}))
    assert run_cli("extract", "--dataset", balanced_dataset, "--out", out).returncode == 0
    r = run_cli("select", "--out", out, "--top-k", "9", "--config", cfg)
    assert r.returncode == 0, r.stderr
    ranking = (out / "ranking.csv").read_text().splitlines()
    assert sum(line.endswith(",1") for line in ranking[1:]) == 4  # config beat the flag
