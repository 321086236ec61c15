"""Command-line interface: extract / select / train / evaluate / report.

Runs are reproducible: everything derives from the config and seed, and
wall-clock timestamps are confined to out/run.log. Configuration
precedence is config file > flags > built-in defaults.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from rumorfuse import pipeline as _pipeline
from rumorfuse.data import DatasetError
from rumorfuse.ensembles import ENSEMBLE_KINDS
from rumorfuse.pipeline import EXIT_SCHEMA, PipelineError, resolve_config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rumorfuse",
        description="Multimodal rumor verification: feature extraction, "
        "selection, fusion, ensemble training, evaluation and reporting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (overrides flags)")
        p.add_argument("--out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, help="global random seed (default: 0)")

    p_extract = sub.add_parser("extract", help="compute textual and visual feature matrices")
    common(p_extract)
    p_extract.add_argument("--dataset", help="path to the message file")
    p_extract.add_argument("--format", choices=("jsonl", "csv"), help="dataset format")
    p_extract.add_argument(
        "--require-image",
        action="store_true",
        default=None,
        help="drop messages without image attachments",
    )
    p_extract.add_argument("--brisque-model", help="override bundled BRISQUE model file")
    p_extract.add_argument("--niqe-model", help="override bundled NIQE model file")

    p_select = sub.add_parser("select", help="rank textual features by gain ratio")
    common(p_select)
    p_select.add_argument("--threshold", type=float, help="gain-ratio cutoff (default: 0)")
    p_select.add_argument("--top-k", type=int, help="max selected features (default: 15)")

    p_train = sub.add_parser("train", help="select, fuse, fit models and ensembles")
    common(p_train)
    p_train.add_argument(
        "--fusion", choices=_pipeline.FUSION_MODES, help="fusion mode (default: early)"
    )
    p_train.add_argument(
        "--ensemble",
        action="append",
        choices=ENSEMBLE_KINDS + ("all", "none"),
        help="ensemble kind to fit (repeatable; default: all)",
    )
    p_train.add_argument(
        "--grid-search",
        action="store_true",
        default=None,
        help="grid-search base hyperparameters (default: off)",
    )
    p_train.add_argument("--test-fraction", type=float, help="held-out fraction (default: 0.2)")
    p_train.add_argument("--threshold", type=float, help="gain-ratio cutoff (default: 0)")
    p_train.add_argument("--top-k", type=int, help="max selected features (default: 15)")

    p_eval = sub.add_parser("evaluate", help="apply saved models to the current matrices")
    common(p_eval)

    p_report = sub.add_parser("report", help="summarize report files")
    common(p_report)
    return parser


def _flag_values(args: argparse.Namespace) -> dict:
    mapping = {
        "dataset": "dataset",
        "format": "format",
        "out": "out",
        "seed": "seed",
        "require_image": "require_image",
        "brisque_model": "brisque_model",
        "niqe_model": "niqe_model",
        "threshold": "selection_threshold",
        "top_k": "top_k",
        "fusion": "fusion",
        "grid_search": "grid_search",
        "test_fraction": "test_fraction",
    }
    values = {}
    for attr, key in mapping.items():
        if hasattr(args, attr) and getattr(args, attr) is not None:
            values[key] = getattr(args, attr)
    ens = getattr(args, "ensemble", None)
    if ens:
        if "none" in ens:
            values["ensembles"] = ()
        elif "all" in ens:
            values["ensembles"] = ENSEMBLE_KINDS
        else:
            values["ensembles"] = tuple(dict.fromkeys(ens))
    return values


def _make_logger(out: str):
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / "run.log"

    def log(message: str) -> None:
        print(message)
        stamp = time.strftime("%Y-%m-%dT%H:%M:%S")
        with open(log_path, "a", encoding="utf-8") as fh:
            fh.write(f"{stamp} {message}\n")

    return log


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(_flag_values(args), args.config)
        log = _make_logger(cfg.out)
        if args.command == "extract":
            _pipeline.cmd_extract(cfg, log=log)
        elif args.command == "select":
            _pipeline.cmd_select(cfg, log=log)
        elif args.command == "train":
            _pipeline.cmd_train(cfg, log=log)
        elif args.command == "evaluate":
            _pipeline.cmd_evaluate(cfg, log=log)
        elif args.command == "report":
            _pipeline.cmd_report(cfg, log=log)
        else:  # pragma: no cover - argparse enforces the choices
            raise PipelineError(f"unknown command {args.command!r}")
    except PipelineError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except DatasetError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    return 0


if __name__ == "__main__":
    sys.exit(main())
