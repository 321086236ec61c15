"""Domain types, dataset ingestion, deterministic splitting and persistence.

Labels are encoded fake=1, real=0 throughout: "fake" is the positive class
for precision/recall. Loading, splitting and matrix persistence are pure
functions of their inputs (and seed), so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

LABEL_REAL = 0
LABEL_FAKE = 1

_LABEL_NAMES = {"real": LABEL_REAL, "fake": LABEL_FAKE}

_USER_COUNT_FIELDS = ("followers", "friends", "posts", "times_listed", "likes_given")
_USER_BOOL_FIELDS = ("verified", "has_profile_image", "has_homepage_url")


class DatasetError(ValueError):
    """Raised when a dataset file cannot be turned into a valid Dataset."""


@dataclass(frozen=True)
class UserMeta:
    """Author-profile metadata attached to a message."""

    followers: int = 0
    friends: int = 0
    posts: int = 0
    times_listed: int = 0
    likes_given: int = 0
    verified: bool = False
    has_profile_image: bool = False
    has_homepage_url: bool = False
    was_missing: bool = False  # any profile field absent at parse time

    def __post_init__(self):
        for name in _USER_COUNT_FIELDS:
            if getattr(self, name) < 0:
                raise ValueError(f"user field {name!r} must be non-negative")


@dataclass(frozen=True)
class MessageRecord:
    """One social-media post: text, social context, attached images, label."""

    id: str
    event_id: str
    text: str
    user: UserMeta
    image_paths: tuple[str, ...] = ()
    retweet_count: int = 0
    like_count: int = 0
    label: int | None = None  # 0=real, 1=fake, None at inference

    def __post_init__(self):
        if self.retweet_count < 0 or self.like_count < 0:
            raise ValueError("retweet/like counts must be non-negative")
        if self.label not in (None, LABEL_REAL, LABEL_FAKE):
            raise ValueError(f"label must be 0, 1 or None, got {self.label!r}")


@dataclass(frozen=True)
class Rejection:
    """A malformed input row, kept so nothing is dropped silently."""

    position: int  # 1-based line/row number in the source file
    reason: str


@dataclass(frozen=True)
class Dataset:
    """An ordered, immutable collection of message records.

    ``rejections`` lists rows that failed schema validation;
    ``image_downgrades`` lists (message id, path) pairs whose image path did
    not resolve and was dropped from the record.
    """

    records: tuple[MessageRecord, ...]
    provenance: str = ""
    rejections: tuple[Rejection, ...] = ()
    image_downgrades: tuple[tuple[str, str], ...] = ()

    def __len__(self):
        return len(self.records)

    def labels(self) -> np.ndarray:
        """Label vector; raises if any record is unlabeled."""
        out = []
        for r in self.records:
            if r.label is None:
                raise DatasetError(f"record {r.id!r} has no label")
            out.append(r.label)
        return np.asarray(out, dtype=np.int64)


def _parse_user(raw, problems: list[str]) -> UserMeta:
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        problems.append("user must be an object")
        return UserMeta(was_missing=True)
    kwargs = {}
    missing = False
    for name in _USER_COUNT_FIELDS:
        val = raw.get(name)
        if val is None:
            missing = True
            val = 0
        if isinstance(val, bool) or not isinstance(val, int):
            problems.append(f"user.{name} must be an integer")
            return UserMeta(was_missing=True)
        if val < 0:
            problems.append(f"user.{name} must be non-negative")
            return UserMeta(was_missing=True)
        kwargs[name] = val
    for name in _USER_BOOL_FIELDS:
        val = raw.get(name)
        if val is None:
            missing = True
            val = False
        if not isinstance(val, bool):
            problems.append(f"user.{name} must be a boolean")
            return UserMeta(was_missing=True)
        kwargs[name] = val
    return UserMeta(was_missing=missing, **kwargs)


def _parse_record(obj: dict, problems: list[str]) -> MessageRecord | None:
    if not isinstance(obj, dict):
        problems.append("row is not an object")
        return None
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid:
        problems.append("missing or invalid 'id'")
    event_id = obj.get("event_id")
    if not isinstance(event_id, str) or not event_id:
        problems.append("missing or invalid 'event_id'")
    text = obj.get("text")
    if not isinstance(text, str):
        problems.append("missing or invalid 'text'")

    label_raw = obj.get("label")
    label = None
    if label_raw is not None:
        if label_raw not in _LABEL_NAMES:
            problems.append(f"label must be 'real', 'fake' or null, got {label_raw!r}")
        else:
            label = _LABEL_NAMES[label_raw]

    counts = {}
    for name in ("retweet_count", "like_count"):
        val = obj.get(name, 0)
        if isinstance(val, bool) or not isinstance(val, int) or val < 0:
            problems.append(f"{name} must be a non-negative integer")
            val = 0
        counts[name] = val

    paths_raw = obj.get("image_paths", [])
    if paths_raw is None:
        paths_raw = []
    if not isinstance(paths_raw, list) or not all(isinstance(p, str) for p in paths_raw):
        problems.append("image_paths must be a list of strings")
        paths_raw = []

    user = _parse_user(obj.get("user"), problems)
    if problems:
        return None
    return MessageRecord(
        id=rid,
        event_id=event_id,
        text=text,
        user=user,
        image_paths=tuple(paths_raw),
        retweet_count=counts["retweet_count"],
        like_count=counts["like_count"],
        label=label,
    )


def _csv_row_to_obj(row: dict) -> dict:
    """Flattened CSV row -> the JSONL-shaped dict the validator expects."""

    def _int(name):
        val = row.get(name, "")
        if val is None or val == "":
            return None
        return int(val)

    def _bool(name):
        val = row.get(name, "")
        if val is None or val == "":
            return None
        return val.strip().lower() in ("1", "true", "yes")

    obj = {
        "id": row.get("id"),
        "event_id": row.get("event_id"),
        "text": row.get("text"),
        "label": row.get("label") or None,
        "retweet_count": _int("retweet_count") or 0,
        "like_count": _int("like_count") or 0,
        "user": {},
        "image_paths": [p for p in (row.get("image_paths") or "").split(";") if p],
    }
    for name in _USER_COUNT_FIELDS:
        val = _int(name)
        if val is not None:
            obj["user"][name] = val
    for name in _USER_BOOL_FIELDS:
        val = _bool(name)
        if val is not None:
            obj["user"][name] = val
    return obj


def load_dataset(path: str, format: str = "jsonl") -> Dataset:
    """Load messages from a JSONL or CSV file.

    Malformed rows are collected into ``Dataset.rejections``. Image paths are
    resolved relative to the dataset file; paths that do not resolve are
    dropped from the record and listed in ``Dataset.image_downgrades``.

    Raises ``DatasetError`` on unreadable files, zero valid records or
    duplicate message ids.
    """
    if format not in ("jsonl", "csv"):
        raise DatasetError(f"unknown dataset format {format!r}")
    if not os.path.isfile(path):
        raise DatasetError(f"dataset file not found: {path}")
    base_dir = os.path.dirname(os.path.abspath(path))

    raw_rows: list[tuple[int, object]] = []
    rejections: list[Rejection] = []
    if format == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    raw_rows.append((lineno, json.loads(line)))
                except json.JSONDecodeError as exc:
                    rejections.append(Rejection(lineno, f"invalid JSON: {exc.msg}"))
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            for rowno, row in enumerate(reader, start=2):  # row 1 is the header
                try:
                    raw_rows.append((rowno, _csv_row_to_obj(row)))
                except (TypeError, ValueError) as exc:
                    rejections.append(Rejection(rowno, f"invalid CSV row: {exc}"))

    records: list[MessageRecord] = []
    downgrades: list[tuple[str, str]] = []
    seen_ids: set[str] = set()
    for position, obj in raw_rows:
        problems: list[str] = []
        record = _parse_record(obj, problems)
        if record is None:
            rejections.append(Rejection(position, "; ".join(problems)))
            continue
        if record.id in seen_ids:
            raise DatasetError(f"duplicate message id {record.id!r} at row {position}")
        seen_ids.add(record.id)

        kept_paths = []
        for p in record.image_paths:
            resolved = p if os.path.isabs(p) else os.path.join(base_dir, p)
            if os.path.isfile(resolved):
                kept_paths.append(resolved)
            else:
                downgrades.append((record.id, p))
        records.append(replace(record, image_paths=tuple(kept_paths)))

    if not records:
        raise DatasetError(f"zero valid records in {path}")
    return Dataset(
        records=tuple(records),
        provenance=f"{path} ({format})",
        rejections=tuple(rejections),
        image_downgrades=tuple(downgrades),
    )


def proportional_counts(group_sizes: Sequence[int], total: int) -> list[int]:
    """Largest-remainder allocation of ``total`` across groups.

    Each group receives floor(total * size / n) plus at most one extra, so
    per-group counts stay within one of exact proportionality while the
    overall total is hit exactly.
    """
    n = sum(group_sizes)
    quotas = [total * s / n for s in group_sizes]
    counts = [math.floor(q) for q in quotas]
    leftover = total - sum(counts)
    order = sorted(range(len(group_sizes)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def _subset(d: Dataset, idx: Iterable[int], tag: str) -> Dataset:
    recs = tuple(d.records[i] for i in sorted(idx))
    return Dataset(records=recs, provenance=f"{d.provenance} [{tag}]")


def split_train_test(
    d: Dataset,
    test_fraction: float,
    stratified: bool = True,
    seed: int = 0,
    by_event: bool = False,
) -> tuple[Dataset, Dataset]:
    """Deterministic train/test split.

    The test set receives floor(test_fraction * n + 1e-9) records. A
    stratified split keeps per-class counts within one record of exact
    proportionality. With ``by_event`` whole events are assigned to one side
    (sizes then only approximate the fraction). Same seed, same split.
    """
    n = len(d.records)
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0,1), got {test_fraction}")
    n_test = math.floor(test_fraction * n + 1e-9)
    if n_test == 0 or n_test == n:
        raise ValueError(f"split of {n} records at fraction {test_fraction} leaves an empty side")
    rng = np.random.default_rng(seed)

    if by_event:
        events: dict[str, list[int]] = {}
        for i, r in enumerate(d.records):
            events.setdefault(r.event_id, []).append(i)
        names = sorted(events)
        order = rng.permutation(len(names))
        test_idx: list[int] = []
        for j in order:
            if len(test_idx) >= n_test:
                break
            test_idx.extend(events[names[j]])
        test_set = set(test_idx)
        train_idx = [i for i in range(n) if i not in test_set]
        if not train_idx or not test_idx:
            raise ValueError("event-level split left one side empty")
        return _subset(d, train_idx, "train"), _subset(d, test_idx, "test")

    if stratified:
        labels = d.labels()
        classes, class_counts = np.unique(labels, return_counts=True)
        if np.any(class_counts < 2):
            raise ValueError("stratified split needs at least 2 records per class")
        per_class = proportional_counts(class_counts.tolist(), n_test)
        test_idx = []
        for cls, take in zip(classes, per_class):
            members = np.flatnonzero(labels == cls)
            picked = rng.permutation(len(members))[:take]
            test_idx.extend(members[picked].tolist())
    else:
        test_idx = rng.permutation(n)[:n_test].tolist()

    test_set = set(test_idx)
    train_idx = [i for i in range(n) if i not in test_set]
    return _subset(d, train_idx, "train"), _subset(d, test_idx, "test")


MODALITY_TEXTUAL = "textual"
MODALITY_VISUAL = "visual"


@dataclass(frozen=True)
class FeatureMatrix:
    """Named, ordered numeric features per message.

    ``column_modalities`` tags each column as textual or visual so feature
    selection (textual only) and fusion can tell the blocks apart. Values
    must be finite; parallel lists must be length-consistent.
    """

    column_names: tuple[str, ...]
    column_modalities: tuple[str, ...]
    values: np.ndarray
    row_ids: tuple[str, ...]
    labels: np.ndarray | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ValueError("values must be a 2-D array")
        if vals.shape != (len(self.row_ids), len(self.column_names)):
            raise ValueError(
                f"shape {vals.shape} inconsistent with {len(self.row_ids)} rows "
                f"and {len(self.column_names)} columns"
            )
        if len(self.column_modalities) != len(self.column_names):
            raise ValueError("column_modalities must parallel column_names")
        if len(set(self.column_names)) != len(self.column_names):
            raise ValueError("column names must be unique")
        for m in self.column_modalities:
            if m not in (MODALITY_TEXTUAL, MODALITY_VISUAL):
                raise ValueError(f"unknown modality {m!r}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("feature values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int64)
            if lab.shape != (len(self.row_ids),):
                raise ValueError("labels must parallel row_ids")
            lab.flags.writeable = False
            object.__setattr__(self, "labels", lab)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        """Column subset, preserving the requested order."""
        index = {name: j for j, name in enumerate(self.column_names)}
        missing = [nm for nm in names if nm not in index]
        if missing:
            raise KeyError(f"unknown columns: {missing}")
        cols = [index[nm] for nm in names]
        return FeatureMatrix(
            column_names=tuple(names),
            column_modalities=tuple(self.column_modalities[j] for j in cols),
            values=self.values[:, cols].copy(),
            row_ids=self.row_ids,
            labels=self.labels,
        )

    def take_rows(self, idx: Sequence[int]) -> "FeatureMatrix":
        idx = list(idx)
        return FeatureMatrix(
            column_names=self.column_names,
            column_modalities=self.column_modalities,
            values=self.values[idx].copy(),
            row_ids=tuple(self.row_ids[i] for i in idx),
            labels=None if self.labels is None else self.labels[idx].copy(),
        )


def save_feature_matrix(m: FeatureMatrix, path: str) -> None:
    """Write a matrix as CSV (full-precision floats) plus a modality sidecar.

    Header is ``id,<col1>,...,<colD>[,label]``; floats use ``repr`` so the
    shortest round-trip decimal form is stored and ``load_feature_matrix``
    reproduces values bit-exactly. Modalities go to ``<path>.meta.json``.
    """
    header = ["id", *m.column_names]
    if m.labels is not None:
        header.append("label")
    lines = [",".join(header)]
    for i, rid in enumerate(m.row_ids):
        cells = [rid] + [repr(float(v)) for v in m.values[i]]
        if m.labels is not None:
            cells.append(str(int(m.labels[i])))
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    meta = {
        "format_version": 1,
        "column_modalities": dict(zip(m.column_names, m.column_modalities)),
    }
    with open(f"{path}.meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_feature_matrix(path: str) -> FeatureMatrix:
    """Inverse of ``save_feature_matrix``; validates header and finiteness.

    If the modality sidecar is absent every column defaults to textual.
    """
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"empty feature matrix file: {path}") from None
        if not header or header[0] != "id":
            raise DatasetError("feature matrix header must start with 'id'")
        has_label = header[-1] == "label"
        names = header[1 : -1 if has_label else len(header)]
        if len(set(names)) != len(names):
            raise DatasetError("duplicate column in feature matrix header")
        row_ids: list[str] = []
        rows: list[list[float]] = []
        labels: list[int] = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise DatasetError(f"row width {len(row)} != header width {len(header)}")
            row_ids.append(row[0])
            end = -1 if has_label else len(row)
            rows.append([float(v) for v in row[1:end]])
            if has_label:
                labels.append(int(row[-1]))

    meta_path = f"{path}.meta.json"
    modalities = tuple([MODALITY_TEXTUAL] * len(names))
    if os.path.isfile(meta_path):
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)
        by_name = meta.get("column_modalities", {})
        modalities = tuple(by_name.get(nm, MODALITY_TEXTUAL) for nm in names)

    values = np.asarray(rows, dtype=np.float64).reshape(len(row_ids), len(names))
    return FeatureMatrix(
        column_names=tuple(names),
        column_modalities=modalities,
        values=values,
        row_ids=tuple(row_ids),
        labels=np.asarray(labels, dtype=np.int64) if has_label else None,
    )
