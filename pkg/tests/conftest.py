"""Shared fixtures: synthetic images, blob datasets, tiny JSONL corpora."""

from __future__ import annotations

import json

import numpy as np
import pytest

from rumorfuse.data import (
    MODALITY_TEXTUAL,
    MODALITY_VISUAL,
    FeatureMatrix,
)


def textured_image(seed: int, size: int = 128, contrast: float = 24.0) -> np.ndarray:
    """Small natural-ish grayscale test image: smooth field + texture + grain."""
    rng = np.random.default_rng(seed)
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.fftfreq(size)[None, :]
    f = np.sqrt(fx * fx + fy * fy)
    f[0, 0] = 1.0
    spec = np.fft.fft2(rng.standard_normal((size, size))) / f**1.4
    base = np.real(np.fft.ifft2(spec))
    base = (base - base.mean()) / base.std()
    img = 120.0 + contrast * base + rng.normal(0.0, 1.5, (size, size))
    return np.clip(img, 0.0, 255.0)


def feature_matrix(
    values: np.ndarray,
    labels=None,
    names=None,
    modality: str = MODALITY_TEXTUAL,
    prefix: str = "r",
) -> FeatureMatrix:
    values = np.asarray(values, dtype=np.float64)
    if names is None:
        names = tuple(f"f{j}" for j in range(values.shape[1]))
    return FeatureMatrix(
        column_names=tuple(names),
        column_modalities=(modality,) * values.shape[1],
        values=values,
        row_ids=tuple(f"{prefix}{i}" for i in range(values.shape[0])),
        labels=None if labels is None else np.asarray(labels, dtype=np.int64),
    )


def two_modality_blobs(seed: int, n: int = 2000, d: float = 1.5):
    """Two Gaussian blobs per modality; informative axis differs per modality."""
    rng = np.random.default_rng(seed)
    y = np.repeat([0, 1], n // 2)
    xa = rng.standard_normal((n, 2))
    xa[:, 0] += d * y
    xb = rng.standard_normal((n, 2))
    xb[:, 1] += d * y
    perm = rng.permutation(n)
    return xa[perm], xb[perm], y[perm]


def blob_matrices(seed: int, n: int = 2000, d: float = 1.5, n_train: int | None = None):
    """(textual_train, visual_train, textual_test, visual_test, y_test) split."""
    xa, xb, y = two_modality_blobs(seed, n=n, d=d)
    if n_train is None:
        n_train = int(0.8 * n)

    def mk(x, yy, names, modality, prefix):
        return FeatureMatrix(
            column_names=names,
            column_modalities=(modality,) * 2,
            values=x,
            row_ids=tuple(f"{prefix}{i}" for i in range(len(yy))),
            labels=np.asarray(yy, dtype=np.int64),
        )

    ta = mk(xa[:n_train], y[:n_train], ("t1", "t2"), MODALITY_TEXTUAL, "a")
    tb = mk(xb[:n_train], y[:n_train], ("v1", "v2"), MODALITY_VISUAL, "a")
    ea = mk(xa[n_train:], y[n_train:], ("t1", "t2"), MODALITY_TEXTUAL, "b")
    eb = mk(xb[n_train:], y[n_train:], ("v1", "v2"), MODALITY_VISUAL, "b")
    return ta, tb, ea, eb, y[n_train:]


def write_jsonl_dataset(path, records):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return path


def simple_record(i: int, label: str = "real", **overrides):
    rec = {
        "id": f"m{i:03d}",
        "event_id": f"e{i % 3}",
        "text": f"plain message number {i} about the flood",
        "label": label,
        "retweet_count": i % 7,
        "like_count": (3 * i) % 11,
        "user": {
            "followers": 100 + i,
            "friends": 50 + i,
            "posts": 10 * i + 1,
            "times_listed": i % 5,
            "likes_given": 2 * i,
            "verified": i % 2 == 0,
            "has_profile_image": True,
            "has_homepage_url": i % 3 == 0,
        },
        "image_paths": [],
    }
    rec.update(overrides)
    return rec


@pytest.fixture(scope="session")
def mini_dataset_path():
    from importlib.resources import files

    return str(files("rumorfuse") / "resources" / "mini" / "messages.jsonl")
