"""Gaussian feature models fitted on a pristine image corpus.

One model type serves both scorers: BRISQUE scores against a model over
whole-image 36-vectors, NIQE against a model over per-patch 36-vectors.
Models serialize to a versioned JSON document so bundled models are
inspectable and runs are reproducible without refitting.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

FORMAT_VERSION = 1
REGULARIZATION = 1e-6


@dataclass(frozen=True)
class IqaModel:
    """Mean + covariance of a feature population, with scorer calibration.

    calibration (a, b) maps a Mahalanobis distance d to a*d + b before
    clamping; the identity-ish default (1, 10) keeps scores usable when a
    model was fitted without a distorted calibration corpus.
    """

    mu: np.ndarray
    covariance: np.ndarray
    calibration: tuple[float, float] = (1.0, 10.0)

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=np.float64)
        cov = np.asarray(self.covariance, dtype=np.float64)
        if mu.ndim != 1 or cov.shape != (mu.size, mu.size):
            raise ValueError(f"shape mismatch: mu {mu.shape}, covariance {cov.shape}")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(cov))):
            raise ValueError("non-finite model parameters")
        if np.max(np.abs(cov - cov.T)) > 1e-12:
            raise ValueError("covariance not symmetric")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "covariance", cov)

    @property
    def d(self) -> int:
        return self.mu.size

    def precision(self) -> np.ndarray:
        """Pseudo-inverse of the covariance (computed once per instance)."""
        cached = getattr(self, "_precision", None)
        if cached is None:
            cached = np.linalg.pinv(self.covariance)
            object.__setattr__(self, "_precision", cached)
        return cached


def fit_feature_model(features: np.ndarray, calibration=(1.0, 10.0)) -> IqaModel:
    """Gaussian fit of a (n, d) feature population with ridge regularization."""
    f = np.asarray(features, dtype=np.float64)
    if f.ndim != 2 or f.shape[0] < 2:
        raise ValueError("need at least 2 feature vectors")
    mu = f.mean(axis=0)
    cov = np.cov(f, rowvar=False, ddof=1) + REGULARIZATION * np.eye(f.shape[1])
    cov = (cov + cov.T) / 2.0
    return IqaModel(mu=mu, covariance=cov, calibration=tuple(calibration))


def fit_pristine_model(corpus, feature_fn, min_images: int = 10) -> IqaModel:
    """Fit the naturalness model from per-image (or per-patch) features.

    ``feature_fn`` maps a grayscale image to either a d-vector or an
    (n_i, d) block of patch vectors; blocks are stacked across the corpus.
    """
    corpus = list(corpus)
    if len(corpus) < min_images:
        raise ValueError(f"pristine corpus needs >= {min_images} images, got {len(corpus)}")
    blocks = []
    for img in corpus:
        f = np.asarray(feature_fn(img), dtype=np.float64)
        blocks.append(f.reshape(1, -1) if f.ndim == 1 else f)
    stacked = np.vstack(blocks)
    if stacked.shape[0] < 2:
        raise ValueError("all patches rejected")
    return fit_feature_model(stacked)


def calibrate(model: IqaModel, pristine_dists, distorted_dists) -> IqaModel:
    """Affine calibration mapping distance medians to scores 10 and 80."""
    mp = float(np.median(pristine_dists))
    md = float(np.median(distorted_dists))
    if md <= mp:
        raise ValueError("distorted median must exceed pristine median")
    a = 70.0 / (md - mp)
    b = 10.0 - a * mp
    return IqaModel(mu=model.mu, covariance=model.covariance, calibration=(a, b))


def save_model(model: IqaModel, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "d": model.d,
        "mu": model.mu.tolist(),
        "covariance": model.covariance.ravel().tolist(),  # row-major
        "calibration": list(model.calibration),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path) -> IqaModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format: {doc.get('format_version')}")
    d = int(doc["d"])
    return IqaModel(
        mu=np.array(doc["mu"], dtype=np.float64),
        covariance=np.array(doc["covariance"], dtype=np.float64).reshape(d, d),
        calibration=tuple(doc.get("calibration", (1.0, 10.0))),
    )
