"""NIQE: naturalness distance between patch-statistics Gaussian fits.

Features are the same 36 natural scene statistics as BRISQUE but computed
per 96x96 patch (48x48 on the half-scale image at the same grid cell).
The score compares the Gaussian fit of the test image's patches against a
pristine model:

    d = sqrt((mu1 - mu2)^T ((S1 + S2)/2)^+ (mu1 - mu2))

When fitting the pristine model, only patches whose local-deviation mean
reaches 0.75 of the sharpest patch are kept; at score time all patches
are used, following the reference implementation.
"""

from __future__ import annotations

import numpy as np

from rumorfuse.iqa import mscn as _mscn
from rumorfuse.iqa.brisque import scale_features
from rumorfuse.iqa.model import IqaModel, fit_feature_model

PATCH_SIZE = 96
SHARPNESS_FRACTION = 0.75


def niqe_patch_features(
    img: np.ndarray,
    patch_size: int = PATCH_SIZE,
    sharpness_fraction: float | None = None,
) -> np.ndarray:
    """(n_patches, 36) features over the non-overlapping patch grid.

    ``sharpness_fraction`` enables the pristine-corpus patch filter; None
    keeps every patch.
    """
    if patch_size % 2:
        raise ValueError("patch size must be even")
    a = _mscn.validate_gray(img)
    rows = a.shape[0] // patch_size
    cols = a.shape[1] // patch_size
    if rows == 0 or cols == 0:
        raise ValueError(
            f"image {a.shape} has no complete {patch_size}x{patch_size} patch"
        )
    a = a[: rows * patch_size, : cols * patch_size]
    mscn1 = _mscn.mscn_transform(a)
    _, sigma1 = _mscn.local_stats(a)
    mscn2 = _mscn.mscn_transform(_mscn.downsample2(a))
    half = patch_size // 2

    sharpness = np.empty((rows, cols))
    for i in range(rows):
        for j in range(cols):
            sharpness[i, j] = sigma1[
                i * patch_size : (i + 1) * patch_size,
                j * patch_size : (j + 1) * patch_size,
            ].mean()
    keep = np.ones((rows, cols), dtype=bool)
    if sharpness_fraction is not None:
        keep = sharpness >= sharpness_fraction * sharpness.max()
        if not keep.any():
            raise ValueError("all patches rejected by sharpness filter")

    feats = []
    for i in range(rows):
        for j in range(cols):
            if not keep[i, j]:
                continue
            p1 = mscn1[
                i * patch_size : (i + 1) * patch_size,
                j * patch_size : (j + 1) * patch_size,
            ]
            p2 = mscn2[i * half : (i + 1) * half, j * half : (j + 1) * half]
            feats.append(np.concatenate([scale_features(p1), scale_features(p2)]))
    return np.vstack(feats)


def pristine_patch_features(img: np.ndarray) -> np.ndarray:
    """Feature function used when fitting the pristine NIQE model."""
    return niqe_patch_features(img, sharpness_fraction=SHARPNESS_FRACTION)


def niqe_score(img: np.ndarray, pristine: IqaModel) -> float:
    """Distance of the image's patch statistics from the pristine model; >= 0."""
    feats = niqe_patch_features(img)
    mu_t = feats.mean(axis=0)
    if feats.shape[0] >= 2:
        cov_t = np.cov(feats, rowvar=False, ddof=1)
    else:
        cov_t = np.zeros((feats.shape[1], feats.shape[1]))
    pooled = (pristine.covariance + cov_t) / 2.0
    diff = pristine.mu - mu_t
    q = float(diff @ np.linalg.pinv(pooled) @ diff)
    if not np.isfinite(q):
        raise ValueError("singular pooled covariance")
    return float(np.sqrt(max(q, 0.0)))


def fit_niqe_model(corpus) -> IqaModel:
    """Pristine model over sharp patches pooled across >= 10 images."""
    corpus = list(corpus)
    if len(corpus) < 10:
        raise ValueError(f"pristine corpus needs >= 10 images, got {len(corpus)}")
    blocks = [pristine_patch_features(img) for img in corpus]
    return fit_feature_model(np.vstack(blocks))
