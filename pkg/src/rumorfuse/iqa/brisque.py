"""BRISQUE natural scene statistics features and model-based scoring.

The 36-vector is the classic layout: for each of two scales (original and
2x downsampled), a symmetric GGD fit (shape, second moment) of the MSCN
field followed by AGGD fits (shape, mean offset, left variance, right
variance) of the four paired-product orientations H, V, D1, D2.

Scoring departs from the original SVR, which was trained on a proprietary
human-opinion study: the feature vector is scored by Mahalanobis distance
to a pristine-corpus Gaussian model, affinely calibrated so the pristine
corpus median lands near 10 and a heavily distorted median near 80, then
clamped to [1, 100]. Lower is more natural; absolute values are only
meaningful relative to the bundled calibration.
"""

from __future__ import annotations

import numpy as np

from rumorfuse.iqa import mscn as _mscn
from rumorfuse.iqa.aggd import fit_aggd, fit_ggd

N_FEATURES = 36

# per-fit fallbacks for degenerate (for example constant) inputs: the
# Gaussian shape alpha=2 with zero energy
_GGD_FALLBACK = (2.0, 0.0)
_AGGD_FALLBACK = (2.0, 0.0, 0.0, 0.0)


def _safe_ggd(x: np.ndarray) -> tuple[float, float]:
    try:
        return fit_ggd(x)
    except ValueError:
        return _GGD_FALLBACK


def _safe_aggd(x: np.ndarray) -> tuple[float, float, float, float]:
    try:
        p = fit_aggd(x)
    except ValueError:
        return _AGGD_FALLBACK
    return (p.alpha, p.mean_offset, p.sigma_l**2, p.sigma_r**2)


def scale_features(mscn_field: np.ndarray) -> np.ndarray:
    """18 features for one scale: GGD(2) + 4 orientations x AGGD(4)."""
    feats = list(_safe_ggd(mscn_field))
    for prod in _mscn.paired_products(mscn_field).values():
        feats.extend(_safe_aggd(prod))
    return np.array(feats, dtype=np.float64)


def brisque_features(img: np.ndarray) -> np.ndarray:
    """The 36-dim natural scene statistics vector of an image."""
    a = _mscn.validate_gray(img)
    f1 = scale_features(_mscn.mscn_transform(a))
    f2 = scale_features(_mscn.mscn_transform(_mscn.downsample2(a)))
    return np.concatenate([f1, f2])


def brisque_score(img: np.ndarray, model) -> float:
    """Score in [1,100]; lower = more natural. ``model`` is a 36-dim IqaModel."""
    if model.d != N_FEATURES:
        raise ValueError(f"model dimension {model.d}, expected {N_FEATURES}")
    f = brisque_features(img)
    diff = f - model.mu
    dist = float(np.sqrt(max(diff @ model.precision() @ diff, 0.0)))
    a, b = model.calibration
    return float(np.clip(a * dist + b, 1.0, 100.0))
