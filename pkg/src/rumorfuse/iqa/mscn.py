"""Image preparation and the MSCN (mean subtracted contrast normalized) field.

All metrics in this subpackage run on row-major float64 luminance in
[0, 255]. Local statistics use a 7x7 Gaussian window with sigma = 7/6 and
replicate borders, and the normalization constant C = 1 sits on the
[0, 255] scale, matching the reference BRISQUE formulation. A constant
image therefore maps to an exactly zero MSCN field.
"""

from __future__ import annotations

import numpy as np
from PIL import Image
from scipy.ndimage import correlate1d

MIN_SIDE = 16

# BT.601 luminance weights
_LUMA = np.array([0.299, 0.587, 0.114])


def _gaussian_window_1d(size: int = 7, sigma: float = 7.0 / 6.0) -> np.ndarray:
    half = (size - 1) / 2.0
    x = np.arange(size) - half
    w = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return w / w.sum()


_WIN = _gaussian_window_1d()


def validate_gray(img: np.ndarray) -> np.ndarray:
    """Coerce to float64 and enforce the luminance-image invariants."""
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D luminance array, got shape {a.shape}")
    if min(a.shape) < MIN_SIDE:
        raise ValueError(f"image {a.shape} smaller than {MIN_SIDE}x{MIN_SIDE}")
    if not np.all(np.isfinite(a)):
        raise ValueError("image contains non-finite values")
    return a


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luminance from an HxWx3 array in [0,255]."""
    a = np.asarray(rgb, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError(f"expected HxWx3, got {a.shape}")
    return a @ _LUMA


def load_gray_image(path) -> np.ndarray:
    """Read a PNG/JPEG file as float64 luminance in [0,255]."""
    with Image.open(path) as im:
        if im.mode in ("L", "I;16", "I"):
            arr = np.asarray(im.convert("L"), dtype=np.float64)
        else:
            arr = rgb_to_gray(np.asarray(im.convert("RGB"), dtype=np.float64))
    return validate_gray(arr)


def _smooth(a: np.ndarray) -> np.ndarray:
    # separable 7x7 Gaussian, replicate borders
    t = correlate1d(a, _WIN, axis=0, mode="nearest")
    return correlate1d(t, _WIN, axis=1, mode="nearest")


def local_stats(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian-weighted local mean and deviation fields."""
    a = validate_gray(img)
    mu = _smooth(a)
    sigma = np.sqrt(np.abs(_smooth(a * a) - mu * mu))
    return mu, sigma


def mscn_transform(img: np.ndarray) -> np.ndarray:
    """(I - mu_local) / (sigma_local + 1), finite everywhere."""
    a = validate_gray(img)
    mu, sigma = local_stats(a)
    return (a - mu) / (sigma + 1.0)


def paired_products(mscn: np.ndarray) -> dict[str, np.ndarray]:
    """Products of neighboring MSCN coefficients along 4 orientations.

    Keys in the fixed feature order: horizontal, vertical, main diagonal,
    secondary diagonal.
    """
    m = np.asarray(mscn, dtype=np.float64)
    return {
        "H": m[:, :-1] * m[:, 1:],
        "V": m[:-1, :] * m[1:, :],
        "D1": m[:-1, :-1] * m[1:, 1:],
        "D2": m[:-1, 1:] * m[1:, :-1],
    }


def downsample2(img: np.ndarray) -> np.ndarray:
    """Half-size image by 2x2 local averaging (trailing odd row/col dropped)."""
    a = np.asarray(img, dtype=np.float64)
    h, w = (a.shape[0] // 2) * 2, (a.shape[1] // 2) * 2
    a = a[:h, :w]
    return (a[0::2, 0::2] + a[1::2, 0::2] + a[0::2, 1::2] + a[1::2, 1::2]) / 4.0
