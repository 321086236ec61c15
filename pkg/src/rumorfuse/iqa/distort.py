"""Synthetic distortions used as oracles for the quality metrics.

Each function takes and returns float64 luminance in [0,255]. These are
the degradations the naturalness scores must react to: additive Gaussian
noise, heavy JPEG recompression (blockiness), and median blur.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image
from scipy.ndimage import median_filter


def _to_uint8(img: np.ndarray) -> np.ndarray:
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


def add_gaussian_noise(img: np.ndarray, sigma: float, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    noisy = np.asarray(img, dtype=np.float64) + rng.normal(0.0, sigma, np.shape(img))
    return np.clip(noisy, 0.0, 255.0)


def jpeg_recompress(img: np.ndarray, quality: int = 30) -> np.ndarray:
    buf = io.BytesIO()
    Image.fromarray(_to_uint8(img), mode="L").save(buf, format="JPEG", quality=quality)
    buf.seek(0)
    with Image.open(buf) as im:
        return np.asarray(im.convert("L"), dtype=np.float64)


def median_blur(img: np.ndarray, size: int = 9) -> np.ndarray:
    return median_filter(np.asarray(img, dtype=np.float64), size=size, mode="nearest")
