"""PIQE: perception-based, opinion-unaware block distortion score.

The MSCN field is cut into 16x16 blocks. Blocks with sample variance
above 0.1 are spatially active; each active block is tested for
noticeable artifacts (any 6-pixel edge segment flatter than 0.1 standard
deviation, the blockiness signature) and for Gaussian noise (center
versus surround deviation). Distorted blocks contribute

    artifact * (1 - var) + noise * var

and the score is 100 * (sum + 1) / (1 + n_active), clamped to [0, 100].
A uniform image has no active blocks and scores exactly 100.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rumorfuse.iqa import mscn as _mscn

BLOCK_SIZE = 16
ACTIVITY_THRESHOLD = 0.1
IMPAIRED_THRESHOLD = 0.1
SEGMENT_LENGTH = 6


@dataclass(frozen=True)
class PiqeResult:
    score: float
    n_active: int
    n_artifact: int
    n_noise: int
    uniform: bool


def _segment_stds(edge: np.ndarray) -> np.ndarray:
    """Sample std of every length-6 sliding window along a block edge."""
    n = edge.size - SEGMENT_LENGTH + 1
    windows = np.lib.stride_tricks.sliding_window_view(edge, SEGMENT_LENGTH)[:n]
    return windows.std(axis=1, ddof=1)


def _has_flat_edge_segment(block: np.ndarray) -> bool:
    for edge in (block[0, :], block[-1, :], block[:, 0], block[:, -1]):
        if np.any(_segment_stds(edge) < IMPAIRED_THRESHOLD):
            return True
    return False


def _center_surround_deviation(block: np.ndarray) -> float:
    mid = block.shape[1] // 2
    center = np.concatenate([block[:, mid - 1], block[:, mid]])
    surround = np.delete(block, [mid - 1, mid], axis=1)
    s = surround.std(ddof=1)
    if s == 0:
        return 0.0
    ratio = center.std(ddof=1) / s
    return float(ratio) if np.isfinite(ratio) else 0.0


def _is_noise_block(block: np.ndarray, block_var: float) -> bool:
    sigma = float(np.sqrt(block_var))
    cen_sur = _center_surround_deviation(block)
    denom = max(sigma, cen_sur)
    if denom == 0:
        return False
    beta = abs(sigma - cen_sur) / denom
    return sigma > 2.0 * beta


def piqe_assess(img: np.ndarray) -> PiqeResult:
    """Full block-level assessment; see module docstring for the pooling."""
    a = _mscn.validate_gray(img)
    # trailing partial blocks are mirrored out to a full 16x16 grid
    pad_r = (-a.shape[0]) % BLOCK_SIZE
    pad_c = (-a.shape[1]) % BLOCK_SIZE
    if pad_r or pad_c:
        a = np.pad(a, ((0, pad_r), (0, pad_c)), mode="symmetric")
    field = _mscn.mscn_transform(a)
    n_active = n_artifact = n_noise = 0
    dist_sum = 0.0
    for i in range(0, field.shape[0], BLOCK_SIZE):
        for j in range(0, field.shape[1], BLOCK_SIZE):
            block = field[i : i + BLOCK_SIZE, j : j + BLOCK_SIZE]
            var = float(block.var(ddof=1))
            if var <= ACTIVITY_THRESHOLD:
                continue
            n_active += 1
            artifact = _has_flat_edge_segment(block)
            noise = _is_noise_block(block, var)
            n_artifact += artifact
            n_noise += noise
            dist_sum += artifact * (1.0 - var) + noise * var
    score = 100.0 * (dist_sum + 1.0) / (1.0 + n_active)
    return PiqeResult(
        score=float(np.clip(score, 0.0, 100.0)),
        n_active=n_active,
        n_artifact=n_artifact,
        n_noise=n_noise,
        uniform=(n_active == 0),
    )


def piqe_score(img: np.ndarray) -> float:
    """Score in [0,100]; higher = more distorted; uniform image = 100."""
    return piqe_assess(img).score
