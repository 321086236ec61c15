"""Filter feature selection by information gain ratio.

Continuous columns are discretized into equal-frequency bins (quantile
edges, so the binning is invariant to row order) and scored by
gain / split-information in bits. Only textual columns are ranked; the
visual block always bypasses selection and is kept whole.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rumorfuse.data import FeatureMatrix, MODALITY_TEXTUAL


def entropy(labels) -> float:
    """Shannon entropy in bits of a non-empty label list."""
    y = np.asarray(labels)
    if y.size == 0:
        raise ValueError("empty label list")
    _, counts = np.unique(y, return_counts=True)
    p = counts / y.size
    return float(-(p * np.log2(p)).sum())


def _bin_assignments(column: np.ndarray, bins: int) -> np.ndarray:
    edges = np.quantile(column, np.arange(1, bins) / bins, method="linear")
    return np.searchsorted(edges, column, side="right")


def gain_ratio(column, labels, bins: int) -> float:
    """Information gain of the discretized column over split information.

    Zero when the split information is zero (constant column). Stays in
    [0, 1] because mutual information is bounded by the bin entropy.
    """
    x = np.asarray(column, dtype=np.float64)
    y = np.asarray(labels)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 rows")
    if bins < 2:
        raise ValueError("need at least 2 bins")
    assign = _bin_assignments(x, bins)
    n = x.size
    h_y = entropy(y)
    gain = h_y
    sizes = []
    for b in np.unique(assign):
        mask = assign == b
        n_b = int(mask.sum())
        sizes.append(n_b)
        gain -= (n_b / n) * entropy(y[mask])
    split_info = entropy(np.repeat(np.arange(len(sizes)), sizes))
    if split_info == 0.0:
        return 0.0
    return max(gain, 0.0) / split_info


def default_bins(n_rows: int) -> int:
    return min(10, int(np.ceil(np.sqrt(n_rows))))


@dataclass(frozen=True)
class FeatureRanking:
    """Descending gain-ratio ranking with the selected subset."""

    entries: tuple[tuple[str, float], ...]
    threshold: float
    selected: tuple[str, ...]

    def __post_init__(self):
        ratios = [r for _, r in self.entries]
        if any(ratios[i] < ratios[i + 1] for i in range(len(ratios) - 1)):
            raise ValueError("entries not sorted by descending gain ratio")
        above = {name for name, r in self.entries if r > self.threshold}
        if not set(self.selected) <= above:
            raise ValueError("selected features must score above the threshold")


def select_features(
    m: FeatureMatrix,
    labels=None,
    threshold: float = 0.0,
    top_k: int = 15,
    bins: int | None = None,
) -> FeatureRanking:
    """Rank textual columns and keep the top ones scoring above threshold.

    Ties break by ascending column name so the ranking is deterministic.
    """
    y = m.labels if labels is None else np.asarray(labels)
    if y is None:
        raise ValueError("feature matrix has no labels")
    if bins is None:
        bins = default_bins(m.n_rows)
    scored = []
    for idx, name in enumerate(m.column_names):
        if m.column_modalities[idx] != MODALITY_TEXTUAL:
            continue
        scored.append((name, gain_ratio(m.values[:, idx], y, bins)))
    scored.sort(key=lambda e: (-e[1], e[0]))
    above = [name for name, r in scored if r > threshold]
    return FeatureRanking(
        entries=tuple(scored),
        threshold=threshold,
        selected=tuple(above[: min(top_k, len(above))]),
    )


def save_ranking(ranking: FeatureRanking, path) -> None:
    """CSV export: column_name, gain_ratio, selected flag."""
    chosen = set(ranking.selected)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("column_name,gain_ratio,selected\n")
        for name, ratio in ranking.entries:
            fh.write(f"{name},{ratio!r},{int(name in chosen)}\n")
