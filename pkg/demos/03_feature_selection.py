"""
Gain-ratio feature ranking on the bundled mini dataset
======================================================

Loads the 50-message corpus, extracts the textual/social feature block,
and ranks every column by information gain ratio against the real/fake
label. Columns that never vary rank at zero.
"""

from importlib.resources import files

import numpy as np

from rumorfuse.data import load_dataset
from rumorfuse.selection import default_bins, entropy, gain_ratio, select_features
from rumorfuse.textfeat import textual_feature_matrix

path = files("rumorfuse") / "resources" / "mini" / "messages.jsonl"
dataset = load_dataset(str(path))
print(f"{len(dataset.records)} messages, {len(dataset.rejections)} rejected rows")

matrix = textual_feature_matrix(dataset)
y = matrix.labels
print(f"feature matrix {matrix.values.shape}, label entropy {entropy(y):.4f} bits")
print(f"equal-frequency bins for n={len(y)}: {default_bins(len(y))}\n")

# rank every textual column; the visual block would be skipped by the
# same call if the matrix carried one
ranking = select_features(matrix, top_k=10)
print(f"{'rank':4s} {'column':28s} {'gain ratio':>10s}  selected")
for i, (name, score) in enumerate(ranking.entries, 1):
    mark = "x" if name in ranking.selected else ""
    print(f"{i:4d} {name:28s} {score:10.4f}  {mark}")

# one column by hand for comparison
col = matrix.values[:, list(matrix.column_names).index("n_exclaim")]
print(f"\nby hand, n_exclaim: gain_ratio={gain_ratio(col, y, bins=default_bins(len(y))):.4f}")
print(f"column spread: min {col.min():.0f}, median {np.median(col):.0f}, max {col.max():.0f}")
