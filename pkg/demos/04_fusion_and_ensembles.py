"""
Modality fusion and stacking-family ensembles
=============================================

Synthetic two-modality problem: each modality is two Gaussian blobs
shifted along its own axis, so neither alone separates well but the
concatenation does. Compares single-modality random forests against
early/late fusion, then the four base classifiers against the five
ensembles on the fused features.
"""

import numpy as np

from rumorfuse import learners as L
from rumorfuse.data import MODALITY_TEXTUAL, MODALITY_VISUAL, FeatureMatrix
from rumorfuse.ensembles import (
    BASE_ORDER,
    ENSEMBLE_KINDS,
    default_base_specs,
    ensemble_predict,
    fit_ensemble,
)
from rumorfuse.fusion import early_fuse, fit_late_fuse_optimized, late_fuse_equal

rng = np.random.default_rng(0)
n, d = 2000, 1.5
y = np.repeat([0, 1], n // 2)
text_vals = rng.standard_normal((n, 2))
text_vals[:, 0] += d * y  # textual signal lives on axis 0
vis_vals = rng.standard_normal((n, 2))
vis_vals[:, 1] += d * y  # visual signal on axis 1
perm = rng.permutation(n)
text_vals, vis_vals, y = text_vals[perm], vis_vals[perm], y[perm]


def matrix(vals, names, modality, rows):
    return FeatureMatrix(
        column_names=names,
        column_modalities=(modality,) * 2,
        values=vals[rows],
        row_ids=tuple(f"m{i}" for i in rows),
        labels=y[rows],
    )


train, test = np.arange(1600), np.arange(1600, n)
tm_train = matrix(text_vals, ("t1", "t2"), MODALITY_TEXTUAL, train)
vm_train = matrix(vis_vals, ("v1", "v2"), MODALITY_VISUAL, train)
tm_test = matrix(text_vals, ("t1", "t2"), MODALITY_TEXTUAL, test)
vm_test = matrix(vis_vals, ("v1", "v2"), MODALITY_VISUAL, test)
y_test = y[test]

acc = lambda pred: float(np.mean(pred == y_test))

# single-modality ceilings
rf_text = L.fit(L.default_spec("rf"), tm_train)
rf_vis = L.fit(L.default_spec("rf"), vm_train)
print(f"textual-only RF  {acc(L.predict(rf_text, tm_test)):.4f}")
print(f"visual-only RF   {acc(L.predict(rf_vis, vm_test)):.4f}")

# early fusion: concatenate the blocks, train one model
fused_train = early_fuse(tm_train, vm_train)
fused_test = early_fuse(tm_test, vm_test)
rf_fused = L.fit(L.default_spec("rf"), fused_train)
print(f"early-fused RF   {acc(L.predict(rf_fused, fused_test)):.4f}")

# late fusion: combine the two per-modality probability streams.
# Out-of-fold probabilities on the training split feed the combiner so
# it never sees its own training predictions.
cv_text = L.cross_validate(L.default_spec("rf"), tm_train, k=5)
cv_vis = L.cross_validate(L.default_spec("rf"), vm_train, k=5)
fuser = fit_late_fuse_optimized(cv_text.mean_oof(), cv_vis.mean_oof(), tm_train.labels)
p_text = L.predict_proba(rf_text, tm_test)[:, 1]
p_vis = L.predict_proba(rf_vis, vm_test)[:, 1]
print(f"late equal       {acc((late_fuse_equal(p_text, p_vis) >= 0.5).astype(int)):.4f}")
print(f"late optimized   {acc((fuser.fuse(p_text, p_vis) >= 0.5).astype(int)):.4f}")

# base classifiers vs the metalearning family, all on fused features
print("\nbase classifiers")
for kind in BASE_ORDER:
    model = L.fit(L.default_spec(kind), fused_train)
    print(f"  {kind:14s} {acc(L.predict(model, fused_test)):.4f}")

print("ensembles")
specs = default_base_specs(seed=0)
for kind in ENSEMBLE_KINDS:
    ens = fit_ensemble(kind, specs, fused_train, seed=0)
    labels, _ = ensemble_predict(ens, fused_test)
    print(f"  {kind:14s} {acc(labels):.4f}")
