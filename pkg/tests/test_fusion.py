"""Min-max scaling, early concatenation, and late probability fusion."""

import numpy as np
import pytest

from conftest import feature_matrix
from rumorfuse.data import MODALITY_TEXTUAL, MODALITY_VISUAL
from rumorfuse.fusion import (
    LateFusionModel,
    apply_scaler,
    early_fuse,
    fit_late_fuse_optimized,
    fit_scaler,
    labels_from_proba,
    late_fuse_equal,
)


def test_scaler_maps_train_to_unit_interval():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((30, 4)) * 7 + 3
    s = fit_scaler(x)
    out = s.apply(x)
    assert np.allclose(out.min(axis=0), 0.0)
    assert np.allclose(out.max(axis=0), 1.0)


def test_scaler_constant_column_collapses_to_zero():
    x = np.column_stack([np.full(10, 5.0), np.arange(10, dtype=float)])
    out = fit_scaler(x).apply(x)
    assert np.all(out[:, 0] == 0.0)
    assert out[-1, 1] == 1.0


def test_scaler_clips_unseen_range():
    train = np.array([[0.0], [10.0]])
    s = fit_scaler(train)
    out = s.apply(np.array([[-5.0], [15.0]]))
    assert out[0, 0] == 0.0 and out[1, 0] == 1.0


def test_scaler_width_mismatch():
    s = fit_scaler(np.zeros((4, 3)))
    with pytest.raises(ValueError):
        s.apply(np.zeros((4, 2)))


def test_apply_scaler_keeps_matrix_metadata():
    m = feature_matrix(np.arange(8, dtype=float).reshape(4, 2), labels=[0, 1, 0, 1])
    s = fit_scaler(m)
    out = apply_scaler(s, m)
    assert out.column_names == m.column_names
    assert out.row_ids == m.row_ids
    assert np.array_equal(out.labels, m.labels)
    assert out.values.max() == 1.0


def test_early_fuse_textual_block_first():
    t = feature_matrix(np.ones((3, 2)), labels=[0, 1, 0], names=("a", "b"))
    v = feature_matrix(
        np.zeros((3, 2)) + 2.0, names=("c", "d"), modality=MODALITY_VISUAL
    )
    fused = early_fuse(t, v)
    assert fused.column_names == ("a", "b", "c", "d")
    assert fused.column_modalities == (
        MODALITY_TEXTUAL,
        MODALITY_TEXTUAL,
        MODALITY_VISUAL,
        MODALITY_VISUAL,
    )
    assert np.array_equal(fused.values[:, :2], t.values)
    assert np.array_equal(fused.values[:, 2:], v.values)
    assert np.array_equal(fused.labels, t.labels)


def test_early_fuse_row_mismatch_rejected():
    t = feature_matrix(np.ones((3, 2)))
    v = feature_matrix(np.ones((3, 2)), modality=MODALITY_VISUAL, prefix="other")
    with pytest.raises(ValueError, match="rows"):
        early_fuse(t, v)


def test_early_fuse_label_conflict_rejected():
    t = feature_matrix(np.ones((2, 1)), labels=[0, 1])
    v = feature_matrix(np.ones((2, 1)), labels=[1, 1], modality=MODALITY_VISUAL)
    with pytest.raises(ValueError, match="labels"):
        early_fuse(t, v)


def test_early_fuse_empty_visual_passthrough():
    t = feature_matrix(np.ones((2, 2)), labels=[0, 1])
    v = feature_matrix(np.zeros((2, 0)), modality=MODALITY_VISUAL)
    assert early_fuse(t, v) is t


def test_late_fuse_equal_is_mean():
    p = late_fuse_equal([0.2, 0.8], [0.4, 0.4])
    assert np.allclose(p, [0.3, 0.6])
    with pytest.raises(ValueError):
        late_fuse_equal([0.1], [0.1, 0.2])


def test_tie_rule_predicts_fake_at_half():
    assert labels_from_proba([0.5, 0.49999, 0.50001]).tolist() == [1, 0, 1]


def test_optimized_fusion_learns_to_trust_informative_modality():
    rng = np.random.default_rng(4)
    n = 400
    y = rng.integers(0, 2, n)
    p_good = np.clip(0.5 + (y - 0.5) * 0.8 + rng.normal(0, 0.05, n), 0, 1)
    p_bad = rng.uniform(0, 1, n)  # uninformative modality
    model = fit_late_fuse_optimized(p_good, p_bad, y)
    fused = model.fuse(p_good, p_bad)
    acc_fused = (labels_from_proba(fused) == y).mean()
    acc_equal = (labels_from_proba(late_fuse_equal(p_good, p_bad)) == y).mean()
    assert acc_fused > acc_equal
    assert acc_fused > 0.95


def test_optimized_fusion_rejects_single_class():
    with pytest.raises(ValueError, match="single"):
        fit_late_fuse_optimized([0.1, 0.2], [0.3, 0.4], [1, 1])


def test_equal_mode_model_has_no_state():
    m = LateFusionModel(mode="equal")
    assert np.allclose(m.fuse([0.0, 1.0], [1.0, 0.0]), [0.5, 0.5])
