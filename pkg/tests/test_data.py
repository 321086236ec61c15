"""Dataset loading, splitting, and feature-matrix serialization."""

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import feature_matrix, simple_record, write_jsonl_dataset
from rumorfuse.data import (
    MODALITY_VISUAL,
    Dataset,
    DatasetError,
    FeatureMatrix,
    MessageRecord,
    UserMeta,
    load_dataset,
    load_feature_matrix,
    proportional_counts,
    save_feature_matrix,
    split_train_test,
)


def test_load_jsonl_roundtrip(tmp_path):
    path = write_jsonl_dataset(
        tmp_path / "d.jsonl",
        [simple_record(i, label="fake" if i % 2 else "real") for i in range(8)],
    )
    d = load_dataset(str(path))
    assert len(d) == 8
    assert d.records[0].id == "m000"
    assert d.records[3].label == 1
    assert d.records[0].user.followers == 100
    assert not d.rejections


def test_malformed_rows_rejected_not_fatal(tmp_path):
    path = tmp_path / "d.jsonl"
    lines = [
        json.dumps(simple_record(0)),
        "{not json",
        json.dumps({"id": "m1", "text": "no event id"}),
        json.dumps(simple_record(2)),
    ]
    path.write_text("\n".join(lines) + "\n")
    d = load_dataset(str(path))
    assert len(d) == 2
    assert len(d.rejections) == 2
    assert d.rejections[0].position == 2


def test_duplicate_id_fatal(tmp_path):
    path = write_jsonl_dataset(
        tmp_path / "d.jsonl", [simple_record(1), simple_record(1)]
    )
    with pytest.raises(DatasetError, match="duplicate"):
        load_dataset(str(path))


def test_zero_valid_records_fatal(tmp_path):
    path = tmp_path / "d.jsonl"
    path.write_text("{broken\n")
    with pytest.raises(DatasetError, match="zero valid"):
        load_dataset(str(path))


def test_missing_image_becomes_downgrade(tmp_path):
    path = write_jsonl_dataset(
        tmp_path / "d.jsonl",
        [simple_record(0, image_paths=["nope.png"]), simple_record(1)],
    )
    d = load_dataset(str(path))
    assert d.records[0].image_paths == ()
    assert d.image_downgrades == (("m000", "nope.png"),)


def test_missing_user_meta_imputed(tmp_path):
    rec = simple_record(0)
    del rec["user"]
    path = write_jsonl_dataset(tmp_path / "d.jsonl", [rec])
    d = load_dataset(str(path))
    assert d.records[0].user.was_missing
    assert d.records[0].user.followers == 0


def test_csv_format(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text(
        "id,event_id,text,label,retweet_count,like_count,followers,friends,"
        "posts,times_listed,likes_given,verified,has_profile_image,has_homepage_url,image_paths\n"
        'm0,e0,hello there,real,1,2,10,5,3,0,4,true,true,false,\n'
        'm1,e0,big news !!,fake,9,0,7,9,1,0,0,false,false,false,\n'
    )
    d = load_dataset(str(path), format="csv")
    assert len(d) == 2
    assert d.records[0].label == 0 and d.records[1].label == 1
    assert d.records[0].user.verified


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(DatasetError, match="format"):
        load_dataset("x.parquet", format="parquet")


@given(
    st.lists(st.integers(min_value=1, max_value=50), min_size=1, max_size=6),
    st.integers(min_value=0, max_value=40),
)
def test_proportional_counts_properties(sizes, total):
    total = min(total, sum(sizes))
    counts = proportional_counts(sizes, total)
    assert sum(counts) == total
    for c, s in zip(counts, sizes):
        exact = total * s / sum(sizes)
        assert exact - 1 < c < exact + 1


def _labeled_dataset(n, n_fake):
    recs = tuple(
        MessageRecord(
            id=f"m{i}",
            event_id=f"e{i % 4}",
            text="t",
            user=UserMeta(),
            label=1 if i < n_fake else 0,
        )
        for i in range(n)
    )
    return Dataset(records=recs)


def test_split_sizes_floor():
    d = _labeled_dataset(10, 5)
    train, test = split_train_test(d, 0.2, seed=3)
    assert len(test) == 2 and len(train) == 8
    # floor semantics: 0.25 of 10 -> 2 test rows... 2.5 floors to 2
    _, test = split_train_test(d, 0.25, seed=3)
    assert len(test) == 2


def test_split_stratified_and_disjoint():
    d = _labeled_dataset(40, 10)  # 25% fake
    train, test = split_train_test(d, 0.2, seed=7)
    test_ids = {r.id for r in test.records}
    assert not test_ids & {r.id for r in train.records}
    assert len(test_ids) == 8
    assert sum(r.label for r in test.records) == 2  # 25% of 8
    again_train, again_test = split_train_test(d, 0.2, seed=7)
    assert [r.id for r in again_test.records] == [r.id for r in test.records]
    other = split_train_test(d, 0.2, seed=8)[1]
    assert [r.id for r in other.records] != [r.id for r in test.records]


def test_split_by_event_keeps_events_whole():
    d = _labeled_dataset(40, 20)
    train, test = split_train_test(d, 0.2, seed=1, by_event=True)
    train_events = {r.event_id for r in train.records}
    test_events = {r.event_id for r in test.records}
    assert not train_events & test_events


def test_split_rejects_degenerate_fraction():
    d = _labeled_dataset(10, 5)
    with pytest.raises(ValueError):
        split_train_test(d, 0.0)
    with pytest.raises(ValueError):
        split_train_test(d, 0.05)  # floor -> empty test side


def test_feature_matrix_validation():
    with pytest.raises(ValueError):
        FeatureMatrix(
            column_names=("a", "a"),
            column_modalities=("textual", "textual"),
            values=np.zeros((1, 2)),
            row_ids=("r0",),
        )
    with pytest.raises(ValueError):
        feature_matrix(np.array([[1.0, np.nan]]))


def test_feature_matrix_select_and_take():
    m = feature_matrix(np.arange(12, dtype=float).reshape(3, 4), labels=[0, 1, 0])
    s = m.select(["f2", "f0"])
    assert s.column_names == ("f2", "f0")
    assert np.array_equal(s.values, m.values[:, [2, 0]])
    t = m.take_rows([2, 0])
    assert t.row_ids == ("r2", "r0")
    assert list(t.labels) == [0, 0]
    with pytest.raises(KeyError):
        m.select(["nope"])


def test_save_load_matrix_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    vals = rng.standard_normal((5, 3)) * np.pi
    m = feature_matrix(vals, labels=[1, 0, 1, 1, 0], modality=MODALITY_VISUAL)
    path = str(tmp_path / "m.csv")
    save_feature_matrix(m, path)
    back = load_feature_matrix(path)
    assert back.column_names == m.column_names
    assert back.column_modalities == m.column_modalities
    assert back.row_ids == m.row_ids
    assert np.array_equal(back.values, m.values)  # repr round-trip is exact
    assert np.array_equal(back.labels, m.labels)


def test_save_load_matrix_without_labels(tmp_path):
    m = feature_matrix(np.ones((2, 2)))
    path = str(tmp_path / "m.csv")
    save_feature_matrix(m, path)
    back = load_feature_matrix(path)
    assert back.labels is None
    header = open(path).readline().strip()
    assert header == "id,f0,f1"
