"""Per-message visual features: IQA scores plus event-level image statistics.

Seven columns per message: brisque, niqe, piqe (averaged over the
message's attached images, 0 when it has none) and four event-level
statistics broadcast to every message of the event. Image identity for
the most-widespread-image ratio is the SHA-256 of decoded canonical RGB
pixel bytes, so re-encodings with identical pixels collapse while lossy
re-compressions do not.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass

import numpy as np
from PIL import Image

from rumorfuse.data import Dataset, FeatureMatrix, MessageRecord, MODALITY_VISUAL
from rumorfuse.iqa.brisque import brisque_score
from rumorfuse.iqa.model import IqaModel
from rumorfuse.iqa.mscn import load_gray_image, validate_gray
from rumorfuse.iqa.niqe import PATCH_SIZE, niqe_score
from rumorfuse.iqa.piqe import piqe_score

VISUAL_COLUMNS = (
    "brisque",
    "niqe",
    "piqe",
    "count_img",
    "ratio_img1",
    "ratio_img2",
    "ratio_img3",
)


@dataclass(frozen=True)
class EventImageStats:
    """Image-spread statistics of one event.

    count_img: total image attachments across the event's messages.
    ratio_img1: fraction of messages carrying >= 2 images.
    ratio_img2: images per message.
    ratio_img3: share of the most frequent distinct image among all
    attachments (0 when the event has no images).
    """

    count_img: int
    ratio_img1: float
    ratio_img2: float
    ratio_img3: float

    def __post_init__(self):
        if self.count_img < 0:
            raise ValueError("negative image count")
        if self.count_img == 0 and (self.ratio_img1 or self.ratio_img2 or self.ratio_img3):
            raise ValueError("imageless event must have zero ratios")
        if not (0.0 <= self.ratio_img1 <= 1.0 and 0.0 <= self.ratio_img3 <= 1.0):
            raise ValueError("ratio out of range")


def image_content_hash(path) -> str:
    """SHA-256 over canonical decoded pixels (RGB bytes prefixed by size)."""
    with Image.open(path) as im:
        rgb = im.convert("RGB")
        h = hashlib.sha256()
        h.update(f"{rgb.width}x{rgb.height}:".encode())
        h.update(rgb.tobytes())
    return h.hexdigest()


def event_image_stats(events: dict[str, list[MessageRecord]]) -> dict[str, EventImageStats]:
    """Statistics per event; raises on an event with no messages."""
    out = {}
    for event_id, records in events.items():
        if not records:
            raise ValueError(f"event {event_id!r} has no messages")
        n_msgs = len(records)
        count_img = sum(len(r.image_paths) for r in records)
        if count_img == 0:
            out[event_id] = EventImageStats(0, 0.0, 0.0, 0.0)
            continue
        multi = sum(1 for r in records if len(r.image_paths) >= 2)
        hashes = Counter(
            image_content_hash(p) for r in records for p in r.image_paths
        )
        out[event_id] = EventImageStats(
            count_img=count_img,
            ratio_img1=multi / n_msgs,
            ratio_img2=count_img / n_msgs,
            ratio_img3=max(hashes.values()) / count_img,
        )
    return out


def _prepare_for_iqa(path) -> np.ndarray:
    """Load luminance; inflate tiny images so one NIQE patch always fits."""
    gray = load_gray_image(path)
    short = min(gray.shape)
    if short < PATCH_SIZE:
        factor = int(np.ceil(PATCH_SIZE / short))
        with Image.open(path) as im:
            im = im.convert("RGB")
            big = im.resize((im.width * factor, im.height * factor), Image.BILINEAR)
            arr = np.asarray(big, dtype=np.float64)
        gray = validate_gray(arr @ np.array([0.299, 0.587, 0.114]))
    return gray


def score_image(path, brisque_model: IqaModel, niqe_model: IqaModel) -> tuple[float, float, float]:
    """(brisque, niqe, piqe) for one image file."""
    gray = _prepare_for_iqa(path)
    return (
        brisque_score(gray, brisque_model),
        niqe_score(gray, niqe_model),
        piqe_score(gray),
    )


def visual_feature_matrix(
    d: Dataset, brisque_model: IqaModel, niqe_model: IqaModel
) -> FeatureMatrix:
    """The 7-column visual block, one row per message.

    IQA columns are the mean over a message's attached images; messages
    without images get 0 in all three (callers wanting to exclude them
    filter the dataset first). Event statistics are computed once per
    event and broadcast to its messages. Per-image scores are cached by
    path, so shared attachments are scored once.
    """
    events: dict[str, list[MessageRecord]] = {}
    for r in d.records:
        events.setdefault(r.event_id, []).append(r)
    stats = event_image_stats(events)

    cache: dict[str, tuple[float, float, float]] = {}
    rows = []
    for r in d.records:
        if r.image_paths:
            scores = []
            for p in r.image_paths:
                if p not in cache:
                    cache[p] = score_image(p, brisque_model, niqe_model)
                scores.append(cache[p])
            iqa = np.mean(np.array(scores, dtype=np.float64), axis=0)
        else:
            iqa = np.zeros(3)
        s = stats[r.event_id]
        rows.append(
            np.concatenate(
                [iqa, [s.count_img, s.ratio_img1, s.ratio_img2, s.ratio_img3]]
            )
        )
    labels = None
    if d.records and all(r.label is not None for r in d.records):
        labels = np.array([r.label for r in d.records], dtype=np.int64)
    return FeatureMatrix(
        column_names=VISUAL_COLUMNS,
        column_modalities=tuple([MODALITY_VISUAL] * len(VISUAL_COLUMNS)),
        values=np.vstack(rows) if rows else np.empty((0, len(VISUAL_COLUMNS))),
        row_ids=tuple(r.id for r in d.records),
        labels=labels,
    )
