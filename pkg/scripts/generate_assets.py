"""Regenerate the bundled binary assets from code.

Everything binary in src/rumorfuse/resources/ comes out of this script:
the synthetic pristine photo corpus, the fitted BRISQUE/NIQE models with
their score calibration, and the mini end-to-end dataset. Rerunning with
an unchanged recipe reproduces the files bit for bit.

    python3 scripts/generate_assets.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image

ROOT = Path(__file__).resolve().parents[1]
RES = ROOT / "src" / "rumorfuse" / "resources"

sys.path.insert(0, str(ROOT / "src"))

from rumorfuse.iqa.brisque import brisque_features, N_FEATURES  # noqa: E402
from rumorfuse.iqa.distort import add_gaussian_noise, jpeg_recompress, median_blur  # noqa: E402
from rumorfuse.iqa.model import IqaModel, calibrate, fit_feature_model, save_model  # noqa: E402
from rumorfuse.iqa.niqe import fit_niqe_model  # noqa: E402


# ---------------------------------------------------------------- corpus

def pink_noise(rng: np.random.Generator, size: int, beta: float = 1.6) -> np.ndarray:
    """1/f^beta noise field, unit-ish variance, zero mean."""
    white = rng.standard_normal((size, size))
    spectrum = np.fft.fft2(white)
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.fftfreq(size)[None, :]
    f = np.sqrt(fx * fx + fy * fy)
    f[0, 0] = 1.0
    shaped = np.real(np.fft.ifft2(spectrum / f**beta))
    shaped -= shaped.mean()
    return shaped / shaped.std()


def bandpass_noise(rng: np.random.Generator, size: int, lo: float, hi: float) -> np.ndarray:
    """Unit-variance noise restricted to a radial frequency band (cycles/image)."""
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.fftfreq(size)[None, :]
    f = np.sqrt(fx * fx + fy * fy) * size
    mask = (f >= lo) & (f <= hi)
    spectrum = (rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))) * mask
    field = np.real(np.fft.ifft2(spectrum))
    s = field.std()
    return field / s if s > 0 else field


def synth_pristine(seed: int, size: int = 384) -> np.ndarray:
    """One synthetic 'photograph': smooth structures, sharp contours, fine texture.

    The texture amplitudes are deliberate. Fine detail with local contrast
    near one gray level puts the 16x16 MSCN block variance in roughly
    0.15-0.35: spatially active, yet below the level where homogeneous
    blocks start reading as noise. Clean images then score low on all three
    quality metrics while noise, recompression, and blur all push the
    block statistics into the flagged regimes.
    """
    rng = np.random.default_rng(seed)
    size_f = float(size)
    base = 30.0 * pink_noise(rng, size)

    # global illumination gradient
    yy, xx = np.mgrid[0:size, 0:size] / size_f
    base += 120.0 + 45.0 * (rng.uniform(-1, 1) * xx + rng.uniform(-1, 1) * yy)

    # sharp-edged elliptical objects, a few pixels of transition
    cols = np.arange(size, dtype=float)[None, :]
    rows = np.arange(size, dtype=float)[:, None]
    for _ in range(5):
        cx, cy = rng.uniform(0.1, 0.9, 2) * size_f
        ra, rb = rng.uniform(0.08, 0.23, 2) * size_f
        theta = rng.uniform(0, np.pi)
        dx = cols - cx
        dy = rows - cy
        u = np.cos(theta) * dx + np.sin(theta) * dy
        v = -np.sin(theta) * dx + np.cos(theta) * dy
        d = np.sqrt((u / ra) ** 2 + (v / rb) ** 2) - 1.0
        edge = 1.0 / (1.0 + np.exp(np.clip(d * min(ra, rb) / 0.8, -500.0, 500.0)))
        base += float(rng.choice([-1.0, 1.0])) * rng.uniform(30, 55) * edge

    # fine surface texture plus a whisper of grain
    base += 1.2 * bandpass_noise(rng, size, 60.0 * size / 384.0, 160.0 * size / 384.0)
    base += rng.normal(0.0, 0.2, (size, size))

    lo, hi = np.percentile(base, [0.2, 99.8])
    img = (base - lo) / (hi - lo) * 225.0 + 15.0
    return np.clip(img, 0.0, 255.0)


def write_corpus(n_images: int = 24, size: int = 384) -> list[np.ndarray]:
    out = RES / "pristine"
    out.mkdir(parents=True, exist_ok=True)
    corpus = []
    for i in range(n_images):
        img = synth_pristine(seed=100 + i, size=size)
        arr = np.clip(np.round(img), 0, 255).astype(np.uint8)
        Image.fromarray(arr, mode="L").save(out / f"pristine_{i:02d}.png")
        corpus.append(arr.astype(np.float64))
    print(f"corpus: {n_images} images of {size}x{size} -> {out}")
    return corpus


# ---------------------------------------------------------------- models

def quadrant_crops(img: np.ndarray) -> list[np.ndarray]:
    h, w = img.shape
    hh, hw = h // 2, w // 2
    return [img, img[:hh, :hw], img[:hh, hw:], img[hh:, :hw], img[hh:, hw:]]


def fit_brisque_model(corpus: list[np.ndarray]) -> IqaModel:
    """Population over full images + quadrants so n comfortably exceeds d."""
    feats = np.vstack(
        [brisque_features(crop) for img in corpus for crop in quadrant_crops(img)]
    )
    assert feats.shape[1] == N_FEATURES
    model = fit_feature_model(feats)

    def dist(img):
        diff = brisque_features(img) - model.mu
        return float(np.sqrt(max(diff @ model.precision() @ diff, 0.0)))

    pristine_d = [dist(img) for img in corpus]
    distorted_d = []
    for i, img in enumerate(corpus):
        distorted_d.append(dist(add_gaussian_noise(img, 20, seed=i)))
        distorted_d.append(dist(jpeg_recompress(img, 30)))
        distorted_d.append(dist(median_blur(img, 9)))
    return calibrate(model, pristine_d, distorted_d)


def write_models(corpus: list[np.ndarray]) -> None:
    out = RES / "iqa"
    out.mkdir(parents=True, exist_ok=True)
    bm = fit_brisque_model(corpus)
    save_model(bm, out / "brisque_model.json")
    print(f"brisque model: d={bm.d} calibration={bm.calibration}")
    nm = fit_niqe_model(corpus)
    save_model(nm, out / "niqe_model.json")
    print(f"niqe model: d={nm.d}")


# ------------------------------------------------------------ mini dataset

REAL_TEMPLATES = [
    "Officials have confirmed the report about {topic}. Updates to follow.",
    "Verified sources say the situation near {place} is under control now.",
    "The mayor of {place} thanked rescue teams for their accurate work.",
    "Local media published a calm, factual summary of the {topic} incident.",
    "Authorities released official figures on {topic} this morning.",
    "Reporters at {place} describe a peaceful scene and a steady recovery.",
]

FAKE_TEMPLATES = [
    "WOW!! You will not believe what happened at {place}!!! Total disaster!!",
    "BREAKING!!! Secret sources say {topic} was a hoax. They lie to you!!",
    "SHOCKING photo from {place}!!! The horror is unbelievable!! Share now!!",
    "They are hiding the truth about {topic}!!! Everyone is in danger!!",
    "OMG!! {place} is destroyed!!! The crisis is worse than they admit!!",
    "Fake experts deny it but the {topic} threat is real!!! Panic everywhere!!",
]

TOPICS = ["the flood", "the blackout", "the storm", "the crash", "the fire", "the outbreak"]
PLACES = ["Riverside", "Oakden", "Port Malin", "Eastbrook", "Fairhaven", "Norwick"]


def synth_mini_image(rng: np.random.Generator, distort: bool) -> np.ndarray:
    img = synth_pristine(seed=int(rng.integers(10_000, 1_000_000)), size=192)
    if distort:
        choice = rng.integers(0, 3)
        if choice == 0:
            img = add_gaussian_noise(img, float(rng.uniform(10, 22)), seed=int(rng.integers(1e6)))
        elif choice == 1:
            img = jpeg_recompress(img, int(rng.integers(20, 35)))
        else:
            img = median_blur(img, 7)
    return img


def write_mini(n_messages: int = 50, n_images: int = 20) -> None:
    out = RES / "mini"
    img_dir = out / "images"
    img_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(7)

    # half the images clean (attached to real messages), half distorted
    image_files = []
    for i in range(n_images):
        distort = i >= n_images // 2
        img = synth_mini_image(rng, distort)
        arr = np.clip(np.round(img), 0, 255).astype(np.uint8)
        if i % 3 == 2:
            name = f"images/img_{i:02d}.jpg"
            Image.fromarray(arr, mode="L").convert("RGB").save(out / name, quality=88)
        else:
            name = f"images/img_{i:02d}.png"
            Image.fromarray(arr, mode="L").save(out / name)
        image_files.append(name)
    clean_imgs = image_files[: n_images // 2]
    noisy_imgs = image_files[n_images // 2 :]

    events = [f"e{k}" for k in range(1, 7)]
    records = []
    for i in range(n_messages):
        fake = i % 2 == 1
        event = events[i % len(events)]
        tpl = (FAKE_TEMPLATES if fake else REAL_TEMPLATES)[int(rng.integers(6))]
        text = tpl.format(topic=TOPICS[int(rng.integers(6))], place=PLACES[int(rng.integers(6))])
        if fake and rng.random() < 0.5:
            text += " :("
        if not fake and rng.random() < 0.4:
            text += " :)"
        if fake and rng.random() < 0.5:
            text += " http://short.ln/x" + str(i)
        if rng.random() < 0.3:
            text += f" @user{int(rng.integers(100))}"
        if rng.random() < 0.4:
            text += " #" + TOPICS[int(rng.integers(6))].split()[-1]

        pool = noisy_imgs if fake else clean_imgs
        n_attach = 0
        if rng.random() < 0.7:
            n_attach = 1 + int(rng.random() < 0.25)
        paths = [pool[int(rng.integers(len(pool)))] for _ in range(n_attach)]

        followers = int(rng.integers(50, 2000)) if fake else int(rng.integers(500, 20000))
        friends = int(rng.integers(500, 5000)) if fake else int(rng.integers(50, 1500))
        records.append(
            {
                "id": f"m{i:03d}",
                "event_id": event,
                "text": text,
                "label": "fake" if fake else "real",
                "retweet_count": int(rng.integers(0, 80) * (3 if fake else 1)),
                "like_count": int(rng.integers(0, 120)),
                "user": {
                    "followers": followers,
                    "friends": friends,
                    "posts": int(rng.integers(10, 3000)),
                    "times_listed": int(rng.integers(0, 40)) if fake else int(rng.integers(5, 200)),
                    "likes_given": int(rng.integers(0, 2000)),
                    "verified": bool(rng.random() < (0.05 if fake else 0.45)),
                    "has_profile_image": bool(rng.random() < (0.6 if fake else 0.95)),
                    "has_homepage_url": bool(rng.random() < (0.2 if fake else 0.6)),
                },
                "image_paths": paths,
            }
        )
    with open(out / "messages.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    n_with = sum(1 for r in records if r["image_paths"])
    print(f"mini dataset: {n_messages} messages ({n_with} with images), {n_images} image files -> {out}")


if __name__ == "__main__":
    corpus = write_corpus()
    write_models(corpus)
    write_mini()
