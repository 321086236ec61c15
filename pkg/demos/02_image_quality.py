"""
No-reference image quality under synthetic distortions
======================================================

Takes one bundled pristine image, degrades it five ways, and prints the
three quality scores. All three are "lower is better"; every distortion
should push every score up.
"""

from importlib.resources import files

from rumorfuse.iqa.brisque import brisque_score
from rumorfuse.iqa.distort import add_gaussian_noise, jpeg_recompress, median_blur
from rumorfuse.iqa.mscn import load_gray_image, mscn_transform
from rumorfuse.iqa.niqe import niqe_score
from rumorfuse.iqa.piqe import piqe_assess
from rumorfuse.pipeline import default_iqa_models

path = files("rumorfuse") / "resources" / "pristine" / "pristine_00.png"
img = load_gray_image(path)
print(f"image: {path.name}, shape {img.shape}, range [{img.min():.0f}, {img.max():.0f}]")

# the shared front end of BRISQUE and NIQE: divisive normalization.
# On natural images the normalized coefficients are near-Gaussian.
mscn = mscn_transform(img)
print(f"MSCN mean {mscn.mean():+.4f}, std {mscn.std():.3f} (near 0 / below 1 is typical)\n")

bmodel, nmodel = default_iqa_models()
variants = [
    ("pristine", img),
    ("noise sigma=5", add_gaussian_noise(img, 5.0, seed=1)),
    ("noise sigma=20", add_gaussian_noise(img, 20.0, seed=2)),
    ("jpeg q=30", jpeg_recompress(img, quality=30)),
    ("median 9x9", median_blur(img, size=9)),
]

print(f"{'variant':16s} {'brisque':>8s} {'niqe':>8s} {'piqe':>8s}  noisy/active blocks")
for name, variant in variants:
    piqe = piqe_assess(variant)
    print(
        f"{name:16s} {brisque_score(variant, bmodel):8.2f} "
        f"{niqe_score(variant, nmodel):8.2f} {piqe.score:8.2f}  "
        f"{piqe.n_noise}/{piqe.n_active}"
    )
