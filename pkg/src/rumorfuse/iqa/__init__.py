"""No-reference image quality assessment: BRISQUE, NIQE, PIQE.

All three operate on float64 luminance in [0,255]; see ``mscn`` for image
preparation helpers and the shared normalization constants.
"""

from rumorfuse.iqa.aggd import AggdParams, fit_aggd, fit_ggd
from rumorfuse.iqa.brisque import brisque_features, brisque_score
from rumorfuse.iqa.model import (
    IqaModel,
    calibrate,
    fit_feature_model,
    fit_pristine_model,
    load_model,
    save_model,
)
from rumorfuse.iqa.mscn import (
    downsample2,
    load_gray_image,
    local_stats,
    mscn_transform,
    paired_products,
    rgb_to_gray,
    validate_gray,
)
from rumorfuse.iqa.niqe import fit_niqe_model, niqe_patch_features, niqe_score
from rumorfuse.iqa.piqe import PiqeResult, piqe_assess, piqe_score

__all__ = [
    "AggdParams",
    "IqaModel",
    "PiqeResult",
    "brisque_features",
    "brisque_score",
    "calibrate",
    "downsample2",
    "fit_aggd",
    "fit_feature_model",
    "fit_ggd",
    "fit_niqe_model",
    "fit_pristine_model",
    "load_gray_image",
    "load_model",
    "local_stats",
    "mscn_transform",
    "niqe_patch_features",
    "niqe_score",
    "paired_products",
    "piqe_assess",
    "piqe_score",
    "rgb_to_gray",
    "save_model",
    "validate_gray",
]
