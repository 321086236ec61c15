"""Multimodal rumor verification toolkit.

Feature engineering for social-media messages (content, social context,
image quality and image-spread statistics), information-gain feature
selection, early/late modality fusion, four base classifiers and five
stacking-family ensembles, with deterministic evaluation reports.
"""

from rumorfuse.data import (
    Dataset,
    DatasetError,
    FeatureMatrix,
    MessageRecord,
    UserMeta,
    load_dataset,
    load_feature_matrix,
    save_feature_matrix,
    split_train_test,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DatasetError",
    "FeatureMatrix",
    "MessageRecord",
    "UserMeta",
    "load_dataset",
    "load_feature_matrix",
    "save_feature_matrix",
    "split_train_test",
    "__version__",
]
