"""Four explainable classifiers with a shared fit/predict/explain contract."""

from fraudlex.models.common import (
    Explanation,
    MODEL_KINDS,
    check_predict_input,
    check_training_data,
)
from fraudlex.models.knn import KnnModel
from fraudlex.models.naive_bayes import GaussianNB
from fraudlex.models.persist import file_digest, load_model, save_model
from fraudlex.models.standardize import Standardizer
from fraudlex.models.svm import LinearSvm
from fraudlex.models.tree import DecisionTree, render_tree

_MODEL_CLASSES = {
    "naive_bayes": GaussianNB,
    "tree": DecisionTree,
    "knn": KnnModel,
    "svm": LinearSvm,
}


def fit_model(kind: str, dataset, standardize=None, lexicon_version=None):
    """Train one model kind on a labelled Dataset.

    ``standardize=None`` applies the per-kind default: z-scoring for the
    distance/margin models (kNN, SVM), raw features for NB and the tree.
    """
    try:
        cls = _MODEL_CLASSES[kind]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}") from None
    return cls.fit(dataset, standardize=standardize, lexicon_version=lexicon_version)


__all__ = [
    "DecisionTree",
    "Explanation",
    "GaussianNB",
    "KnnModel",
    "LinearSvm",
    "MODEL_KINDS",
    "Standardizer",
    "check_predict_input",
    "check_training_data",
    "file_digest",
    "fit_model",
    "load_model",
    "render_tree",
    "save_model",
]
