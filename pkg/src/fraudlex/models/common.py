"""Shared plumbing for the classifier implementations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fraudlex.errors import (
    DegenerateFeatures,
    DimensionMismatch,
    SingleClassTraining,
)

MODEL_KINDS: tuple[str, ...] = ("naive_bayes", "tree", "knn", "svm")

# Display names used in report columns, keyed by kind.
MODEL_DISPLAY_NAMES = {
    "naive_bayes": "Naive Bayes",
    "tree": "DTree (d=3)",
    "knn": "kNN(k=3)",
    "svm": "SVM(Linear)",
}


@dataclass(frozen=True)
class Explanation:
    """Everything needed to recompute a model's prediction by hand."""

    kind: str
    details: dict


def check_training_data(dataset) -> tuple[np.ndarray, np.ndarray]:
    """Validate a labelled dataset for fitting; return (X, y) float64/int64."""
    X = dataset.matrix()
    y = dataset.labels()
    if X.ndim != 2 or X.shape[0] == 0:
        raise DegenerateFeatures("training data must be a non-empty 2-D matrix")
    if not np.all(np.isfinite(X)):
        raise DegenerateFeatures("training features contain NaN or infinite values")
    if len(np.unique(y)) < 2:
        raise SingleClassTraining(
            "training data must contain at least one row of each class"
        )
    return X, y


def maybe_standardize(X: np.ndarray, standardize, default: bool):
    """Resolve the standardize flag and fit on X if it lands on."""
    from fraudlex.models.standardize import Standardizer

    enabled = default if standardize is None else bool(standardize)
    if not enabled:
        return X, None
    standardizer = Standardizer.fit(X)
    return standardizer.transform(X), standardizer


def standardizer_details(standardizer, feature_names) -> dict | None:
    """Per-feature scaling table for explanations; None when raw features.

    ``scale`` is the divisor actually applied (sd after flooring), so a
    hand trace is exactly z = (x - mean) / scale.
    """
    if standardizer is None:
        return None
    from fraudlex.models.standardize import SD_FLOOR

    return {
        name: {
            "mean": float(standardizer.mean[j]),
            "scale": float(max(standardizer.sd[j], SD_FLOOR)),
        }
        for j, name in enumerate(feature_names)
    }


def check_predict_input(X, n_features: int) -> np.ndarray:
    """Coerce predict input to a 2-D float64 matrix of the trained width."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise DimensionMismatch(
            f"expected rows with {n_features} features, got shape {X.shape}"
        )
    if not np.all(np.isfinite(X)):
        raise DegenerateFeatures("prediction features contain NaN or infinite values")
    return X
