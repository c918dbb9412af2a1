"""Soft-margin linear SVM (C = 1) trained by dual coordinate descent.

The bias is learned by appending a constant-1 column before handing the
problem to the kernel, which keeps the dual a pure box-constrained
problem with a fixed deterministic sweep order. Non-convergence at the
iteration cap is not an error; the best iterate is returned and the cap
is recorded in the model metadata.
"""

from __future__ import annotations

import numpy as np

from fraudlex import _kernels
from fraudlex.models.common import (
    Explanation,
    check_predict_input,
    check_training_data,
    maybe_standardize,
    standardizer_details,
)
from fraudlex.models.standardize import Standardizer

C = 1.0
TOLERANCE = 1e-6
MAX_EPOCHS = 20000


class LinearSvm:
    kind = "svm"
    default_standardize = True

    def __init__(self, w, b, feature_names, standardizer, lexicon_version, metadata, alpha=None):
        self.w = w
        self.b = b
        self.feature_names = tuple(feature_names)
        self.standardizer = standardizer
        self.lexicon_version = lexicon_version
        self.metadata = dict(metadata)
        self.alpha = alpha  # kept in memory for diagnostics, not persisted

    @classmethod
    def fit(cls, dataset, standardize=None, lexicon_version=None) -> "LinearSvm":
        X, y = check_training_data(dataset)
        X, standardizer = maybe_standardize(X, standardize, cls.default_standardize)
        signed = np.where(y == 1, 1.0, -1.0)
        augmented = np.ascontiguousarray(
            np.hstack([X, np.ones((X.shape[0], 1))]), dtype=np.float64
        )
        w_aug, alpha, epochs, residual = _kernels.dual_cd(
            augmented, signed, C, TOLERANCE, MAX_EPOCHS
        )
        w_aug = np.asarray(w_aug, dtype=np.float64)
        return cls(
            w=w_aug[:-1].copy(),
            b=float(w_aug[-1]),
            feature_names=dataset.feature_names,
            standardizer=standardizer,
            lexicon_version=lexicon_version,
            metadata={
                "C": C,
                "tolerance": TOLERANCE,
                "max_epochs": MAX_EPOCHS,
                "epochs_run": int(epochs),
                "converged": bool(residual <= TOLERANCE),
                "final_residual": float(residual),
                "kernel_backend": _kernels.BACKEND,
                "n_training_rows": int(X.shape[0]),
            },
            alpha=np.asarray(alpha, dtype=np.float64),
        )

    def _prep(self, X) -> np.ndarray:
        X = check_predict_input(X, len(self.feature_names))
        if self.standardizer is not None:
            X = self.standardizer.transform(X)
        return X

    def decision_function(self, X) -> np.ndarray:
        X = self._prep(X)
        return X @ self.w + self.b

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(np.int64)

    def explain(self) -> Explanation:
        weights = {
            name: float(self.w[j]) for j, name in enumerate(self.feature_names)
        }
        return Explanation(
            kind=self.kind,
            details={
                "weights": weights,
                "bias": float(self.b),
                "standardizer": standardizer_details(self.standardizer, self.feature_names),
                "decision_rule": (
                    "standardize x if a standardizer table is present, "
                    "then predict 1 iff dot(weights, x) + bias >= 0"
                ),
                "converged": self.metadata.get("converged"),
            },
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hyperparameters": {"C": C, "tolerance": TOLERANCE, "max_epochs": MAX_EPOCHS},
            "parameters": {"w": self.w.tolist(), "b": self.b},
            "feature_names": list(self.feature_names),
            "standardizer": None if self.standardizer is None else self.standardizer.to_dict(),
            "lexicon_version": self.lexicon_version,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "LinearSvm":
        params = doc["parameters"]
        standardizer = doc.get("standardizer")
        return cls(
            w=np.array(params["w"], dtype=np.float64),
            b=float(params["b"]),
            feature_names=doc["feature_names"],
            standardizer=None if standardizer is None else Standardizer.from_dict(standardizer),
            lexicon_version=doc.get("lexicon_version"),
            metadata=doc.get("metadata", {}),
        )
