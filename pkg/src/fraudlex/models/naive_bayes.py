"""Gaussian Naive Bayes with per-feature variance smoothing."""

from __future__ import annotations

import numpy as np

from fraudlex.models.common import (
    Explanation,
    check_predict_input,
    check_training_data,
    maybe_standardize,
    standardizer_details,
)
from fraudlex.models.standardize import Standardizer

SMOOTHING_SCALE = 1e-9
# Fallback smoothing when every feature is constant over the whole
# training set (pooled variance 0), so variances stay strictly positive.
SMOOTHING_FLOOR = 1e-12


class GaussianNB:
    kind = "naive_bayes"
    default_standardize = False

    def __init__(self, priors, means, variances, feature_names, standardizer, lexicon_version, metadata):
        self.priors = priors
        self.means = means
        self.variances = variances
        self.feature_names = tuple(feature_names)
        self.standardizer = standardizer
        self.lexicon_version = lexicon_version
        self.metadata = dict(metadata)

    @classmethod
    def fit(cls, dataset, standardize=None, lexicon_version=None) -> "GaussianNB":
        X, y = check_training_data(dataset)
        X, standardizer = maybe_standardize(X, standardize, cls.default_standardize)
        n = X.shape[0]
        priors = np.array([np.sum(y == 0) / n, np.sum(y == 1) / n])
        means = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
        variances = np.stack([X[y == c].var(axis=0) for c in (0, 1)])
        pooled = X.var(axis=0)
        delta = SMOOTHING_SCALE * float(pooled.max())
        if delta == 0.0:
            delta = SMOOTHING_FLOOR
        variances = variances + delta
        return cls(
            priors=priors,
            means=means,
            variances=variances,
            feature_names=dataset.feature_names,
            standardizer=standardizer,
            lexicon_version=lexicon_version,
            metadata={"smoothing_delta": delta, "n_training_rows": int(n)},
        )

    def _prep(self, X) -> np.ndarray:
        X = check_predict_input(X, len(self.feature_names))
        if self.standardizer is not None:
            X = self.standardizer.transform(X)
        return X

    def predict_proba(self, X) -> np.ndarray:
        """Posterior P(class | x) per row; the two columns sum to 1."""
        X = self._prep(X)
        log_joint = np.empty((X.shape[0], 2))
        for c in (0, 1):
            diff = X - self.means[c]
            log_lik = -0.5 * np.sum(
                np.log(2.0 * np.pi * self.variances[c]) + diff * diff / self.variances[c],
                axis=1,
            )
            log_joint[:, c] = np.log(self.priors[c]) + log_lik
        # log-sum-exp normalisation keeps the posteriors finite.
        peak = log_joint.max(axis=1, keepdims=True)
        posterior = np.exp(log_joint - peak)
        return posterior / posterior.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        # argmax takes the first maximum, so an exact tie resolves to class 0.
        return np.argmax(self.predict_proba(X), axis=1).astype(np.int64)

    def explain(self) -> Explanation:
        per_class = {}
        for c in (0, 1):
            per_class[str(c)] = {
                "prior": float(self.priors[c]),
                "features": {
                    name: {"mean": float(self.means[c, j]), "variance": float(self.variances[c, j])}
                    for j, name in enumerate(self.feature_names)
                },
            }
        return Explanation(
            kind=self.kind,
            details={
                "classes": per_class,
                "smoothing_delta": self.metadata["smoothing_delta"],
                "standardizer": standardizer_details(self.standardizer, self.feature_names),
            },
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hyperparameters": {"smoothing_scale": SMOOTHING_SCALE},
            "parameters": {
                "priors": self.priors.tolist(),
                "means": self.means.tolist(),
                "variances": self.variances.tolist(),
            },
            "feature_names": list(self.feature_names),
            "standardizer": None if self.standardizer is None else self.standardizer.to_dict(),
            "lexicon_version": self.lexicon_version,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GaussianNB":
        params = doc["parameters"]
        standardizer = doc.get("standardizer")
        return cls(
            priors=np.array(params["priors"], dtype=np.float64),
            means=np.array(params["means"], dtype=np.float64),
            variances=np.array(params["variances"], dtype=np.float64),
            feature_names=doc["feature_names"],
            standardizer=None if standardizer is None else Standardizer.from_dict(standardizer),
            lexicon_version=doc.get("lexicon_version"),
            metadata=doc.get("metadata", {}),
        )
