"""k-nearest-neighbours (k = 3) over standardized rows.

Neighbour order is (Euclidean distance, training row id), with the row
id being the stable conversation id string, so predictions cannot depend
on the order training rows happened to be listed in.
"""

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

K = 3


class KnnModel:
    kind = "knn"
    default_standardize = True

    def __init__(self, X, y, row_ids, feature_names, standardizer, lexicon_version, metadata):
        self.X = X
        self.y = y
        self.row_ids = tuple(row_ids)
        self.feature_names = tuple(feature_names)
        self.standardizer = standardizer
        self.lexicon_version = lexicon_version
        self.metadata = dict(metadata)

    @classmethod
    def fit(cls, dataset, standardize=None, lexicon_version=None) -> "KnnModel":
        X, y = check_training_data(dataset)
        X, standardizer = maybe_standardize(X, standardize, cls.default_standardize)
        return cls(
            X=X,
            y=y,
            row_ids=dataset.row_ids(),
            feature_names=dataset.feature_names,
            standardizer=standardizer,
            lexicon_version=lexicon_version,
            metadata={"k": K, "k_effective": min(K, X.shape[0]), "n_training_rows": int(X.shape[0])},
        )

    def _prep(self, X) -> np.ndarray:
        X = check_predict_input(X, len(self.feature_names))
        if self.standardizer is not None:
            X = self.standardizer.transform(X)
        return X

    def _neighbours(self, row: np.ndarray) -> list:
        """All training rows as (distance, row id, label), nearest first."""
        diff = self.X - row
        distances = np.sqrt(np.sum(diff * diff, axis=1))
        order = sorted(
            range(len(self.row_ids)),
            key=lambda i: (distances[i], self.row_ids[i]),
        )
        return [(float(distances[i]), self.row_ids[i], int(self.y[i])) for i in order]

    def predict(self, X) -> np.ndarray:
        X = self._prep(X)
        k_eff = min(K, self.X.shape[0])
        out = np.empty(X.shape[0], dtype=np.int64)
        for i, row in enumerate(X):
            nearest = self._neighbours(row)[:k_eff]
            votes = sum(label for _, _, label in nearest)
            if 2 * votes == k_eff:  # even k_eff can tie; fall back to the nearest
                out[i] = nearest[0][2]
            else:
                out[i] = 1 if 2 * votes > k_eff else 0
        return out

    def explain(self, query=None) -> Explanation:
        """Without a query: the stored rows. With one: its k neighbours."""
        details = {
            "k": K,
            "k_effective": min(K, self.X.shape[0]),
            "n_training_rows": self.X.shape[0],
            "standardizer": standardizer_details(self.standardizer, self.feature_names),
            "vote_rule": (
                "majority label of the listed neighbours; "
                "an exact tie resolves to the nearest neighbour's label"
            ),
        }
        if query is not None:
            row = self._prep(query)[0]
            nearest = self._neighbours(row)[: details["k_effective"]]
            details["neighbours"] = [
                {"row_id": rid, "distance": dist, "label": label}
                for dist, rid, label in nearest
            ]
        return Explanation(kind=self.kind, details=details)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hyperparameters": {"k": K},
            "parameters": {
                "rows": self.X.tolist(),
                "labels": self.y.tolist(),
                "row_ids": list(self.row_ids),
            },
            "feature_names": list(self.feature_names),
            "standardizer": None if self.standardizer is None else self.standardizer.to_dict(),
            "lexicon_version": self.lexicon_version,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "KnnModel":
        params = doc["parameters"]
        standardizer = doc.get("standardizer")
        return cls(
            X=np.array(params["rows"], dtype=np.float64),
            y=np.array(params["labels"], dtype=np.int64),
            row_ids=params["row_ids"],
            feature_names=doc["feature_names"],
            standardizer=None if standardizer is None else Standardizer.from_dict(standardizer),
            lexicon_version=doc.get("lexicon_version"),
            metadata=doc.get("metadata", {}),
        )
