"""Per-feature z-scoring fitted on training rows only."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SD_FLOOR = 1e-12


@dataclass(frozen=True)
class Standardizer:
    """transform(x) = (x - mean) / max(sd, 1e-12), per feature."""

    mean: np.ndarray
    sd: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        mean = X.mean(axis=0)
        sd = X.std(axis=0)  # population (n) denominator
        mean.setflags(write=False)
        sd.setflags(write=False)
        return cls(mean=mean, sd=sd)

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return (X - self.mean) / np.maximum(self.sd, SD_FLOOR)

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "sd": self.sd.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "Standardizer":
        mean = np.array(doc["mean"], dtype=np.float64)
        sd = np.array(doc["sd"], dtype=np.float64)
        mean.setflags(write=False)
        sd.setflags(write=False)
        return cls(mean=mean, sd=sd)
