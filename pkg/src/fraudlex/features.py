"""Feature assembly: marker counts + sentiment statistics per conversation.

The canonical combined layout is 27 columns: the 16 marker categories in
lexicon order, then the 11 sentiment statistics. Subset datasets
(markers-only, sentiment-only) are contiguous slices of that layout, so
``project`` never recomputes anything.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from fraudlex.errors import (
    DimensionMismatch,
    MalformedDocument,
    NoCustomerResponses,
)
from fraudlex.markers import (
    CATEGORY_NAMES,
    MarkerLexicon,
    conversation_marker_features,
    default_lexicon,
)
from fraudlex.sentiment import (
    SENTIMENT_STAT_NAMES,
    LexiconScorer,
    aggregate_sentiment,
)

FEATURE_NAMES: tuple[str, ...] = CATEGORY_NAMES + SENTIMENT_STAT_NAMES

assert len(FEATURE_NAMES) == 27


class FeatureSubset(enum.Enum):
    MARKERS = "markers"
    SENTIMENT = "sentiment"
    COMBINED = "combined"


_SUBSET_SLICES = {
    FeatureSubset.MARKERS: slice(0, len(CATEGORY_NAMES)),
    FeatureSubset.SENTIMENT: slice(len(CATEGORY_NAMES), len(FEATURE_NAMES)),
    FeatureSubset.COMBINED: slice(0, len(FEATURE_NAMES)),
}


def subset_feature_names(subset: FeatureSubset) -> tuple[str, ...]:
    return FEATURE_NAMES[_SUBSET_SLICES[subset]]


@dataclass(frozen=True)
class FeatureVector:
    """One conversation's feature row with its stable id and optional label."""

    row_id: str
    values: tuple
    label: int | None


@dataclass
class Dataset:
    """Feature rows sharing one subset layout, in insertion order."""

    subset: FeatureSubset
    rows: list

    @property
    def feature_names(self) -> tuple[str, ...]:
        return subset_feature_names(self.subset)

    def __len__(self) -> int:
        return len(self.rows)

    def matrix(self) -> np.ndarray:
        return np.array([r.values for r in self.rows], dtype=np.float64)

    def labels(self) -> np.ndarray:
        if any(r.label is None for r in self.rows):
            raise MalformedDocument("dataset contains unlabelled rows")
        return np.array([r.label for r in self.rows], dtype=np.int64)

    def row_ids(self) -> tuple[str, ...]:
        return tuple(r.row_id for r in self.rows)


def featurize(
    corpus,
    subset: FeatureSubset = FeatureSubset.COMBINED,
    lexicon: MarkerLexicon | None = None,
    scorer=None,
    per_1000_tokens: bool = False,
) -> Dataset:
    """Build one feature row per transcript, in corpus order.

    ``scorer`` is any callable ``(transcript_id, response_index, stream)
    -> float``; the lexicon scorer is the default. A transcript with no
    customer responses cannot be featurised and raises
    NoCustomerResponses rather than emitting a degenerate row.
    """
    if lexicon is None:
        lexicon = default_lexicon()
    if scorer is None:
        scorer = LexiconScorer()
    rows = []
    for transcript in corpus.transcripts:
        responses = transcript.customer_responses()
        if not responses:
            raise NoCustomerResponses(
                f"transcript {transcript.id!r} has no customer turns with text"
            )
        values: list[float] = []
        if subset in (FeatureSubset.MARKERS, FeatureSubset.COMBINED):
            marker_row = conversation_marker_features(
                responses, lexicon, per_1000_tokens=per_1000_tokens
            )
            values.extend(float(v) for v in marker_row)
        if subset in (FeatureSubset.SENTIMENT, FeatureSubset.COMBINED):
            scores = [
                scorer(transcript.id, i, stream) for i, stream in enumerate(responses)
            ]
            values.extend(aggregate_sentiment(scores).as_values())
        rows.append(
            FeatureVector(row_id=transcript.id, values=tuple(values), label=transcript.label)
        )
    return Dataset(subset=subset, rows=rows)


def project(dataset: Dataset, subset: FeatureSubset) -> Dataset:
    """Slice a combined dataset down to a subset without recomputation."""
    if subset == dataset.subset:
        return Dataset(subset=subset, rows=list(dataset.rows))
    if dataset.subset != FeatureSubset.COMBINED:
        raise DimensionMismatch(
            f"cannot project a {dataset.subset.value} dataset to {subset.value}; "
            "only combined datasets can be projected"
        )
    sl = _SUBSET_SLICES[subset]
    rows = [
        FeatureVector(row_id=r.row_id, values=r.values[sl], label=r.label)
        for r in dataset.rows
    ]
    return Dataset(subset=subset, rows=rows)


def write_matrix(dataset: Dataset, path) -> None:
    """CSV with header `id,<feature names>,label`; full float precision."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("id",) + dataset.feature_names + ("label",))
        for row in dataset.rows:
            label = "" if row.label is None else str(row.label)
            writer.writerow(
                [row.row_id] + [repr(float(v)) for v in row.values] + [label]
            )


def read_matrix(path) -> Dataset:
    """Read a CSV written by write_matrix; values round-trip exactly."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedDocument(f"{path}: empty feature matrix") from None
        subset = None
        for candidate in FeatureSubset:
            expected = ["id", *subset_feature_names(candidate), "label"]
            if header == expected:
                subset = candidate
                break
        if subset is None:
            raise MalformedDocument(f"{path}: unrecognised feature matrix header")
        n_features = len(subset_feature_names(subset))
        rows = []
        for line_no, record in enumerate(reader, start=2):
            if len(record) != n_features + 2:
                raise MalformedDocument(
                    f"{path}:{line_no}: expected {n_features + 2} fields, got {len(record)}"
                )
            try:
                values = tuple(float(v) for v in record[1:-1])
            except ValueError as exc:
                raise MalformedDocument(f"{path}:{line_no}: {exc}") from exc
            if any(not math.isfinite(v) for v in values):
                raise MalformedDocument(f"{path}:{line_no}: non-finite feature value")
            try:
                label = None if record[-1] == "" else int(record[-1])
            except ValueError as exc:
                raise MalformedDocument(f"{path}:{line_no}: {exc}") from exc
            if label not in (None, 0, 1):
                raise MalformedDocument(f"{path}:{line_no}: label must be 0 or 1, got {label}")
            rows.append(FeatureVector(row_id=record[0], values=values, label=label))
    return Dataset(subset=subset, rows=rows)
