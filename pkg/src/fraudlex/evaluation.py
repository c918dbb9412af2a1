"""Stratified K-fold cross-validation and report rendering.

The fold planner spreads each class's rows as evenly as possible: every
fold gets floor(n_c / K) rows of class c, and the n_c mod K leftovers go
to the currently smallest folds (ties by fold index). That keeps both
the per-class counts and the total fold sizes within 1 of each other. A
class with fewer rows than K degrades gracefully (rows spread one per
fold) and records a warning.
"""

from __future__ import annotations

import hashlib
import json
import statistics
from dataclasses import dataclass

import numpy as np

from fraudlex.errors import InvalidConfig, TooFewRows
from fraudlex.features import Dataset
from fraudlex.models import fit_model
from fraudlex.models.common import MODEL_DISPLAY_NAMES, MODEL_KINDS

K_DEFAULT = 10

REPORT_FORMAT_VERSION = "fraudlex-report-v1"

_SUBSET_DISPLAY = {
    "markers": "Markers",
    "sentiment": "Sentiment",
    "combined": "Markers + Sentiment",
}


@dataclass(frozen=True)
class FoldPlan:
    """Map row id -> fold index, plus how the plan was made."""

    K: int
    seed: int
    stratified: bool
    assignments: dict
    warnings: tuple

    def fold_of(self, row_id: str) -> int:
        return self.assignments[row_id]

    def fold_sizes(self) -> list:
        sizes = [0] * self.K
        for fold in self.assignments.values():
            sizes[fold] += 1
        return sizes

    def digest(self) -> str:
        canonical = json.dumps(
            {
                "K": self.K,
                "seed": self.seed,
                "stratified": self.stratified,
                "assignments": self.assignments,
            },
            sort_keys=True,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "seed": self.seed,
            "stratified": self.stratified,
            "assignments": dict(self.assignments),
            "warnings": list(self.warnings),
            "digest": self.digest(),
        }


def make_folds(dataset: Dataset, K: int = K_DEFAULT, seed: int = 0, stratified: bool = True) -> FoldPlan:
    if K < 2:
        raise InvalidConfig(f"K must be at least 2, got {K}")
    n = len(dataset)
    if n < K:
        raise TooFewRows(f"{n} rows cannot fill {K} folds")
    y = dataset.labels()
    row_ids = dataset.row_ids()
    rng = np.random.default_rng(seed)
    assignments: dict = {}
    warnings: list = []
    sizes = [0] * K
    if stratified:
        class_groups = [
            [i for i in range(n) if y[i] == c] for c in (0, 1)
        ]
    else:
        class_groups = [list(range(n))]
    for group in class_groups:
        indices = np.array(group, dtype=np.int64)
        rng.shuffle(indices)
        base, extra = divmod(len(indices), K)
        if stratified and len(indices) < K and len(indices) > 0:
            label = int(y[indices[0]])
            warnings.append(
                f"class {label} has {len(indices)} rows for {K} folds; "
                "stratification degraded to one row per fold"
            )
        # The `extra` leftover rows go to the currently smallest folds.
        by_load = sorted(range(K), key=lambda f: (sizes[f], f))
        quotas = [base] * K
        for f in by_load[:extra]:
            quotas[f] += 1
        cursor = 0
        for f in range(K):
            for i in indices[cursor : cursor + quotas[f]]:
                assignments[row_ids[int(i)]] = f
            sizes[f] += quotas[f]
            cursor += quotas[f]
    return FoldPlan(
        K=K,
        seed=seed,
        stratified=stratified,
        assignments=assignments,
        warnings=tuple(warnings),
    )


def split_fold(dataset: Dataset, plan: FoldPlan, fold: int) -> tuple[Dataset, Dataset]:
    """(training rows, held-out rows) for one fold, in dataset order."""
    train_rows = [r for r in dataset.rows if plan.fold_of(r.row_id) != fold]
    test_rows = [r for r in dataset.rows if plan.fold_of(r.row_id) == fold]
    return (
        Dataset(subset=dataset.subset, rows=train_rows),
        Dataset(subset=dataset.subset, rows=test_rows),
    )


def _accuracy(model, split: Dataset) -> float:
    predictions = model.predict(split.matrix())
    return float(np.mean(predictions == split.labels()))


def _precision_recall(model, split: Dataset) -> tuple:
    predictions = model.predict(split.matrix())
    truth = split.labels()
    tp = int(np.sum((predictions == 1) & (truth == 1)))
    fp = int(np.sum((predictions == 1) & (truth == 0)))
    fn = int(np.sum((predictions == 0) & (truth == 1)))
    precision = tp / (tp + fp) if tp + fp else None
    recall = tp / (tp + fn) if tp + fn else None
    return precision, recall


def _mean_sd(values: list) -> tuple:
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sd


def cross_validate(
    dataset: Dataset,
    model_kinds,
    plan: FoldPlan,
    standardize=None,
    lexicon_version=None,
) -> dict:
    """Per-model fold accuracies for one feature subset.

    Returns {kind: {"train": {...}, "test": {...}, "supplementary": {...}}}
    with mean/sd/per-fold lists, all JSON-native values.
    """
    results: dict = {}
    for kind in model_kinds:
        if kind not in MODEL_KINDS:
            raise InvalidConfig(f"unknown model kind {kind!r}")
        train_acc: list = []
        test_acc: list = []
        precisions: list = []
        recalls: list = []
        for fold in range(plan.K):
            train_split, test_split = split_fold(dataset, plan, fold)
            try:
                model = fit_model(
                    kind, train_split, standardize=standardize, lexicon_version=lexicon_version
                )
            except Exception as exc:
                raise type(exc)(f"fold {fold}: {exc}") from exc
            train_acc.append(_accuracy(model, train_split))
            test_acc.append(_accuracy(model, test_split))
            precision, recall = _precision_recall(model, test_split)
            precisions.append(precision)
            recalls.append(recall)
        train_mean, train_sd = _mean_sd(train_acc)
        test_mean, test_sd = _mean_sd(test_acc)
        defined_p = [p for p in precisions if p is not None]
        defined_r = [r for r in recalls if r is not None]
        results[kind] = {
            "train": {"mean": train_mean, "sd": train_sd, "per_fold": train_acc},
            "test": {"mean": test_mean, "sd": test_sd, "per_fold": test_acc},
            "supplementary": {
                "test_precision": {
                    "mean": statistics.fmean(defined_p) if defined_p else None,
                    "per_fold": precisions,
                },
                "test_recall": {
                    "mean": statistics.fmean(defined_r) if defined_r else None,
                    "per_fold": recalls,
                },
            },
        }
    return results


@dataclass(frozen=True)
class EvalReport:
    """All results plus the configuration that produced them."""

    doc: dict

    @classmethod
    def build(cls, subset_results: dict, plan: FoldPlan, config: dict) -> "EvalReport":
        return cls(
            doc={
                "format": REPORT_FORMAT_VERSION,
                "config": dict(config),
                "fold_plan": plan.to_dict(),
                "results": subset_results,
            }
        )

    @property
    def results(self) -> dict:
        return self.doc["results"]

    @property
    def config(self) -> dict:
        return self.doc["config"]

    def to_json(self) -> str:
        return json.dumps(self.doc, sort_keys=True, indent=2) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "EvalReport":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(doc=json.load(fh))


def render_report(report: EvalReport) -> str:
    """Plain-text accuracy grid: feature sets x models, train/test rows."""
    model_kinds = [k for k in MODEL_KINDS if k in report.config.get("models", MODEL_KINDS)]
    subsets = [s for s in ("markers", "sentiment", "combined") if s in report.results]
    header = ["Feature set", "Split"] + [MODEL_DISPLAY_NAMES[k] for k in model_kinds]
    rows = [header]
    # No models selected leaves a header-only table, not empty data rows.
    for subset in subsets if model_kinds else ():
        for split, split_label in (("train", "Training"), ("test", "Testing")):
            cells = [_SUBSET_DISPLAY[subset] if split == "train" else "", split_label]
            for kind in model_kinds:
                stats = report.results[subset][kind][split]
                cells.append(f"{stats['mean']:.4f} ±{stats['sd']:.2f}")
            rows.append(cells)
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = [f"K-fold cross-validation results (K={report.config.get('K', K_DEFAULT)})", ""]
    for r, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if r == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(header))))
    meta = report.config
    lines.append("")
    lines.append(
        f"seed={meta.get('seed')}  standardize={meta.get('standardize')}  "
        f"stratified={meta.get('stratified')}  lexicon={meta.get('lexicon_version')}"
    )
    lines.append(f"fold plan digest: {report.doc['fold_plan']['digest']}")
    for warning in report.doc["fold_plan"].get("warnings", []):
        lines.append(f"warning: {warning}")
    return "\n".join(lines) + "\n"
