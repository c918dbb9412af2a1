"""CART decision tree, depth capped at 3, exhaustive exact split search.

Split quality is compared in exact integer arithmetic. For a candidate
putting (l0, l1) left and (r0, r1) right of n = n_l + n_r rows, the
weighted Gini after the split is minimised exactly when

    S = (l0^2 + l1^2)/n_l + (r0^2 + r1^2)/n_r

is maximised, so candidates are ranked by the integer pair
g = (l0^2 + l1^2) n_r + (r0^2 + r1^2) n_l and m = n_l n_r via
cross-multiplication (S = g / (m n), n fixed per node). This keeps the
(feature index, threshold) tie-break immune to float rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fraudlex.models.common import (
    Explanation,
    check_predict_input,
    check_training_data,
    maybe_standardize,
    standardizer_details,
)
from fraudlex.models.standardize import Standardizer

MAX_DEPTH = 3


@dataclass(frozen=True)
class TreeNode:
    """One node in preorder; feature is None exactly at leaves."""

    index: int
    depth: int
    counts: tuple
    prediction: int
    feature: int | None = None
    threshold: float | None = None
    left: int | None = None
    right: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _best_split(X: np.ndarray, y: np.ndarray, rows: np.ndarray):
    """Return (g, m, feature, threshold, left_rows, right_rows) or None."""
    n = len(rows)
    c0 = int(np.sum(y[rows] == 0))
    c1 = n - c0
    parent_g = c0 * c0 + c1 * c1
    best = None
    for j in range(X.shape[1]):
        vals = X[rows, j]
        order = np.argsort(vals, kind="stable")
        sorted_vals = vals[order]
        sorted_rows = rows[order]
        # prefix0[i] = class-0 rows among the first i in sorted order
        prefix0 = np.concatenate(([0], np.cumsum(y[sorted_rows] == 0)))
        for i in range(1, n):
            lo, hi = sorted_vals[i - 1], sorted_vals[i]
            if lo == hi:
                continue
            threshold = (lo + hi) / 2.0
            # Partition by the threshold itself so fit and predict agree
            # even if the midpoint rounds onto a data value.
            n_l = int(np.searchsorted(sorted_vals, threshold, side="right"))
            if n_l == 0 or n_l == n:
                continue
            n_r = n - n_l
            l0 = int(prefix0[n_l])
            l1 = n_l - l0
            r0 = c0 - l0
            r1 = c1 - l1
            g = (l0 * l0 + l1 * l1) * n_r + (r0 * r0 + r1 * r1) * n_l
            m = n_l * n_r
            if g * n <= parent_g * m:
                continue  # no strict impurity decrease
            if best is None or g * best[1] > best[0] * m:
                best = (g, m, j, float(threshold), sorted_rows[:n_l], sorted_rows[n_l:])
    return best


class DecisionTree:
    kind = "tree"
    default_standardize = False

    def __init__(self, nodes, feature_names, standardizer, lexicon_version, metadata):
        self.nodes = tuple(nodes)
        self.feature_names = tuple(feature_names)
        self.standardizer = standardizer
        self.lexicon_version = lexicon_version
        self.metadata = dict(metadata)

    @classmethod
    def fit(cls, dataset, standardize=None, lexicon_version=None) -> "DecisionTree":
        X, y = check_training_data(dataset)
        X, standardizer = maybe_standardize(X, standardize, cls.default_standardize)
        nodes: list = []

        def build(rows: np.ndarray, depth: int) -> int:
            index = len(nodes)
            nodes.append(None)  # reserve preorder slot
            c0 = int(np.sum(y[rows] == 0))
            c1 = len(rows) - c0
            prediction = 1 if c1 > c0 else 0
            split = None
            if depth < MAX_DEPTH and len(rows) >= 2 and c0 > 0 and c1 > 0:
                split = _best_split(X, y, rows)
            if split is None:
                nodes[index] = TreeNode(
                    index=index, depth=depth, counts=(c0, c1), prediction=prediction
                )
                return index
            _, _, feature, threshold, left_rows, right_rows = split
            left = build(left_rows, depth + 1)
            right = build(right_rows, depth + 1)
            nodes[index] = TreeNode(
                index=index,
                depth=depth,
                counts=(c0, c1),
                prediction=prediction,
                feature=feature,
                threshold=threshold,
                left=left,
                right=right,
            )
            return index

        build(np.arange(X.shape[0]), 0)
        return cls(
            nodes=nodes,
            feature_names=dataset.feature_names,
            standardizer=standardizer,
            lexicon_version=lexicon_version,
            metadata={"max_depth": MAX_DEPTH, "n_training_rows": int(X.shape[0])},
        )

    def _prep(self, X) -> np.ndarray:
        X = check_predict_input(X, len(self.feature_names))
        if self.standardizer is not None:
            X = self.standardizer.transform(X)
        return X

    def predict(self, X) -> np.ndarray:
        X = self._prep(X)
        out = np.empty(X.shape[0], dtype=np.int64)
        for i, row in enumerate(X):
            node = self.nodes[0]
            while not node.is_leaf:
                node = self.nodes[node.left if row[node.feature] <= node.threshold else node.right]
            out[i] = node.prediction
        return out

    def depth(self) -> int:
        return max(node.depth for node in self.nodes)

    def leaves(self) -> tuple:
        return tuple(node for node in self.nodes if node.is_leaf)

    def explain(self) -> Explanation:
        node_list = []
        for node in self.nodes:
            entry = {
                "index": node.index,
                "depth": node.depth,
                "class_counts": list(node.counts),
                "prediction": node.prediction,
            }
            if not node.is_leaf:
                entry.update(
                    feature=self.feature_names[node.feature],
                    threshold=node.threshold,
                    left=node.left,
                    right=node.right,
                )
            node_list.append(entry)
        return Explanation(
            kind=self.kind,
            details={
                "nodes": node_list,
                "standardizer": standardizer_details(self.standardizer, self.feature_names),
            },
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hyperparameters": {"max_depth": MAX_DEPTH},
            "parameters": {
                "nodes": [
                    {
                        "index": n.index,
                        "depth": n.depth,
                        "counts": list(n.counts),
                        "prediction": n.prediction,
                        "feature": n.feature,
                        "threshold": n.threshold,
                        "left": n.left,
                        "right": n.right,
                    }
                    for n in self.nodes
                ]
            },
            "feature_names": list(self.feature_names),
            "standardizer": None if self.standardizer is None else self.standardizer.to_dict(),
            "lexicon_version": self.lexicon_version,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DecisionTree":
        nodes = [
            TreeNode(
                index=n["index"],
                depth=n["depth"],
                counts=tuple(n["counts"]),
                prediction=n["prediction"],
                feature=n["feature"],
                threshold=n["threshold"],
                left=n["left"],
                right=n["right"],
            )
            for n in doc["parameters"]["nodes"]
        ]
        standardizer = doc.get("standardizer")
        return cls(
            nodes=nodes,
            feature_names=doc["feature_names"],
            standardizer=None if standardizer is None else Standardizer.from_dict(standardizer),
            lexicon_version=doc.get("lexicon_version"),
            metadata=doc.get("metadata", {}),
        )


def render_tree(explanation: Explanation) -> str:
    """Graph-description (DOT) text for a tree explanation.

    Internal nodes read `feature <= threshold`; leaves read v:0 or v:1
    with their class counts, matching the usual rendering of such trees.
    """
    if explanation.kind != "tree":
        raise ValueError(f"render_tree needs a tree explanation, got {explanation.kind!r}")
    lines = ["digraph decision_tree {", "  node [shape=box, fontname=\"Helvetica\"];"]
    for node in explanation.details["nodes"]:
        idx = node["index"]
        if "feature" in node:
            label = f"{node['feature']} <= {node['threshold']:g}"
            lines.append(f'  n{idx} [label="{label}"];')
        else:
            c0, c1 = node["class_counts"]
            lines.append(f'  n{idx} [label="v:{node["prediction"]}\\n[{c0}, {c1}]"];')
    for node in explanation.details["nodes"]:
        if "feature" in node:
            lines.append(f'  n{node["index"]} -> n{node["left"]} [label="yes"];')
            lines.append(f'  n{node["index"]} -> n{node["right"]} [label="no"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
