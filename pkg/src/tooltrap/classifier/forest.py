"""Seeded random forest over fixed-width feature vectors.

Plain CART trees with gini splits, bootstrap sampling, and per-split
feature subsampling (default sqrt of the feature count). Everything is
driven by one integer seed, so training twice on the same data yields
byte-identical models, and the serialized form is self-describing: feature
schema, every tree's nodes, and the vote threshold travel together.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from ..errors import EmptyData, SingleClassData
from .features import FEATURE_NAMES

DEFAULT_N_TREES = 100
DEFAULT_MAX_DEPTH = 12
DEFAULT_VOTE_THRESHOLD = 0.5


@dataclass
class _Tree:
    """Flat node arrays; feature == -1 marks a leaf."""

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)  # positive fraction at node

    def add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def predict_one(self, x: np.ndarray) -> int:
        node = 0
        while self.feature[node] >= 0:
            if x[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return 1 if self.value[node] >= 0.5 else 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "value": self.value,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> _Tree:
        return cls(
            feature=list(raw["feature"]),
            threshold=list(raw["threshold"]),
            left=list(raw["left"]),
            right=list(raw["right"]),
            value=list(raw["value"]),
        )


def _gini(pos: float, total: float) -> float:
    if total <= 0:
        return 0.0
    p = pos / total
    return 2.0 * p * (1.0 - p)


def _best_split(
    X: np.ndarray, y: np.ndarray, feat_ids: np.ndarray
) -> tuple[int, float] | None:
    """Best (feature, threshold) by gini gain over the candidate features."""
    n = len(y)
    total_pos = float(y.sum())
    parent = _gini(total_pos, n)
    best_gain = 1e-12
    best: tuple[int, float] | None = None

    for f in feat_ids:
        col = X[:, f]
        order = np.argsort(col, kind="stable")
        sv = col[order]
        sy = y[order]
        cum_pos = np.cumsum(sy)
        # split after position i: left = [0..i], right = (i..n)
        distinct = np.nonzero(sv[1:] > sv[:-1])[0]
        for i in distinct:
            left_n = i + 1
            right_n = n - left_n
            left_pos = float(cum_pos[i])
            right_pos = total_pos - left_pos
            weighted = (
                left_n / n * _gini(left_pos, left_n)
                + right_n / n * _gini(right_pos, right_n)
            )
            gain = parent - weighted
            if gain > best_gain:
                best_gain = gain
                best = (int(f), float((sv[i] + sv[i + 1]) / 2.0))
    return best


def _grow(
    tree: _Tree,
    X: np.ndarray,
    y: np.ndarray,
    idx: np.ndarray,
    depth: int,
    max_depth: int,
    n_sub: int,
    rng: np.random.RandomState,
) -> int:
    node = tree.add_node()
    sub_y = y[idx]
    pos_frac = float(sub_y.mean()) if len(sub_y) else 0.0
    tree.value[node] = pos_frac

    if (
        depth >= max_depth
        or len(idx) < 2
        or pos_frac == 0.0
        or pos_frac == 1.0
    ):
        return node

    feat_ids = rng.choice(X.shape[1], size=min(n_sub, X.shape[1]), replace=False)
    feat_ids.sort()
    split = _best_split(X[idx], sub_y, feat_ids)
    if split is None:
        return node

    f, t = split
    mask = X[idx, f] <= t
    left_idx = idx[mask]
    right_idx = idx[~mask]
    if len(left_idx) == 0 or len(right_idx) == 0:
        return node

    tree.feature[node] = f
    tree.threshold[node] = t
    tree.left[node] = _grow(tree, X, y, left_idx, depth + 1, max_depth, n_sub, rng)
    tree.right[node] = _grow(tree, X, y, right_idx, depth + 1, max_depth, n_sub, rng)
    return node


@dataclass
class ForestModel:
    """Trained ensemble plus everything needed to reuse it elsewhere."""

    trees: list[_Tree]
    feature_names: tuple[str, ...]
    n_trees: int
    max_depth: int
    feature_subsample: int
    vote_threshold: float
    seed: int

    def vote_fractions(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        votes = np.zeros(len(X), dtype=float)
        for tree in self.trees:
            votes += np.array([tree.predict_one(row) for row in X], dtype=float)
        return votes / max(1, len(self.trees))

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Boolean predictions: positive iff vote fraction >= threshold."""
        return self.vote_fractions(X) >= self.vote_threshold

    def with_threshold(self, threshold: float) -> ForestModel:
        return ForestModel(
            trees=self.trees,
            feature_names=self.feature_names,
            n_trees=self.n_trees,
            max_depth=self.max_depth,
            feature_subsample=self.feature_subsample,
            vote_threshold=threshold,
            seed=self.seed,
        )

    # --- serialization ------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": "tooltrap-forest-v1",
            "feature_names": list(self.feature_names),
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "feature_subsample": self.feature_subsample,
            "vote_threshold": self.vote_threshold,
            "seed": self.seed,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> ForestModel:
        return cls(
            trees=[_Tree.from_dict(t) for t in raw["trees"]],
            feature_names=tuple(raw["feature_names"]),
            n_trees=int(raw["n_trees"]),
            max_depth=int(raw["max_depth"]),
            feature_subsample=int(raw["feature_subsample"]),
            vote_threshold=float(raw["vote_threshold"]),
            seed=int(raw["seed"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), separators=(",", ":")), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> ForestModel:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def train_forest(
    X: Sequence[Sequence[float]],
    y: Sequence[int],
    feature_names: Sequence[str] = FEATURE_NAMES,
    n_trees: int = DEFAULT_N_TREES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    feature_subsample: int | None = None,
    vote_threshold: float = DEFAULT_VOTE_THRESHOLD,
    seed: int = 0,
) -> ForestModel:
    """Fit the ensemble. Deterministic for a fixed (data, params, seed)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.size == 0 or len(y) == 0:
        raise EmptyData("training set is empty")
    if len(set(y.tolist())) < 2:
        raise SingleClassData("training labels contain a single class")

    n_sub = feature_subsample or max(1, round(math.sqrt(X.shape[1])))
    master = np.random.RandomState(seed)
    tree_seeds = master.randint(0, 2**31 - 1, size=n_trees)

    trees: list[_Tree] = []
    n = len(y)
    for ts in tree_seeds:
        rng = np.random.RandomState(int(ts))
        boot = rng.randint(0, n, size=n)
        tree = _Tree()
        _grow(tree, X, y, np.arange(n)[boot], 0, max_depth, n_sub, rng)
        trees.append(tree)

    return ForestModel(
        trees=trees,
        feature_names=tuple(feature_names),
        n_trees=n_trees,
        max_depth=max_depth,
        feature_subsample=n_sub,
        vote_threshold=vote_threshold,
        seed=seed,
    )
