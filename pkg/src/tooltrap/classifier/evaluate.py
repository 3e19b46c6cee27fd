"""Model evaluation and transfer protocols.

Training labels are always trap-derived. For transfer partitions whose
policy family never touches a decoy (so trap labels are structurally
absent), the held-out side is scored against the harness's ground-truth
compromise flag instead; this is the simulated analogue of testing a model
on runs that carry their own trap labels.
"""

from __future__ import annotations

import hashlib
from typing import Any, Sequence

import numpy as np

from ..errors import EmptyData, LeakyPartition
from .features import FeatureExtractor
from .forest import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_N_TREES,
    DEFAULT_VOTE_THRESHOLD,
    ForestModel,
    train_forest,
)
from .labels import LabeledTrace, TraceLabel


def evaluate_predictions(
    y_true: Sequence[bool], y_pred: Sequence[bool]
) -> dict[str, Any]:
    """Confusion counts and derived rates.

    A positive-free evaluation set cannot have a meaningful recall; rather
    than emit NaN, the metrics are reported as 1.0 (0.0 if false positives
    exist) with ``degenerate`` set so callers can tell the cases apart.
    """
    if len(y_true) != len(y_pred):
        raise ValueError("prediction/label length mismatch")
    if not y_true:
        raise EmptyData("evaluation set is empty")

    tp = sum(1 for t, p in zip(y_true, y_pred) if t and p)
    fp = sum(1 for t, p in zip(y_true, y_pred) if not t and p)
    fn = sum(1 for t, p in zip(y_true, y_pred) if t and not p)
    tn = sum(1 for t, p in zip(y_true, y_pred) if not t and not p)

    degenerate = (tp + fn) == 0
    if degenerate:
        precision = recall = f1 = 1.0 if fp == 0 else 0.0
    else:
        precision = tp / (tp + fp) if (tp + fp) else 0.0
        recall = tp / (tp + fn)
        f1 = (
            2 * precision * recall / (precision + recall)
            if (precision + recall)
            else 0.0
        )
    fpr = fp / (fp + tn) if (fp + tn) else 0.0

    return {
        "tp": tp,
        "fp": fp,
        "fn": fn,
        "tn": tn,
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "fpr": fpr,
        "degenerate": degenerate,
        "n": len(y_true),
    }


def features_matrix(
    rows: Sequence[LabeledTrace], extractors: dict[str, FeatureExtractor]
) -> np.ndarray:
    """Stack feature vectors; each trace uses its own suite's extractor."""
    feats = []
    for row in rows:
        suite = row.trace.suite
        if suite not in extractors:
            raise KeyError(f"no extractor for suite {suite!r}")
        feats.append(extractors[suite].extract(row.trace).values)
    return np.asarray(feats, dtype=float)


def trap_labels(rows: Sequence[LabeledTrace]) -> np.ndarray:
    return np.asarray(
        [row.label is TraceLabel.COMPROMISED for row in rows], dtype=int
    )


def ground_truth_labels(rows: Sequence[LabeledTrace]) -> np.ndarray:
    return np.asarray([row.ground_truth_compromised for row in rows], dtype=int)


def _stable_fraction(session_id: str, seed: int) -> float:
    digest = hashlib.sha256(f"{seed}:{session_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def split_rows(
    rows: Sequence[LabeledTrace], test_fraction: float = 0.3, seed: int = 0
) -> tuple[list[LabeledTrace], list[LabeledTrace]]:
    """Deterministic session-level split; no session straddles the line."""
    train, test = [], []
    for row in rows:
        if _stable_fraction(row.trace.session_id, seed) < test_fraction:
            test.append(row)
        else:
            train.append(row)
    return train, test


def train_on_rows(
    rows: Sequence[LabeledTrace],
    extractors: dict[str, FeatureExtractor],
    n_trees: int = DEFAULT_N_TREES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    vote_threshold: float = DEFAULT_VOTE_THRESHOLD,
    seed: int = 0,
) -> ForestModel:
    if not rows:
        raise EmptyData("no training rows")
    X = features_matrix(rows, extractors)
    y = trap_labels(rows)
    return train_forest(
        X,
        y,
        n_trees=n_trees,
        max_depth=max_depth,
        vote_threshold=vote_threshold,
        seed=seed,
    )


def evaluate_model(
    model: ForestModel,
    rows: Sequence[LabeledTrace],
    extractors: dict[str, FeatureExtractor],
    use_ground_truth: bool = False,
) -> dict[str, Any]:
    if not rows:
        raise EmptyData("no evaluation rows")
    X = features_matrix(rows, extractors)
    y = ground_truth_labels(rows) if use_ground_truth else trap_labels(rows)
    pred = model.predict(X)
    return evaluate_predictions([bool(v) for v in y], [bool(v) for v in pred])


def transfer_eval(
    rows: Sequence[LabeledTrace],
    extractors: dict[str, FeatureExtractor],
    scheme: str,
    train_values: Sequence[str],
    test_values: Sequence[str],
    n_trees: int = DEFAULT_N_TREES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    seed: int = 0,
    test_on_ground_truth: bool = True,
) -> dict[str, Any]:
    """Train on one partition of the campaign, evaluate on another.

    ``scheme`` is "policy" or "language". Raises LeakyPartition when any
    session appears on both sides.
    """
    if scheme not in ("policy", "language"):
        raise ValueError(f"unknown transfer scheme {scheme!r}")

    def side(values: Sequence[str]) -> list[LabeledTrace]:
        wanted = set(values)
        return [r for r in rows if getattr(r, scheme) in wanted]

    train_rows = side(train_values)
    test_rows = side(test_values)
    if not train_rows or not test_rows:
        raise EmptyData(f"empty {scheme} partition")

    train_sessions = {r.trace.session_id for r in train_rows}
    test_sessions = {r.trace.session_id for r in test_rows}
    shared = train_sessions & test_sessions
    if shared:
        raise LeakyPartition(
            f"{len(shared)} session(s) present in both partitions"
        )

    model = train_on_rows(
        train_rows, extractors, n_trees=n_trees, max_depth=max_depth, seed=seed
    )
    metrics = evaluate_model(
        model, test_rows, extractors, use_ground_truth=test_on_ground_truth
    )
    return {
        "scheme": scheme,
        "train_values": list(train_values),
        "test_values": list(test_values),
        "n_train": len(train_rows),
        "n_test": len(test_rows),
        **metrics,
    }
