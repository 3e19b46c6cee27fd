"""Behavioral trace classifier trained on trap-derived labels."""

from .features import (
    FEATURE_NAMES,
    FeatureExtractor,
    FeatureVector,
    extract_features,
    strip_trap_events,
)
from .forest import ForestModel, train_forest
from .labels import (
    LabeledTrace,
    LabelSource,
    TraceLabel,
    build_dataset,
    label_traces,
)
from .evaluate import evaluate_predictions, evaluate_model, split_rows, transfer_eval

__all__ = [
    "FEATURE_NAMES",
    "FeatureExtractor",
    "FeatureVector",
    "extract_features",
    "strip_trap_events",
    "ForestModel",
    "train_forest",
    "LabeledTrace",
    "LabelSource",
    "TraceLabel",
    "build_dataset",
    "label_traces",
    "evaluate_predictions",
    "evaluate_model",
    "split_rows",
    "transfer_eval",
]
