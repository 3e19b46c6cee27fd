"""Seeded forest: accuracy on separable data, determinism, serialization."""

import numpy as np
import pytest

from tooltrap.classifier.features import FEATURE_NAMES
from tooltrap.classifier.forest import ForestModel, train_forest
from tooltrap.errors import EmptyData, SingleClassData


def _separable(n=120, seed=0):
    """Two clusters split cleanly on the first two coordinates."""
    rng = np.random.RandomState(seed)
    X = rng.rand(n, len(FEATURE_NAMES))
    y = np.zeros(n, dtype=int)
    y[: n // 2] = 1
    X[: n // 2, 0] += 3.0
    X[: n // 2, 1] += 2.0
    return X, y


def test_learns_separable_data():
    X, y = _separable()
    model = train_forest(X, y, n_trees=25, seed=7)
    pred = model.predict(X)
    assert (pred == y.astype(bool)).all()


def test_generalizes_to_fresh_draws():
    X, y = _separable(seed=0)
    model = train_forest(X, y, n_trees=50, seed=7)
    X2, y2 = _separable(seed=1)
    assert (model.predict(X2) == y2.astype(bool)).all()


def test_training_is_seed_deterministic():
    X, y = _separable()
    a = train_forest(X, y, n_trees=10, seed=42)
    b = train_forest(X, y, n_trees=10, seed=42)
    assert a.to_dict() == b.to_dict()
    c = train_forest(X, y, n_trees=10, seed=43)
    assert c.to_dict() != a.to_dict()


def test_vote_fractions_bounded():
    X, y = _separable()
    model = train_forest(X, y, n_trees=15, seed=3)
    fr = model.vote_fractions(X)
    assert float(fr.min()) >= 0.0
    assert float(fr.max()) <= 1.0


def test_threshold_swings_predictions():
    X, y = _separable()
    model = train_forest(X, y, n_trees=15, seed=3)
    assert model.with_threshold(0.0).predict(X).all()
    assert not model.with_threshold(1.01).predict(X).any()
    # with_threshold leaves the original untouched.
    assert model.vote_threshold == 0.5


def test_degenerate_inputs_rejected():
    X, y = _separable()
    with pytest.raises(SingleClassData):
        train_forest(X, np.zeros(len(y), dtype=int))
    with pytest.raises(EmptyData):
        train_forest(np.empty((0, 30)), np.empty((0,), dtype=int))


def test_save_load_round_trip(tmp_path):
    X, y = _separable()
    model = train_forest(X, y, n_trees=12, seed=5)
    path = tmp_path / "model.json"
    model.save(path)
    again = ForestModel.load(path)
    assert again.to_dict() == model.to_dict()
    assert (again.predict(X) == model.predict(X)).all()
    assert again.feature_names == tuple(FEATURE_NAMES)
