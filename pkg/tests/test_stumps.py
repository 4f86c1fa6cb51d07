from __future__ import annotations

import numpy as np
import pytest

from noiseboost.core import Dataset, Stump
from noiseboost.stumps import StumpTrainer, train_stump


def brute_force_best(X, y, w):
    """Reference search: every feature, every candidate threshold, both
    polarities, by direct evaluation.  Candidates mirror the trainer's set
    (below-minimum sentinel plus midpoints of consecutive distinct values)
    so the comparison covers identical stump spaces.
    """
    n, d = X.shape
    best = None
    for f in range(d):
        vals = np.unique(X[:, f])
        cands = [vals[0] - 1.0] + [0.5 * (a + b) for a, b in zip(vals[:-1], vals[1:])]
        for thr in cands:
            h = np.where(X[:, f] >= thr, 1, -1)
            corr = float(np.sum(w * y * h))
            score = abs(corr)
            if best is None or score > best[0] + 1e-12:
                pol = 1 if corr >= 0 else -1
                best = (score, f, thr, pol)
    return best


def test_matches_brute_force_on_random_instances():
    rng = np.random.default_rng(0)
    for trial in range(200):
        n = int(rng.integers(2, 26))
        d = int(rng.integers(1, 5))
        if trial % 3 == 0:
            X = rng.choice([-1.0, 1.0], size=(n, d))  # heavy ties
        else:
            X = np.round(rng.normal(size=(n, d)), 2)
        y = rng.choice([-1, 1], size=n)
        w = rng.random(n)
        w[rng.random(n) < 0.2] = 0.0  # some zero weights
        if w.sum() == 0:
            w[0] = 1.0
        ds = Dataset(features=X, labels=y)
        stump, edge = train_stump(ds, w)
        score, *_ = brute_force_best(X, y, w)
        h = stump.predict(X)
        got = abs(float(np.sum(w * y * h)))
        assert got == pytest.approx(score, abs=1e-10), f"trial {trial}"
        assert edge == pytest.approx(score / w.sum(), abs=1e-10)


def test_edge_definition():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([-1, -1, 1, 1])
    w = np.array([1.0, 1.0, 1.0, 1.0])
    stump, edge = train_stump(Dataset(features=X, labels=y), w)
    assert edge == pytest.approx(1.0)  # perfectly separable
    assert stump.feature == 0
    assert 1.0 < stump.threshold < 2.0
    assert stump.polarity == 1


def test_tie_breaks_lowest_feature_then_threshold():
    # two identical features: the tie must go to feature 0
    X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    y = np.array([-1, -1, 1, 1])
    stump, _ = train_stump(Dataset(features=X, labels=y), np.ones(4))
    assert stump.feature == 0
    # all weight on one example: every threshold below it scores the same,
    # and the sentinel (lowest candidate) must win
    X2 = np.array([[0.0], [1.0], [2.0]])
    y2 = np.array([1, 1, 1])
    w2 = np.array([0.0, 0.0, 1.0])
    stump2, edge2 = train_stump(Dataset(features=X2, labels=y2), w2)
    assert edge2 == pytest.approx(1.0)
    assert stump2.threshold == pytest.approx(-1.0)  # min value - 1
    assert stump2.polarity == 1


def test_polarity_flips_for_anticorrelated_feature():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([1, 1, -1, -1])  # high values are negative
    stump, edge = train_stump(Dataset(features=X, labels=y), np.ones(4))
    assert edge == pytest.approx(1.0)
    assert stump.polarity == -1


def test_trainer_cache_reusable_across_weights():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(50, 3))
    y = rng.choice([-1, 1], size=50)
    ds = Dataset(features=X, labels=y)
    trainer = StumpTrainer(ds)
    for _ in range(5):
        w = rng.random(50)
        cached = trainer.train(w)
        fresh = train_stump(ds, w)
        assert cached == fresh


def test_weight_validation():
    ds = Dataset(features=np.array([[0.0], [1.0]]), labels=np.array([1, -1]))
    trainer = StumpTrainer(ds)
    with pytest.raises(ValueError):
        trainer.train(np.ones(3))
    with pytest.raises(ValueError):
        trainer.train(np.array([1.0, -0.5]))
    with pytest.raises(ValueError):
        trainer.train(np.zeros(2))


def test_single_example_dataset():
    ds = Dataset(features=np.array([[2.0, 7.0]]), labels=np.array([-1]))
    stump, edge = train_stump(ds, np.array([3.0]))
    assert edge == pytest.approx(1.0)
    assert stump.predict(ds.features)[0] == -1
    assert isinstance(stump, Stump)
