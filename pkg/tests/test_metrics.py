from __future__ import annotations

import numpy as np
import pytest

from noiseboost.boosters import BoosterConfig, train
from noiseboost.core import Dataset, Ensemble, Stump
from noiseboost.data import LSParams, generate_ls
from noiseboost.metrics import (
    auc,
    collapse_coefficients,
    cosine_to_true,
    error_rate,
    paired_ttest,
    run_summary,
)

# Paired t reference values from scipy.stats.ttest_rel.
TTEST_CASES = (
    ([1.0, 2.0, 3.0], [0.0, 0.0, 0.0], 3.464101615137755, 0.07417990022744853),
    ([0.1, 0.3, 0.2, 0.5], [0.2, 0.1, 0.15, 0.3], 1.2185435916898848, 0.3101009010817722),
)


def scored_dataset(scores, labels):
    """Single-feature dataset plus an ensemble whose raw score on example
    i is exactly scores[i].

    Stumps threshold the identity feature: a mid stump between adjacent
    distinct values v_{j-1} < v_j with alpha = (v_j - v_{j-1})/2 raises the
    score by the gap when crossing it, and a base stump below the minimum
    sets the overall level (which requires min + span/2 >= 0 so its alpha
    stays nonnegative).
    """
    scores = np.asarray(scores, dtype=float)
    ds = Dataset(features=scores[:, None], labels=np.asarray(labels))
    ens = Ensemble()
    vals = np.unique(scores)
    base_alpha = vals[0] + (vals[-1] - vals[0]) / 2.0
    assert base_alpha >= 0, "helper cannot realize this score vector"
    ens.append(base_alpha, Stump(feature=0, threshold=vals[0] - 1.0, polarity=1))
    for a, b in zip(vals[:-1], vals[1:]):
        ens.append((b - a) / 2.0, Stump(feature=0, threshold=0.5 * (a + b), polarity=1))
    return ds, ens


def test_scored_dataset_helper():
    scores = [3.0, 2.0, 1.0, 0.0, 2.0]
    ds, ens = scored_dataset(scores, [1, -1, 1, -1, 1])
    np.testing.assert_allclose(ens.raw_scores(ds.features), scores, atol=1e-12)


def test_auc_hand_cases():
    # 2 positives at ranks (4, 2) of 4: pairs won = 3 of 4
    ds, ens = scored_dataset([3.0, 2.0, 1.0, 0.0], [1, -1, 1, -1])
    assert auc(ens, ds) == pytest.approx(0.75)
    # all ties inside each class block, cross ties resolved by midranks
    ds2, ens2 = scored_dataset([1.0, 1.0, 0.0, 0.0], [1, -1, 1, -1])
    assert auc(ens2, ds2) == pytest.approx(0.5)
    # perfect separation
    ds3, ens3 = scored_dataset([0.2, 0.8, 0.4, 0.1, 0.9], [-1, 1, 1, -1, 1])
    assert auc(ens3, ds3) == pytest.approx(1.0)


def test_auc_single_class_undefined():
    ds, ens = scored_dataset([1.0, 2.0], [1, 1])
    with pytest.raises(ValueError):
        auc(ens, ds)


def test_auc_against_true_labels():
    ds, ens = scored_dataset([3.0, 2.0, 1.0, 0.0], [1, -1, 1, -1])
    flipped = Dataset(
        features=ds.features, labels=np.array([-1, 1, -1, 1]), true_labels=ds.labels
    )
    assert auc(ens, flipped, against="true_labels") == pytest.approx(0.75)
    assert auc(ens, flipped, against="labels") == pytest.approx(0.25)


def test_error_rate_channels():
    # scores [3, 1, -1, -1] predict [+, +, -, -]
    ds, ens = scored_dataset([3.0, 1.0, -1.0, -1.0], [1, -1, 1, -1])
    assert error_rate(ens, ds) == pytest.approx(0.5)
    truth = Dataset(
        features=ds.features, labels=ds.labels, true_labels=np.array([1, 1, -1, -1])
    )
    assert error_rate(ens, truth, against="true_labels") == pytest.approx(0.0)
    assert error_rate(ens, truth, against="labels") == pytest.approx(0.5)


def test_collapse_coefficients():
    ens = Ensemble()
    ens.append(1.0, Stump(feature=0, threshold=0.0, polarity=1))
    ens.append(0.5, Stump(feature=0, threshold=0.0, polarity=-1))
    ens.append(2.0, Stump(feature=2, threshold=0.0, polarity=1))
    np.testing.assert_allclose(collapse_coefficients(ens, 3), [0.5, 0.0, 2.0])
    with pytest.raises(ValueError):
        collapse_coefficients(ens, 2)


def test_cosine_to_true():
    ens = Ensemble()
    ens.append(1.0, Stump(feature=0, threshold=0.0, polarity=1))
    assert cosine_to_true(ens, [1.0, 0.0]) == pytest.approx(1.0)
    assert cosine_to_true(ens, [0.0, 1.0]) == pytest.approx(0.0)
    assert cosine_to_true(ens, [-1.0, 0.0]) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        cosine_to_true(ens, [0.0, 0.0])
    with pytest.raises(ValueError):
        cosine_to_true(Ensemble(), [1.0, 0.0])


def test_paired_ttest_reference_values():
    for a, b, t_ref, p_ref in TTEST_CASES:
        t, p = paired_ttest(a, b)
        assert t == pytest.approx(t_ref, rel=1e-12)
        assert p == pytest.approx(p_ref, rel=1e-10)


def test_paired_ttest_validation():
    with pytest.raises(ValueError):
        paired_ttest([1.0], [2.0])
    with pytest.raises(ValueError):
        paired_ttest([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        paired_ttest([1.0, 2.0], [0.0, 1.0])  # constant difference


def test_run_summary_uses_true_labels_when_present():
    ds = generate_ls(LSParams(n=300, delta=1, seed=1))
    run = train(ds, BoosterConfig(algorithm="adb", max_iters=20))
    summary = run_summary(run)
    assert summary.iterations == len(run.trace)
    assert summary.status == run.status
    assert summary.e_f == pytest.approx(error_rate(run.ensemble, ds, against="true_labels"))
