from __future__ import annotations

import numpy as np
import pytest

from noiseboost.core import sign
from noiseboost.data import (
    LS_DIM,
    LSParams,
    NoiseSpec,
    generate_ls,
    inject_noise,
    load_csv,
    load_delimited,
    save_csv,
    split,
    subsample,
)


def test_ls_params_validation():
    with pytest.raises(ValueError):
        LSParams(n=0)
    with pytest.raises(ValueError):
        LSParams(n=10, delta=-1)
    with pytest.raises(ValueError):
        LSParams(n=10, delta=12)  # 10 + delta exceeds the dimension
    with pytest.raises(ValueError):
        LSParams(n=10, delta=11)  # 5 + ceil(11/2) overflows the last-10 budget
    LSParams(n=10, delta=10)  # largest legal width


def test_ls_shapes_and_values():
    ds = generate_ls(LSParams(n=500, delta=1, seed=3))
    assert ds.features.shape == (500, LS_DIM)
    assert set(np.unique(ds.features)) == {-1.0, 1.0}
    assert set(np.unique(ds.labels)) <= {-1, 1}
    assert (ds.true_labels == ds.labels).all()
    assert ds.name == "ls_d1"


def test_ls_mixture_coordinate_counts():
    # With delta=1 an example agrees with its label on 21 (large margin),
    # 11 (puller) or 11 = 5 + 6 (penalizer) coordinates; delta=3 gives
    # 21 / 13 / 12.
    for delta, allowed in ((1, {21, 11}), (3, {21, 13, 12})):
        ds = generate_ls(LSParams(n=2000, delta=delta, seed=9))
        agree = (ds.features == ds.labels[:, None]).sum(axis=1)
        assert set(np.unique(agree)) <= allowed, f"delta={delta}: {np.unique(agree)}"


def test_ls_all_ones_rule_odd_delta():
    # For odd delta the unweighted vote over all coordinates recovers the
    # label on every example.
    for delta in (1, 3, 5):
        for seed in (0, 7, 123):
            ds = generate_ls(LSParams(n=800, delta=delta, seed=seed))
            votes = sign(ds.features.sum(axis=1))
            assert (votes == ds.labels).all(), f"delta={delta} seed={seed}"


def test_ls_reproducible_from_seed():
    a = generate_ls(LSParams(n=300, delta=3, seed=42))
    b = generate_ls(LSParams(n=300, delta=3, seed=42))
    c = generate_ls(LSParams(n=300, delta=3, seed=43))
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert (a.features != c.features).any()


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(eta_pos=-0.1, eta_neg=0.0)
    with pytest.raises(ValueError):
        NoiseSpec(eta_pos=0.0, eta_neg=1.5)
    spec = NoiseSpec.symmetric(0.25, seed=4)
    assert spec.eta_pos == spec.eta_neg == 0.25


def test_inject_noise_flips_against_truth():
    ds = generate_ls(LSParams(n=4000, delta=1, seed=1))
    noisy = inject_noise(ds, NoiseSpec.symmetric(0.3, seed=2))
    assert (noisy.true_labels == ds.labels).all()
    flipped = noisy.labels != noisy.true_labels
    assert (noisy.labels[flipped] == -noisy.true_labels[flipped]).all()
    rate = flipped.mean()
    assert 0.25 < rate < 0.35  # binomial(4000, 0.3) stays well inside this
    # zero noise is the identity on labels
    clean = inject_noise(ds, NoiseSpec.symmetric(0.0, seed=2))
    assert (clean.labels == ds.labels).all()


def test_inject_noise_class_conditional():
    ds = generate_ls(LSParams(n=3000, delta=1, seed=5))
    noisy = inject_noise(ds, NoiseSpec(eta_pos=1.0, eta_neg=0.0, seed=6))
    pos = noisy.true_labels == 1
    assert (noisy.labels[pos] == -1).all()
    assert (noisy.labels[~pos] == noisy.true_labels[~pos]).all()


def test_inject_noise_reproducible():
    ds = generate_ls(LSParams(n=500, delta=1, seed=8))
    a = inject_noise(ds, NoiseSpec.symmetric(0.2, seed=9))
    b = inject_noise(ds, NoiseSpec.symmetric(0.2, seed=9))
    np.testing.assert_array_equal(a.labels, b.labels)


def test_split_fractions_and_determinism():
    ds = generate_ls(LSParams(n=200, delta=1, seed=0))
    tr, te = split(ds, train_frac=0.7, test_frac=0.2, seed=11)
    assert tr.n == 140 and te.n == 40
    tr2, _ = split(ds, train_frac=0.7, test_frac=0.2, seed=11)
    np.testing.assert_array_equal(tr.features, tr2.features)
    with pytest.raises(ValueError):
        split(ds, train_frac=0.9, test_frac=0.2)
    with pytest.raises(ValueError):
        split(generate_ls(LSParams(n=2, delta=1, seed=0)), train_frac=0.1, test_frac=0.1)


def test_subsample():
    ds = generate_ls(LSParams(n=100, delta=1, seed=0))
    sub = subsample(ds, 0.25, seed=3)
    assert sub.n == 25
    assert subsample(ds, 1.0) is ds
    with pytest.raises(ValueError):
        subsample(ds, 0.0)


def test_csv_roundtrip(tmp_path):
    ds = inject_noise(generate_ls(LSParams(n=40, delta=1, seed=2)), NoiseSpec.symmetric(0.3, seed=3))
    path = tmp_path / "ds.csv"
    save_csv(ds, path)
    back = load_csv(path)
    np.testing.assert_array_equal(back.features, ds.features)
    np.testing.assert_array_equal(back.labels, ds.labels)
    np.testing.assert_array_equal(back.true_labels, ds.true_labels)


def test_load_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        load_csv(path)
    with pytest.raises(ValueError):
        load_csv(tmp_path / "missing.csv")


def test_load_delimited_comma_and_whitespace(tmp_path):
    comma = tmp_path / "comma.txt"
    comma.write_text("0.5,1.5,1\n-0.5,2.0,7\n0.0,0.0,1\n")
    ds = load_delimited(comma, label_column=-1, positive_label_set=(1,))
    assert ds.features.shape == (3, 2)
    assert list(ds.labels) == [1, -1, 1]

    space = tmp_path / "space.txt"
    space.write_text("0.5 1.5 4\n-0.5 2.0 3\n")
    ds2 = load_delimited(space, label_column=-1, positive_label_set=(3, 4))
    assert list(ds2.labels) == [1, 1]


def test_load_delimited_errors(tmp_path):
    with pytest.raises(ValueError):
        load_delimited(tmp_path / "nope.txt")
    ragged = tmp_path / "ragged.txt"
    ragged.write_text("1,2,1\n1,2\n")
    with pytest.raises(ValueError):
        load_delimited(ragged)
    frac = tmp_path / "frac.txt"
    frac.write_text("1,2,0.5\n")
    with pytest.raises(ValueError):
        load_delimited(frac)
    alpha = tmp_path / "alpha.txt"
    alpha.write_text("1,x,1\n")
    with pytest.raises(ValueError):
        load_delimited(alpha)
