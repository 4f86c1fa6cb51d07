"""Dataset generation, label noise, splits, subsampling and file ingestion.

All randomized operations take explicit integer seeds and use
numpy.random.default_rng (PCG64), so every dataset is reproducible from
(seed, params) alone.  Sweep drivers derive per-run streams by seeding
with a sequence (master_seed, cell_id, repeat_id).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Dataset

LS_DIM = 21  # fixed feature dimension of the synthetic family


@dataclass(frozen=True)
class LSParams:
    """Synthetic mixture over {-1,+1}^21 with margin-width parameter delta."""

    n: int
    delta: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.delta < 0 or 10 + self.delta > LS_DIM:
            raise ValueError(f"delta must satisfy 0 <= delta <= {LS_DIM - 10}, got {self.delta}")
        # penalizers must fit their halves: 5+ceil(delta/2) of the last 10 equal y
        if 5 + math.ceil(self.delta / 2) > 10:
            raise ValueError(f"delta={self.delta} overflows the penalizer coordinate budget")


@dataclass(frozen=True)
class NoiseSpec:
    """Independent label flips, class-conditional on the true label."""

    eta_pos: float
    eta_neg: float
    seed: int = 0

    def __post_init__(self):
        for name, p in (("eta_pos", self.eta_pos), ("eta_neg", self.eta_neg)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")

    @classmethod
    def symmetric(cls, eta: float, seed: int = 0) -> "NoiseSpec":
        return cls(eta_pos=eta, eta_neg=eta, seed=seed)


def generate_ls(params: LSParams) -> Dataset:
    """Draw the Large-margin / Puller / Penalizer mixture.

    Per example with label y uniform on {-1,+1}:
      - prob 1/4: all 21 coordinates equal y (Large margin);
      - prob 1/4: coordinates 0..9+delta equal y, the rest -y (Pullers);
      - prob 1/2: 5+floor(delta/2) random coordinates of the first 11 and
        5+ceil(delta/2) of the last 10 equal y, all others -y (Penalizers).
    For odd delta every example satisfies sgn(sum_j x_j) = y.
    """
    n, delta = params.n, params.delta
    rng = np.random.default_rng(params.seed)
    y = rng.choice(np.array([-1, 1]), size=n)
    kind = rng.choice(3, size=n, p=[0.25, 0.25, 0.5])  # 0 large, 1 puller, 2 penalizer

    agree = np.zeros((n, LS_DIM), dtype=bool)  # where x_j == y
    agree[kind == 0, :] = True
    agree[kind == 1, : 10 + delta] = True

    pen = np.flatnonzero(kind == 2)
    if pen.size:
        k_front = 5 + delta // 2  # of the first 11 coordinates
        k_back = 5 + (delta + 1) // 2  # of the last 10
        front = np.argsort(rng.random((pen.size, 11)), axis=1)[:, :k_front]
        back = 11 + np.argsort(rng.random((pen.size, 10)), axis=1)[:, :k_back]
        rows = pen[:, None]
        agree[rows, front] = True
        agree[rows, back] = True

    X = np.where(agree, y[:, None], -y[:, None]).astype(float)
    return Dataset(features=X, labels=y, true_labels=y.copy(), name=f"ls_d{delta}")


def inject_noise(dataset: Dataset, spec: NoiseSpec) -> Dataset:
    """Flip labels class-conditionally; the clean channel is preserved."""
    rng = np.random.default_rng(spec.seed)
    base = dataset.true_labels if dataset.true_labels is not None else dataset.labels
    p_flip = np.where(base > 0, spec.eta_pos, spec.eta_neg)
    flips = rng.random(dataset.n) < p_flip
    labels = np.where(flips, -base, base)
    return Dataset(
        features=dataset.features,
        labels=labels,
        true_labels=base.copy(),
        name=dataset.name,
    )


def split(dataset: Dataset, train_frac: float = 0.70, test_frac: float = 0.20, seed: int = 0):
    """Seeded shuffle; first train_frac train, next test_frac test, rest discarded."""
    if not (0.0 < train_frac and 0.0 < test_frac and train_frac + test_frac <= 1.0):
        raise ValueError(f"bad fractions train={train_frac}, test={test_frac}")
    n_train = int(dataset.n * train_frac)
    n_test = int(dataset.n * test_frac)
    if n_train < 1 or n_test < 1:
        raise ValueError(f"split of {dataset.n} examples leaves an empty partition")
    perm = np.random.default_rng(seed).permutation(dataset.n)
    return _take(dataset, perm[:n_train]), _take(dataset, perm[n_train : n_train + n_test])


def subsample(dataset: Dataset, keep_frac: float, seed: int = 0) -> Dataset:
    """Uniform subsample without replacement of ceil(keep_frac * N) examples."""
    if not 0.0 < keep_frac <= 1.0:
        raise ValueError(f"keep_frac must be in (0, 1], got {keep_frac}")
    if keep_frac == 1.0:
        return dataset
    k = math.ceil(keep_frac * dataset.n)
    perm = np.random.default_rng(seed).permutation(dataset.n)
    return _take(dataset, np.sort(perm[:k]))


def _take(dataset: Dataset, idx: np.ndarray) -> Dataset:
    return Dataset(
        features=dataset.features[idx],
        labels=dataset.labels[idx],
        true_labels=None if dataset.true_labels is None else dataset.true_labels[idx],
        name=dataset.name,
    )


def load_delimited(path, label_column: int = -1, positive_label_set=(1,)) -> Dataset:
    """Read a delimited text file of numeric columns into a Dataset.

    Separator auto-detected (comma if the first data line contains one,
    else whitespace).  The label column must hold integers; values in
    positive_label_set map to +1, everything else to -1.
    """
    path = Path(path)
    if not path.exists():
        raise ValueError(f"no such file: {path}")
    positive = {int(v) for v in positive_label_set}
    rows: list[list[float]] = []
    labels: list[int] = []
    arity = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",") if "," in line else line.split()
            if arity is None:
                arity = len(parts)
                if arity < 2:
                    raise ValueError(f"{path}: row {lineno}: need at least 2 columns")
                col = label_column if label_column >= 0 else arity + label_column
                if not 0 <= col < arity:
                    raise ValueError(f"{path}: label column {label_column} out of range")
            if len(parts) != arity:
                raise ValueError(
                    f"{path}: row {lineno}: expected {arity} columns, got {len(parts)}"
                )
            try:
                vals = [float(p) for p in parts]
            except ValueError as exc:
                raise ValueError(f"{path}: row {lineno}: unparseable field ({exc})") from None
            raw = vals[col]
            if raw != int(raw):
                raise ValueError(f"{path}: row {lineno}: label {raw} is not an integer")
            labels.append(1 if int(raw) in positive else -1)
            del vals[col]
            rows.append(vals)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return Dataset(features=np.array(rows), labels=np.array(labels), name=path.stem)


def save_csv(dataset: Dataset, path) -> None:
    """Canonical dump: header f0..f{d-1},label,true_label."""
    path = Path(path)
    truth = dataset.true_labels if dataset.true_labels is not None else dataset.labels
    with open(path, "w") as fh:
        fh.write(",".join([f"f{j}" for j in range(dataset.d)] + ["label", "true_label"]) + "\n")
        for i in range(dataset.n):
            feats = ",".join(f"{v:.17g}" for v in dataset.features[i])
            fh.write(f"{feats},{dataset.labels[i]},{truth[i]}\n")


def load_csv(path) -> Dataset:
    """Read back the canonical format written by save_csv."""
    path = Path(path)
    if not path.exists():
        raise ValueError(f"no such file: {path}")
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if len(header) < 3 or header[-2:] != ["label", "true_label"]:
            raise ValueError(f"{path}: not a canonical dataset CSV (header {header[:3]}...)")
        d = len(header) - 2
        feats, labels, truth = [], [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != d + 2:
                raise ValueError(f"{path}: row {lineno}: expected {d + 2} fields")
            feats.append([float(v) for v in parts[:d]])
            labels.append(int(parts[d]))
            truth.append(int(parts[d + 1]))
    return Dataset(
        features=np.array(feats),
        labels=np.array(labels),
        true_labels=np.array(truth),
        name=path.stem,
    )
