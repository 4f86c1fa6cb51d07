"""Shared data model: datasets, decision stumps, ensembles, margins."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# sign convention used everywhere: sign(0) = +1
RESYNC_EVERY = 50  # full margin recompute cadence, bounds drift from incremental updates


def sign(values) -> np.ndarray:
    """Sign in {-1, +1} with sign(0) = +1."""
    return np.where(np.asarray(values) >= 0.0, 1, -1).astype(int)


def _validate_labels(labels: np.ndarray, what: str) -> None:
    if labels.ndim != 1:
        raise ValueError(f"{what} must be a 1-D array, got shape {labels.shape}")
    bad = ~np.isin(labels, (-1, 1))
    if bad.any():
        where = int(np.flatnonzero(bad)[0])
        raise ValueError(f"{what} must be -1 or +1; index {where} is {labels[where]}")


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus labels, with an optional clean-label channel.

    ``labels`` is what a learner trains on (possibly noise-corrupted);
    ``true_labels``, when present, preserves the uncorrupted labels so
    metrics can score against either channel.
    """

    features: np.ndarray
    labels: np.ndarray
    true_labels: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=int)
        if X.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {X.shape}")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"need at least one example and one feature, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise ValueError(f"labels length {y.shape[0]} != number of examples {X.shape[0]}")
        _validate_labels(y, "labels")
        t = self.true_labels
        if t is not None:
            t = np.asarray(t, dtype=int)
            if t.shape != y.shape:
                raise ValueError(f"true_labels shape {t.shape} != labels shape {y.shape}")
            _validate_labels(t, "true_labels")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "true_labels", t)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def scoring_labels(self, against: str = "labels") -> np.ndarray:
        """Label channel for scoring: 'labels' or 'true_labels'."""
        if against == "labels":
            return self.labels
        if against == "true_labels":
            if self.true_labels is None:
                raise ValueError("dataset has no true_labels channel")
            return self.true_labels
        raise ValueError(f"unknown label channel {against!r}")


@dataclass(frozen=True)
class Stump:
    """Threshold classifier on one feature.

    predict(x) = polarity if x[feature] >= threshold else -polarity.
    """

    feature: int
    threshold: float
    polarity: int

    def __post_init__(self):
        if self.feature < 0:
            raise ValueError(f"feature index must be >= 0, got {self.feature}")
        if self.polarity not in (-1, 1):
            raise ValueError(f"polarity must be -1 or +1, got {self.polarity}")

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if self.feature >= X.shape[1]:
            raise ValueError(
                f"stump feature {self.feature} out of range for {X.shape[1]} features"
            )
        return np.where(X[:, self.feature] >= self.threshold, self.polarity, -self.polarity)


@dataclass
class Ensemble:
    """Weighted vote over stumps: score(x) = sum_k alpha_k * h_k(x)."""

    members: list[tuple[float, Stump]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)

    def append(self, alpha: float, stump: Stump) -> None:
        if not np.isfinite(alpha) or alpha < 0:
            raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
        self.members.append((float(alpha), stump))

    def alpha_norm(self) -> float:
        """L1 norm of the coefficient vector."""
        return float(sum(abs(a) for a, _ in self.members))

    def raw_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        scores = np.zeros(X.shape[0])
        for alpha, stump in self.members:
            scores += alpha * stump.predict(X)
        return scores

    def predict(self, X) -> np.ndarray:
        return sign(self.raw_scores(X))

    def margins(self, X, y) -> np.ndarray:
        """Unnormalized margins y * score(x)."""
        y = np.asarray(y)
        return y * self.raw_scores(X)

    def normalized_margins(self, X, y) -> np.ndarray:
        """Margins divided by the L1 norm of coefficients; in [-1, +1]."""
        norm = self.alpha_norm()
        if norm <= 0.0:
            raise ValueError("normalized margins undefined for an empty/zero ensemble")
        return self.margins(X, y) / norm


@dataclass
class MarginState:
    """Incrementally maintained margins for one training set.

    Margins are updated in O(N) per round via add(); every RESYNC_EVERY
    updates the caller should resync() from the ensemble to stop
    floating-point drift from accumulating.
    """

    margins: np.ndarray
    updates_since_sync: int = 0

    @classmethod
    def zeros(cls, n: int) -> "MarginState":
        return cls(margins=np.zeros(n))

    def add(self, alpha: float, u: np.ndarray) -> None:
        """Apply one round: u[i] = y[i] * h(x[i]) in {-1, +1}."""
        self.margins = self.margins + alpha * np.asarray(u)
        self.updates_since_sync += 1

    def needs_sync(self) -> bool:
        return self.updates_since_sync >= RESYNC_EVERY

    def resync(self, ensemble: Ensemble, X, y) -> None:
        self.margins = ensemble.margins(X, y)
        self.updates_since_sync = 0


def train_error(margins, y=None) -> float:
    """Fraction misclassified given margins y*score; sign(0) = +1.

    A zero score predicts +1, so an example with margin 0 is an error
    exactly when its label is -1 (pass y to resolve; without y, margin 0
    counts as correct).
    """
    m = np.asarray(margins, dtype=float)
    if m.size == 0:
        raise ValueError("train_error of an empty margin vector")
    wrong = m < 0
    if y is not None:
        wrong = wrong | ((m == 0) & (np.asarray(y) == -1))
    return float(np.mean(wrong))


def margin_histogram(margins, bins: int = 40, lo: float = -1.0, hi: float = 1.0):
    """Histogram counts of margins over [lo, hi]; returns (counts, edges)."""
    m = np.asarray(margins, dtype=float)
    if m.size == 0:
        raise ValueError("margin_histogram of an empty margin vector")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    counts, edges = np.histogram(m, bins=bins, range=(lo, hi))
    return counts, edges
