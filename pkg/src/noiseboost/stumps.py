"""Weighted decision-stump search over all features and thresholds."""

from __future__ import annotations

import numpy as np

from .core import Dataset, Stump


class StumpTrainer:
    """Exhaustive stump search with a per-dataset presort cache.

    Candidate thresholds per feature are a below-minimum sentinel
    (min value - 1, the stump that answers `polarity` everywhere) plus the
    midpoints between consecutive distinct sorted values.  train() picks
    the stump maximizing |sum_i w_i y_i h(x_i)|, breaking ties toward the
    lowest feature index, then the lowest threshold, then polarity +1.
    """

    def __init__(self, dataset: Dataset):
        X = dataset.features
        self.y = dataset.labels.astype(float)
        self.n, self.d = X.shape
        # presorted once; every train() call reuses the order
        self.order = np.argsort(X, axis=0, kind="stable")
        self.sorted_values = np.take_along_axis(X, self.order, axis=0)
        if self.n > 1:
            # midpoint after sorted position k is a candidate iff the value changes there
            self.is_boundary = self.sorted_values[:-1, :] < self.sorted_values[1:, :]
            self.midpoints = 0.5 * (self.sorted_values[:-1, :] + self.sorted_values[1:, :])
        else:
            self.is_boundary = np.zeros((0, self.d), dtype=bool)
            self.midpoints = np.zeros((0, self.d))
        self.sentinels = self.sorted_values[0, :] - 1.0

    def train(self, weights) -> tuple[Stump, float]:
        """Best stump and its edge = |sum w y h| / sum w for these weights."""
        w = np.asarray(weights, dtype=float)
        if w.shape != (self.n,):
            raise ValueError(f"weights shape {w.shape} != ({self.n},)")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        total = w.sum()
        if not total > 0.0:
            raise ValueError("weights must not all be zero")

        wy = w * self.y
        s_all = wy.sum()  # correlation of the all-positive stump (sentinel threshold)
        # correlation of threshold after position k: sum_{x>=thr} wy - sum_{x<thr} wy
        prefix = np.cumsum(wy[self.order], axis=0)
        if self.n > 1:
            corr = s_all - 2.0 * prefix[:-1, :]
            scored = np.where(self.is_boundary, np.abs(corr), -1.0)
            best_k = scored.argmax(axis=0)  # first occurrence = lowest threshold
            best_mid = scored[best_k, np.arange(self.d)]
        else:
            best_k = np.zeros(self.d, dtype=int)
            best_mid = np.full(self.d, -1.0)

        # sentinel threshold sits below every midpoint, so it wins ties within a feature
        sentinel_score = abs(s_all)
        per_feature = np.where(sentinel_score >= best_mid, sentinel_score, best_mid)
        f = int(per_feature.argmax())  # first occurrence = lowest feature
        if sentinel_score >= best_mid[f]:
            threshold = float(self.sentinels[f])
            corr_best = s_all
        else:
            k = int(best_k[f])
            threshold = float(self.midpoints[k, f])
            corr_best = float(s_all - 2.0 * prefix[k, f])

        polarity = 1 if corr_best >= 0.0 else -1
        edge = abs(corr_best) / total
        return Stump(feature=f, threshold=threshold, polarity=polarity), float(edge)


def train_stump(dataset: Dataset, weights) -> tuple[Stump, float]:
    """One-shot stump search (builds a throwaway presort cache)."""
    return StumpTrainer(dataset).train(weights)
