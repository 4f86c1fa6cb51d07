"""Evaluation: error rates, rank AUC, hypothesis-direction cosine,
paired t-tests, and per-run summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc
from scipy.stats import rankdata

from .boosters import BoostRun
from .core import Dataset, Ensemble


def error_rate(ensemble: Ensemble, dataset: Dataset, against: str = "labels") -> float:
    """Fraction of examples whose predicted sign differs from the chosen channel."""
    y = dataset.scoring_labels(against)
    return float(np.mean(ensemble.predict(dataset.features) != y))


def auc(ensemble: Ensemble, dataset: Dataset, against: str = "labels") -> float:
    """Rank-based area under the ROC curve with midrank tie handling."""
    y = dataset.scoring_labels(against)
    pos = y > 0
    n_pos = int(pos.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined for a single-class dataset")
    ranks = rankdata(ensemble.raw_scores(dataset.features), method="average")
    return float((ranks[pos].sum() - 0.5 * n_pos * (n_pos + 1)) / (n_pos * n_neg))


def collapse_coefficients(ensemble: Ensemble, d: int) -> np.ndarray:
    """Fold the ensemble into one length-d vector: coef[feature] += alpha*polarity.

    Faithful for threshold-at-0 stumps over ±1 features (the synthetic
    family); elsewhere it is a direction summary only.
    """
    coef = np.zeros(d)
    for alpha, stump in ensemble.members:
        if stump.feature >= d:
            raise ValueError(f"stump feature {stump.feature} out of range for d={d}")
        coef[stump.feature] += alpha * stump.polarity
    return coef


def cosine_to_true(ensemble: Ensemble, true_coefficients) -> float:
    """Euclidean cosine between the collapsed ensemble and a reference direction."""
    ref = np.asarray(true_coefficients, dtype=float)
    ref_norm = float(np.linalg.norm(ref))
    if ref_norm == 0.0:
        raise ValueError("true_coefficients must be non-zero")
    coef = collapse_coefficients(ensemble, ref.size)
    norm = float(np.linalg.norm(coef))
    if norm == 0.0:
        raise ValueError("cosine undefined: ensemble collapses to the zero vector")
    return float(coef @ ref / (norm * ref_norm))


def paired_ttest(sample_a, sample_b) -> tuple[float, float]:
    """Classical paired t statistic and two-sided p-value.

    p is computed from the t CDF via the regularized incomplete beta
    function: p = I_{nu/(nu+t^2)}(nu/2, 1/2) with nu = n-1.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise ValueError("need two equal-length 1-D samples with n >= 2")
    diff = a - b
    sd = float(diff.std(ddof=1))
    if not sd > 0.0:
        raise ValueError("degenerate paired t-test: differences have zero variance")
    n = diff.size
    t_stat = float(diff.mean() / (sd / math.sqrt(n)))
    nu = n - 1
    p_value = float(betainc(nu / 2.0, 0.5, nu / (nu + t_stat**2)))
    return t_stat, p_value


@dataclass(frozen=True)
class RunSummary:
    t_f: float
    e_f: float
    status: str
    iterations: int


def run_summary(run: BoostRun) -> RunSummary:
    """Final-time / final-error diagnostics; E_f is against true labels when present."""
    against = "true_labels" if run.dataset.true_labels is not None else "labels"
    return RunSummary(
        t_f=run.final_time,
        e_f=error_rate(run.ensemble, run.dataset, against=against),
        status=run.status,
        iterations=len(run.trace),
    )
