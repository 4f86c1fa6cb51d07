"""Noise-robust boosting toolkit.

Decision-stump boosting under label noise: the exponential- and
logistic-loss baselines, the two time-dependent potential boosters with
an adaptive error-goal heuristic, the majority-vote reference recursion,
a synthetic hard-distribution generator, and a seeded benchmark harness.
"""

from .boosters import (
    ALGORITHMS,
    AdaptiveEpsilon,
    BoosterConfig,
    BoostRun,
    IterationRecord,
    train,
    train_adaboost,
    train_bbm,
    train_brownrobust,
    train_logloss,
)
from .core import Dataset, Ensemble, MarginState, Stump, margin_histogram, sign, train_error
from .data import (
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
from .metrics import auc, cosine_to_true, error_rate, paired_ttest, run_summary
from .potentials import (
    BBMPotential,
    BrownPotential,
    ExpPotential,
    LogitPotential,
    RobustPotential,
    bbm_potential_table,
    brown_from_epsilon,
    derive_brown_c,
    derive_robust_params,
    robust_from_goals,
)
from .solver import StepSolution, StepStatus, solve_step
from .stumps import StumpTrainer, train_stump

__version__ = "0.1.0"
