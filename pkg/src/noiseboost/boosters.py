"""Training loops: the two margin-loss boosters, the two time-dependent
boosters with their adaptive error-goal wrapper, and the majority-vote
reference recursion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .core import Dataset, Ensemble, MarginState, Stump, train_error
from .potentials import BBMPotential, brown_from_epsilon, robust_from_goals
from .solver import ALPHA_CAP, StepStatus, solve_step
from .stumps import StumpTrainer

ALGORITHMS = ("adb", "llb", "bb", "rb", "bbm")
EPS_FLOOR = 1e-6  # epsilon=0 means "maximally ambitious"; derivations need epsilon > 0
EDGE_FLOOR = 1e-12  # below this a stump is treated as uncorrelated

# In adaptive mode a solved round must advance time by at least this much
# to count as progress.  When the error goal is too ambitious the solver
# keeps returning geometrically shrinking steps (dt ~ 1e-5..5e-4) that
# never add up, yet each one converges, so the schedule would otherwise
# never fire.  Converged rounds below the floor are still appended (they
# are legitimate steps) but count toward the failure budget instead of
# resetting it.
PROGRESS_FLOOR = 1e-3

# A too-ambitious error goal wedges the run within a few rounds of every
# goal level, so consecutive bumps with no intervening healthy round mean
# the goal is far below feasible.  While the time coordinate is still near
# the start, such chained bumps grow by one extra increment each (capped),
# letting the schedule cross the infeasible band in a few rounds instead
# of dozens; once real time has accumulated, every bump is a single
# increment again.
ESCALATION_CAP = 3
ESCALATION_T_MAX = 0.05

# Past the takeoff window an adaptive run whose solves keep failing is in
# the terminal regime: the remaining-time box has shrunk until the
# conservation curve is gone, and raising the goal no longer rescues the
# solve.  Twenty consecutive rounds with nothing accepted (five full
# retry-and-bump cycles at the default schedule) end the run instead of
# spending the rest of the iteration budget re-failing ever-costlier
# solves.  Takeoff stalls are exempt — there the bumps are the mechanism
# that gets runs moving.
STALL_ROUNDS_CAP = 20

STATUS_COMPLETED = "completed"
STATUS_REACHED_T1 = "reached_t1"
STATUS_STUCK = "stuck_exhausted"


@dataclass
class BoosterConfig:
    """Knobs for one training run; irrelevant fields are ignored per algorithm."""

    algorithm: str
    max_iters: int = 200
    epsilon: float = 0.0  # error goal (bb/rb); starting value in adaptive mode
    theta: float = 0.0  # margin goal (rb only; bb has none)
    sigma_f: float = 0.001  # final potential width (rb)
    gamma: float = 0.1  # assumed edge (bbm)
    bbm_rounds: int = 0  # majority-vote horizon; 0 means use max_iters
    adaptive_epsilon: bool = False
    eps_increment: float = 0.01
    max_tries: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}, expected one of {ALGORITHMS}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in [0, 1), got {self.epsilon}")
        if self.theta < 0.0:
            raise ValueError(f"theta must be >= 0, got {self.theta}")
        if not self.sigma_f > 0.0:
            raise ValueError(f"sigma_f must be > 0, got {self.sigma_f}")
        if self.adaptive_epsilon and self.algorithm not in ("bb", "rb"):
            raise ValueError("adaptive_epsilon applies only to the time-dependent boosters")
        if self.max_tries < 1:
            raise ValueError(f"max_tries must be >= 1, got {self.max_tries}")


@dataclass
class IterationRecord:
    """One row of a run's trace; appended=False marks a failed solve."""

    iteration: int
    t: float
    dt: float
    alpha: float
    epsilon: float
    train_error: float
    stump: Stump | None
    appended: bool = True
    note: str = ""


@dataclass
class BoostRun:
    ensemble: Ensemble
    trace: list[IterationRecord]
    final_time: float
    final_train_error: float
    status: str
    dataset: Dataset
    config: BoosterConfig


@dataclass
class AdaptiveEpsilon:
    """Consecutive-failure counter driving the error-goal schedule.

    Every stalled solve counts a failure; once the count exceeds
    max_tries the error goal is bumped by one increment (and the counter
    reset) so training resumes with easier constants — margins and time
    are kept.  A healthy step resets the counter.  Bumps chained with no
    healthy round between them may escalate (see note_failure).  The goal
    may never reach the cap of 1/2.
    """

    epsilon: float
    increment: float = 0.01
    max_tries: int = 3
    cap: float = 0.5
    failures: int = field(default=0, init=False)
    chained_bumps: int = field(default=0, init=False)

    def note_success(self) -> None:
        self.failures = 0
        self.chained_bumps = 0

    def note_failure(self, escalate: bool = False) -> str:
        """Returns 'retry', 'bumped', or 'exhausted'.

        With escalate=True the k-th consecutive bump (no healthy round
        since the last one) moves the goal by min(k, ESCALATION_CAP)
        increments instead of one.
        """
        self.failures += 1
        if self.failures <= self.max_tries:
            return "retry"
        self.chained_bumps += 1
        step = self.increment
        if escalate:
            step *= min(self.chained_bumps, ESCALATION_CAP)
        if self.epsilon + step >= self.cap:
            return "exhausted"
        self.epsilon += step
        self.failures = 0
        return "bumped"


def train(dataset: Dataset, config: BoosterConfig) -> BoostRun:
    """Dispatch on config.algorithm."""
    if config.algorithm == "adb":
        return train_adaboost(dataset, config)
    if config.algorithm == "llb":
        return train_logloss(dataset, config)
    if config.algorithm in ("bb", "rb"):
        return train_brownrobust(dataset, config)
    return train_bbm(dataset, config)


def train_adaboost(dataset: Dataset, config: BoosterConfig) -> BoostRun:
    """Exponential-weight boosting: w = e^{-s}, alpha = ½ln((1-err)/err)."""
    trainer = StumpTrainer(dataset)
    X, y = dataset.features, dataset.labels
    ensemble = Ensemble()
    state = MarginState.zeros(dataset.n)
    trace: list[IterationRecord] = []
    nan = float("nan")
    for it in range(1, config.max_iters + 1):
        m = state.margins
        w = np.exp(-(m - m.min()))  # shifted by the min margin: same stump, no overflow
        stump, edge = trainer.train(w)
        if edge <= EDGE_FLOOR:
            trace.append(
                IterationRecord(it, nan, nan, 0.0, nan, train_error(m, y), None,
                                appended=False, note="no correlated stump")
            )
            break
        err_w = 0.5 * (1.0 - edge)
        capped = err_w <= 1e-12
        alpha = ALPHA_CAP if capped else 0.5 * math.log((1.0 - err_w) / err_w)
        u = (y * stump.predict(X)).astype(float)
        ensemble.append(alpha, stump)
        state.add(alpha, u)
        if state.needs_sync():
            state.resync(ensemble, X, y)
        note = "perfect stump" if capped else ""
        trace.append(
            IterationRecord(it, nan, nan, alpha, nan, train_error(state.margins, y), stump,
                            note=note)
        )
        if capped:
            break
    return BoostRun(
        ensemble=ensemble,
        trace=trace,
        final_time=nan,
        final_train_error=train_error(state.margins, y),
        status=STATUS_COMPLETED,
        dataset=dataset,
        config=config,
    )


def _golden_min(f, lo: float, hi: float, tol: float = 1e-8) -> float:
    """Golden-section minimizer on [lo, hi]; returns the bracket midpoint."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


LLB_ALPHA_MAX = 10.0  # logistic loss is flat to machine precision beyond this


def train_logloss(dataset: Dataset, config: BoosterConfig) -> BoostRun:
    """Log-loss boosting: w = 1/(1+e^{s}), alpha by line search on the loss."""
    trainer = StumpTrainer(dataset)
    X, y = dataset.features, dataset.labels
    ensemble = Ensemble()
    state = MarginState.zeros(dataset.n)
    trace: list[IterationRecord] = []
    nan = float("nan")
    for it in range(1, config.max_iters + 1):
        m = state.margins
        w = expit(-m)
        wmax = w.max()
        if not wmax > 0.0:
            trace.append(
                IterationRecord(it, nan, nan, 0.0, nan, train_error(m, y), None,
                                appended=False, note="weights vanished")
            )
            break
        stump, edge = trainer.train(w / wmax)
        if edge <= EDGE_FLOOR:
            trace.append(
                IterationRecord(it, nan, nan, 0.0, nan, train_error(m, y), None,
                                appended=False, note="no correlated stump")
            )
            break
        u = (y * stump.predict(X)).astype(float)
        alpha = _golden_min(lambda a: float(np.logaddexp(0.0, -(m + a * u)).sum()),
                            0.0, LLB_ALPHA_MAX)
        ensemble.append(alpha, stump)
        state.add(alpha, u)
        if state.needs_sync():
            state.resync(ensemble, X, y)
        trace.append(
            IterationRecord(it, nan, nan, alpha, nan, train_error(state.margins, y), stump)
        )
    return BoostRun(
        ensemble=ensemble,
        trace=trace,
        final_time=nan,
        final_train_error=train_error(state.margins, y),
        status=STATUS_COMPLETED,
        dataset=dataset,
        config=config,
    )


def train_brownrobust(dataset: Dataset, config: BoosterConfig) -> BoostRun:
    """Potential-conserving boosting in continuous time.

    Each round trains a stump on the current potential weights and solves
    the (alpha, dt) pair; stalled solves either end the run or, in
    adaptive mode, feed the error-goal schedule (keeping margins and t).
    Adaptive runs also count accepted rounds advancing t by less than
    PROGRESS_FLOOR toward the schedule, since a goal that is too
    ambitious shows up as converged-but-vanishing steps, not solver
    failures.
    """
    is_brown = config.algorithm == "bb"

    def derive(eps: float):
        eps = max(eps, EPS_FLOOR)
        if is_brown:
            return brown_from_epsilon(eps)
        return robust_from_goals(eps, config.theta, config.sigma_f)

    schedule = AdaptiveEpsilon(
        epsilon=config.epsilon, increment=config.eps_increment, max_tries=config.max_tries
    )
    potential = derive(schedule.epsilon)
    trainer = StumpTrainer(dataset)
    X, y = dataset.features, dataset.labels
    ensemble = Ensemble()
    state = MarginState.zeros(dataset.n)
    trace: list[IterationRecord] = []
    t = 0.0
    status = STATUS_COMPLETED
    stalled_rounds = 0
    for it in range(1, config.max_iters + 1):
        w = potential.weight(state.margins, t)
        wmax = float(w.max())
        solution = None
        stump = None
        u = None
        stall_note = "weights vanished"
        if wmax > 0.0:
            stump, _edge = trainer.train(w / wmax)
            u = (y * stump.predict(X)).astype(float)
            if (u == -1.0).all():  # cannot happen with polarity-flipping stumps; solver pre
                stall_note = "anti-correlated stump"
            else:
                solution = solve_step(potential, state.margins, u, t)
        if solution is not None and solution.accepted:
            stalled_rounds = 0
            ensemble.append(solution.alpha, stump)
            state.add(solution.alpha, u)
            if state.needs_sync():
                state.resync(ensemble, X, y)
            t = min(t + solution.dt, 1.0)
            reached = solution.status is StepStatus.REACHED_FINAL_TIME
            slow = (
                config.adaptive_epsilon
                and not reached
                and solution.dt < PROGRESS_FLOOR
            )
            trace.append(
                IterationRecord(it, t, solution.dt, solution.alpha, schedule.epsilon,
                                train_error(state.margins, y), stump,
                                note="reached final time" if reached
                                else "below progress floor" if slow else "")
            )
            if reached:
                status = STATUS_REACHED_T1
                break
            if not slow:
                schedule.note_success()
                continue
        else:
            note = stall_note if solution is None else solution.status.value
            trace.append(
                IterationRecord(it, t, 0.0, 0.0, schedule.epsilon,
                                train_error(state.margins, y), stump,
                                appended=False, note=note)
            )
            if not config.adaptive_epsilon:
                status = STATUS_STUCK
                break
            stalled_rounds += 1
            if t >= ESCALATION_T_MAX and stalled_rounds >= STALL_ROUNDS_CAP:
                status = STATUS_STUCK
                break
        action = schedule.note_failure(escalate=t < ESCALATION_T_MAX)
        if action == "exhausted":
            status = STATUS_STUCK
            break
        if action == "bumped":
            potential = derive(schedule.epsilon)
    return BoostRun(
        ensemble=ensemble,
        trace=trace,
        final_time=t,
        final_train_error=train_error(state.margins, y),
        status=status,
        dataset=dataset,
        config=config,
    )


def train_bbm(dataset: Dataset, config: BoosterConfig) -> BoostRun:
    """Majority-vote reference loop: table weights, unit alphas.

    A round whose stump edge falls below the assumed gamma is recorded as
    a warning but training continues; all-zero weights (every example
    already decided) terminate the loop.
    """
    rounds = config.bbm_rounds or config.max_iters
    table = BBMPotential(rounds=rounds, gamma=config.gamma)
    trainer = StumpTrainer(dataset)
    X, y = dataset.features, dataset.labels
    ensemble = Ensemble()
    imargins = np.zeros(dataset.n, dtype=int)
    trace: list[IterationRecord] = []
    nan = float("nan")
    for rnd in range(1, rounds + 1):
        w = table.round_weights(rnd, imargins)
        if not float(w.sum()) > 0.0:
            trace.append(
                IterationRecord(rnd, nan, nan, 0.0, nan, train_error(imargins, y), None,
                                appended=False, note="all weights zero")
            )
            break
        stump, edge = trainer.train(w)
        u = y * stump.predict(X)
        ensemble.append(1.0, stump)
        imargins = imargins + u
        note = "" if edge >= config.gamma else f"edge {edge:.4g} below gamma {config.gamma:g}"
        trace.append(
            IterationRecord(rnd, nan, nan, 1.0, nan, train_error(imargins, y), stump, note=note)
        )
    return BoostRun(
        ensemble=ensemble,
        trace=trace,
        final_time=nan,
        final_train_error=train_error(imargins, y),
        status=STATUS_COMPLETED,
        dataset=dataset,
        config=config,
    )
