"""Potential (loss) surfaces and their example-weight functions.

Four continuous kinds — exponential, logistic, and two erf-shaped
time-dependent potentials — plus the discrete backward recursion used by
boost-by-majority.  For the erf-shaped kinds the example weight is the
bare Gaussian exp(-arg(s,t)^2): the positive scale factors produced by
differentiating erf are dropped, since every consumer (stump search and
the step solver's decorrelation equation) uses weights only inside
homogeneous expressions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfinv, expit

E = float(np.e)


class Potential:
    """Common interface: value(s, t) and weight(s, t) = -dΦ/ds (rescaled)."""

    name = "base"

    def value(self, s, t: float):
        raise NotImplementedError

    def weight(self, s, t: float):
        raise NotImplementedError


@dataclass(frozen=True)
class ExpPotential(Potential):
    """AdaBoost's exponential loss e^{-s}; ignores t."""

    name = "exp"

    def value(self, s, t: float = 0.0):
        return np.exp(-np.asarray(s, dtype=float))

    def weight(self, s, t: float = 0.0):
        return np.exp(-np.asarray(s, dtype=float))


@dataclass(frozen=True)
class LogitPotential(Potential):
    """Logistic loss ln(1 + e^{-s}); ignores t."""

    name = "logit"

    def value(self, s, t: float = 0.0):
        return np.logaddexp(0.0, -np.asarray(s, dtype=float))

    def weight(self, s, t: float = 0.0):
        return expit(-np.asarray(s, dtype=float))


class GaussPotential(Potential):
    """Erf-shaped potential ½(1 - erf(arg(s,t))) with Gaussian weight.

    Subclasses provide arg(s,t) and its partial derivatives, which is all
    the step solver needs to build its Jacobian.
    """

    def arg(self, s, t: float):
        raise NotImplementedError

    def arg_ds(self, t: float) -> float:
        """d(arg)/ds — depends only on t for both kinds here."""
        raise NotImplementedError

    def arg_dt(self, s, t: float):
        raise NotImplementedError

    def value(self, s, t: float):
        return 0.5 * (1.0 - erf(self.arg(s, t)))

    def weight(self, s, t: float):
        a = self.arg(s, t)
        return np.exp(-a * a)


@dataclass(frozen=True)
class BrownPotential(GaussPotential):
    """Time-limited potential with argument (s + 2√c(1-t)) / √(2(1-t)).

    Valid for 0 <= t < 1; at t=1 the pointwise limit (a 0/1 step at s=0)
    is returned.  c > 0 controls how much total potential ("give-up"
    budget) the run starts with.
    """

    c: float

    name = "brown"

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be > 0, got {self.c}")

    def _check_t(self, t: float) -> None:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t must be in [0, 1], got {t}")

    def arg(self, s, t: float):
        self._check_t(t)
        rem = 1.0 - t
        return (np.asarray(s, dtype=float) + 2.0 * np.sqrt(self.c) * rem) / np.sqrt(2.0 * rem)

    def arg_ds(self, t: float) -> float:
        return 1.0 / np.sqrt(2.0 * (1.0 - t))

    def arg_dt(self, s, t: float):
        rem = 1.0 - t
        return np.asarray(s, dtype=float) / (2.0 * rem) ** 1.5 - np.sqrt(self.c / (2.0 * rem))

    def value(self, s, t: float):
        self._check_t(t)
        s = np.asarray(s, dtype=float)
        if t == 1.0:  # pointwise limit: step 1{s<0}, ½ at s=0
            return np.where(s < 0, 1.0, np.where(s > 0, 0.0, 0.5))
        return super().value(s, t)

    def weight(self, s, t: float):
        self._check_t(t)
        s = np.asarray(s, dtype=float)
        if t == 1.0:  # limit of exp(-arg²)
            return np.where(s == 0, 1.0, 0.0)
        return super().weight(s, t)


@dataclass(frozen=True)
class RobustPotential(GaussPotential):
    """Potential with drifting center mu(t) and shrinking width sigma(t).

    sigma(t) = sqrt(c1·e^{-2t} - 1), mu(t) = c2·e^{-t} + 2·rho; the
    argument is (s - mu(t)) / sigma(t).  Valid while c1·e^{-2t} > 1.
    """

    rho: float
    c1: float
    c2: float

    name = "robust"

    def __post_init__(self):
        if not self.c1 > 1.0:
            raise ValueError(f"c1 must be > 1 so sigma(0) is defined, got {self.c1}")

    def _sigma_sq(self, t: float) -> float:
        if not t >= 0.0:
            raise ValueError(f"t must be >= 0, got {t}")
        ssq = self.c1 * np.exp(-2.0 * t) - 1.0
        if not ssq > 0.0:
            raise ValueError(f"sigma undefined at t={t} (c1*e^(-2t) <= 1)")
        return ssq

    def sigma(self, t: float) -> float:
        return float(np.sqrt(self._sigma_sq(t)))

    def mu(self, t: float) -> float:
        return float(self.c2 * np.exp(-t) + 2.0 * self.rho)

    def arg(self, s, t: float):
        return (np.asarray(s, dtype=float) - self.mu(t)) / self.sigma(t)

    def arg_ds(self, t: float) -> float:
        return 1.0 / self.sigma(t)

    def arg_dt(self, s, t: float):
        sig = self.sigma(t)
        dmu = -self.c2 * np.exp(-t)
        dsig = -self.c1 * np.exp(-2.0 * t) / sig
        return -dmu / sig - self.arg(s, t) * (dsig / sig)


def derive_brown_c(epsilon: float) -> float:
    """Map a target error epsilon to the time-limited potential's c.

    Boundary condition value(0, 0) = epsilon (the initial "give-up"
    budget equals the error goal, mirroring the robust potential's
    derivation): 1/2 (1 - erf(sqrt(2c))) = epsilon, so
    c = erfinv(1-2*epsilon)^2 / 2; monotone decreasing in epsilon.
    """
    if not 0.0 < epsilon < 0.5:
        raise ValueError(f"epsilon must be in (0, 0.5), got {epsilon}")
    return float(erfinv(1.0 - 2.0 * epsilon) ** 2 / 2.0)


def brown_from_epsilon(epsilon: float) -> BrownPotential:
    return BrownPotential(c=derive_brown_c(epsilon))


def derive_robust_params(epsilon: float, theta: float, sigma_f: float):
    """Constants (rho, c1, c2) from the error goal, margin goal and final width.

    Boundary conditions: sigma(1) = sigma_f and mu(1) = theta (the
    potential at t=1 is a sharp step near margin theta), plus value(0, 0)
    = epsilon (the initial "give-up" budget equals the error goal), which
    pins mu(0) = -sigma(0)·erfinv(1-2·epsilon).
    """
    if not 0.0 < epsilon < 0.5:
        raise ValueError(f"epsilon must be in (0, 0.5), got {epsilon}")
    if not theta >= 0.0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    if not sigma_f > 0.0:
        raise ValueError(f"sigma_f must be > 0, got {sigma_f}")
    c1 = (sigma_f**2 + 1.0) * E**2
    sigma0 = float(np.sqrt(c1 - 1.0))
    rho = (theta * E + sigma0 * float(erfinv(1.0 - 2.0 * epsilon))) / (2.0 * E - 2.0)
    c2 = (theta - 2.0 * rho) * E
    return float(rho), float(c1), float(c2)


def robust_from_goals(epsilon: float, theta: float, sigma_f: float) -> RobustPotential:
    rho, c1, c2 = derive_robust_params(epsilon, theta, sigma_f)
    return RobustPotential(rho=rho, c1=c1, c2=c2)


def bbm_potential_table(rounds: int, gamma: float) -> np.ndarray:
    """Backward recursion table for the boost-by-majority game.

    Rows are stages t = 0..rounds+1, columns are integer margins
    i = -(rounds+1)..(rounds+1) (column index i + rounds + 1).  Terminal
    row: Φ_i = 1 if i < 0 else 0.  Interior:
    Φ_i^t = (½+γ)·Φ_{i+1}^{t+1} + (½-γ)·Φ_{i-1}^{t+1},
    where margins beyond the table edges stay resolved (0 above, 1 below).
    """
    T = int(rounds)
    if T < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    if not 0.0 < gamma < 0.5:
        raise ValueError(f"gamma must be in (0, 0.5), got {gamma}")
    width = 2 * T + 3
    phi = np.zeros((T + 2, width))
    i_axis = np.arange(-T - 1, T + 2)
    phi[T + 1] = (i_axis < 0).astype(float)
    p, q = 0.5 + gamma, 0.5 - gamma
    up = np.empty(width)
    down = np.empty(width)
    for t in range(T, -1, -1):
        nxt = phi[t + 1]
        up[:-1] = nxt[1:]
        up[-1] = 0.0  # i+1 above the table: margin can never go negative
        down[1:] = nxt[:-1]
        down[0] = 1.0  # i-1 below the table: margin can never recover
        phi[t] = p * up + q * down
    return phi


@dataclass(frozen=True)
class BBMPotential:
    """Dense recursion table with out-of-range lookups and round weights."""

    rounds: int
    gamma: float

    name = "bbm"

    def __post_init__(self):
        object.__setattr__(self, "table", bbm_potential_table(self.rounds, self.gamma))

    def value(self, stage: int, i):
        """Φ_i^stage with margins beyond the table resolved to 0/1."""
        if not 0 <= stage <= self.rounds + 1:
            raise ValueError(f"stage must be in [0, {self.rounds + 1}], got {stage}")
        i = np.asarray(i, dtype=int)
        col = i + self.rounds + 1
        inside = (col >= 0) & (col < self.table.shape[1])
        looked = self.table[stage, np.clip(col, 0, self.table.shape[1] - 1)]
        return np.where(inside, looked, np.where(i > 0, 0.0, 1.0))

    def round_weights(self, round_index: int, i):
        """Example weights for 1-based round t: Φ_{i-1}^{t+1} - Φ_{i+1}^{t+1}.

        The difference of the next stage's potential across the example's
        current integer margin; nonnegative since Φ is non-increasing in i.
        """
        if not 1 <= round_index <= self.rounds:
            raise ValueError(f"round must be in [1, {self.rounds}], got {round_index}")
        i = np.asarray(i, dtype=int)
        return self.value(round_index + 1, i - 1) - self.value(round_index + 1, i + 1)
