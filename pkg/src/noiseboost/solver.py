"""Per-round (alpha, dt) step solver for the time-dependent boosters.

Each accepted boosting round must simultaneously satisfy
  E1 (decorrelation):           sum_i weight(s_i + alpha*u_i, t+dt) * u_i = 0
  E2 (potential conservation):  sum_i Phi(s_i + alpha*u_i, t+dt) = sum_i Phi(s_i, t)
for the erf-shaped potentials.  Solved by damped 2-D Newton with an
analytic Jacobian; if Newton stalls, one bisection pass along the E2
constraint curve is attempted before reporting failure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .potentials import GaussPotential

# alpha for a perfect hypothesis: the weight a stump would get at
# weighted error 1e-12 (same cap the exponential-loss loop uses)
ALPHA_CAP = 0.5 * float(np.log((1.0 - 1e-12) / 1e-12))
TAU_GUARD = 1e-12  # evaluation time is capped at 1 - TAU_GUARD (arg singular at t=1)
DT_BOUNDARY = 1e-9  # dt within this of 1-t counts as reaching final time


class StepStatus(enum.Enum):
    CONVERGED = "converged"
    STUCK = "stuck"
    REACHED_FINAL_TIME = "reached_final_time"
    FAILED = "failed"


@dataclass
class StepSolution:
    """One solved (or failed) boosting step.

    residuals = (e1, e2): e1 is the decorrelation residual divided by the
    max example weight (scale-free; the bare sum vacuously shrinks as
    weights collapse), e2 the raw potential-conservation residual.
    """

    alpha: float
    dt: float
    residuals: tuple[float, float]
    status: StepStatus
    newton_iters: int = 0
    reason: str = ""

    @property
    def accepted(self) -> bool:
        return self.status in (StepStatus.CONVERGED, StepStatus.REACHED_FINAL_TIME)


def solve_step(
    potential: GaussPotential,
    margins,
    u,
    t: float,
    *,
    tol_scale: float = 1e-8,
    dt_min: float = 1e-5,
    max_newton_iters: int = 100,
    max_halvings: int = 50,
) -> StepSolution:
    """Solve E1/E2 for one round; never raises on numerical trouble."""
    if not isinstance(potential, GaussPotential):
        raise ValueError("solve_step needs an erf-shaped time-dependent potential")
    s = np.asarray(margins, dtype=float)
    u = np.asarray(u, dtype=float)
    if s.shape != u.shape or s.ndim != 1 or s.size == 0:
        raise ValueError(f"margins {s.shape} and u {u.shape} must be equal-length 1-D")
    if not np.isin(u, (-1.0, 1.0)).all():
        raise ValueError("u entries must be -1 or +1")
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must be in [0, 1), got {t}")
    if (u == -1.0).all():
        raise ValueError("u must not be all -1 (flip the stump's polarity)")

    n = s.size
    tol = tol_scale * n
    dt_max = 1.0 - t

    if (u == 1.0).all():
        # perfect hypothesis: E1 has no root; drive time to its end
        return StepSolution(
            alpha=ALPHA_CAP,
            dt=dt_max,
            residuals=(float("nan"), float("nan")),
            status=StepStatus.REACHED_FINAL_TIME,
            reason="all examples classified correctly",
        )

    p_total = float(np.sum(potential.value(s, t)))

    def residuals_at(alpha: float, dt: float):
        tau = min(t + dt, 1.0 - TAU_GUARD)
        sm = s + alpha * u
        a = potential.arg(sm, tau)
        w = np.exp(-a * a)
        wmax = float(w.max())
        f1 = float(w @ u)
        f2 = float(np.sum(0.5 * (1.0 - erf(a))) - p_total)
        e1 = f1 / wmax if wmax > 0.0 else 0.0
        return a, w, wmax, f1, f2, e1, tau

    def merit(e1: float, f2: float) -> float:
        return float(np.hypot(e1, f2))

    def is_converged(e1: float, f2: float) -> bool:
        return abs(e1) <= tol and abs(f2) <= tol

    def finish(alpha: float, dt: float, e1: float, f2: float, iters: int) -> StepSolution:
        if dt >= dt_max - DT_BOUNDARY:
            status = StepStatus.REACHED_FINAL_TIME
            dt = dt_max
        elif dt < dt_min:
            status = StepStatus.STUCK
        else:
            status = StepStatus.CONVERGED
        return StepSolution(alpha, dt, (e1, f2), status, newton_iters=iters)

    # edge-based initial guess
    _, w0, wmax0, f10, _, _, _ = residuals_at(0.0, 0.0)
    wsum = float(w0.sum())
    gamma = f10 / wsum if wsum > 0.0 else 0.0
    gamma = min(max(gamma, -0.999999), 0.999999)
    alpha0 = max(0.5 * float(np.log((1.0 + gamma) / (1.0 - gamma))), 1e-6)
    alpha0 = min(alpha0, ALPHA_CAP)
    x_a, x_d = alpha0, min(alpha0**2, dt_max)

    a, w, wmax, f1, f2, e1, tau = residuals_at(x_a, x_d)
    iters = 0
    for iters in range(1, max_newton_iters + 1):
        if is_converged(e1, f2):
            return finish(x_a, x_d, e1, f2, iters - 1)
        # analytic Jacobian of (F1, F2) in (alpha, dt)
        a_s = potential.arg_ds(tau)
        a_t = potential.arg_dt(s + x_a * u, tau)
        aw = a * w
        j11 = -2.0 * a_s * float(np.sum(aw))          # dF1/dalpha (u^2 = 1)
        j12 = -2.0 * float(np.sum(aw * a_t * u))      # dF1/ddt
        j21 = -(a_s / np.sqrt(np.pi)) * f1            # dF2/dalpha
        j22 = -(1.0 / np.sqrt(np.pi)) * float(np.sum(w * a_t))  # dF2/ddt
        det = j11 * j22 - j12 * j21
        if not np.isfinite(det) or abs(det) < 1e-300:
            break
        step_a = -(j22 * f1 - j12 * f2) / det
        step_d = -(-j21 * f1 + j11 * f2) / det
        base = merit(e1, f2)
        lam = 1.0
        accepted = False
        for _ in range(max_halvings):
            cand_a = x_a + lam * step_a
            cand_d = x_d + lam * step_d
            if not (0.0 <= cand_a <= ALPHA_CAP and 0.0 <= cand_d <= dt_max):
                lam *= 0.5
                continue
            ca, cw, cwmax, cf1, cf2, ce1, ctau = residuals_at(cand_a, cand_d)
            if merit(ce1, cf2) < base:
                x_a, x_d = cand_a, cand_d
                a, w, wmax, f1, f2, e1, tau = ca, cw, cwmax, cf1, cf2, ce1, ctau
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            break

    if is_converged(e1, f2):
        return finish(x_a, x_d, e1, f2, iters)

    fallback = _bisect_fallback(residuals_at, is_converged, alpha0, dt_max, tol)
    if fallback is not None:
        fb_a, fb_d, fb_e1, fb_f2 = fallback
        return finish(fb_a, fb_d, fb_e1, fb_f2, iters)
    return StepSolution(
        alpha=x_a,
        dt=x_d,
        residuals=(e1, f2),
        status=StepStatus.FAILED,
        newton_iters=iters,
        reason="newton and bisection fallback did not converge",
    )


def _dt_on_e2(residuals_at, alpha: float, dt_max: float):
    """Smallest dt in [0, dt_max] where E2 changes sign, bisected; None if none."""
    grid = np.linspace(0.0, dt_max, 33)
    prev_dt, prev_f2 = grid[0], residuals_at(alpha, grid[0])[4]
    if prev_f2 == 0.0:
        return float(prev_dt)
    for g in grid[1:]:
        f2 = residuals_at(alpha, float(g))[4]
        if f2 == 0.0:
            return float(g)
        if np.sign(f2) != np.sign(prev_f2):
            lo, hi, flo = prev_dt, float(g), prev_f2
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = residuals_at(alpha, mid)[4]
                if fm == 0.0:
                    return mid
                if np.sign(fm) == np.sign(flo):
                    lo, flo = mid, fm
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_dt, prev_f2 = float(g), f2
    return None


def _bisect_fallback(residuals_at, is_converged, alpha0: float, dt_max: float, tol: float):
    """Scan alpha, tracing the E2 curve, for a sign change of E1; bisect it."""
    alpha_hi = max(4.0 * alpha0, 3.0)
    alphas = np.linspace(0.0, min(alpha_hi, ALPHA_CAP), 41)

    def e1_on_curve(alpha: float):
        dt = _dt_on_e2(residuals_at, alpha, dt_max)
        if dt is None:
            return None
        _, _, _, _, f2, e1, _ = residuals_at(alpha, dt)
        return e1, f2, dt

    prev = None
    for g in alphas:
        cur = e1_on_curve(float(g))
        if cur is not None and cur[0] == 0.0:
            if is_converged(cur[0], cur[1]):
                return float(g), cur[2], cur[0], cur[1]
        if prev is not None and cur is not None and np.sign(cur[0]) != np.sign(prev[1][0]):
            lo, hi = prev[0], float(g)
            flo = prev[1][0]
            best = None
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                cm = e1_on_curve(mid)
                if cm is None:
                    break
                best = (mid, cm)
                if np.sign(cm[0]) == np.sign(flo):
                    lo, flo = mid, cm[0]
                else:
                    hi = mid
            if best is not None and is_converged(best[1][0], best[1][1]):
                return best[0], best[1][2], best[1][0], best[1][1]
        if cur is not None:
            prev = (float(g), cur)
    return None
