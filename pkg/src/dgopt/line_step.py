"""Scalar solver for one discrete-gradient descent step along a line.

Given the restriction phi(t) = V(x + t d) of the objective to a line,
an accepted step at displacement t > 0 satisfies the secant relation

    beta = (phi(0) - phi(t)) / t,        t = tau * beta,

for some admissible step size tau in [tau_min, tau_max]; equivalently
the implied step size tau(t) = t^2 / (phi(0) - phi(t)) must land inside
that interval.  By construction every accepted step obeys the exact
decrease identity phi(0) - phi(t) = t^2 / tau.

The solver spends evaluations frugally: probe both senses of the
direction, extrapolate a first trial displacement from the probe slope,
grow it while the samples still look concave, refine with successive
parabolic interpolation, then rescale geometrically until the implied
step size is admissible.  Once rescaling has straddled the admissible
window the remaining budget bisects the straddling pair, which still
converges when the window is a single point (tau_min == tau_max).

No stage raises for algorithmic reasons; a step that cannot be fully
accepted degrades to the best decreasing displacement seen, and a
direction along which neither probe decreases is reported stationary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    TAU_REL_SLACK,
    Objective,
    SolverConfig,
    StepOutcome,
    StepStatus,
)

# interior fraction of a golden-section probe, (3 - sqrt(5)) / 2
GOLDEN_STEP = 0.3819660112501051


@dataclass
class LineProblem:
    """The objective restricted to the line t -> x + t * d.

    ``f0`` caches the already-known value at t = 0 so a step never pays
    to rediscover it.
    """

    objective: Objective
    x: np.ndarray
    d: np.ndarray
    f0: float

    def phi(self, t: float) -> float:
        return self.objective.eval(self.x + t * self.d)


def probe(problem: LineProblem, eps: float):
    """Test both senses of the direction at displacement eps.

    Returns (sign, phi(sign * eps)) for the first sense that strictly
    decreases the objective (positive sense tried first), or None when
    neither does.  Uses at most two evaluations.
    """
    f_plus = problem.phi(eps)
    if f_plus < problem.f0:
        return 1, f_plus
    f_minus = problem.phi(-eps)
    if f_minus < problem.f0:
        return -1, f_minus
    return None


def initial_beta(f0: float, f_eps: float, eps: float, tau_pred: float) -> float:
    """First trial displacement extrapolated from the probe slope.

    On the linear model phi(t) ~ phi(0) + s t the implied step size of a
    displacement t is tau(t) = -t / s, so t = -tau_pred * s lands it
    exactly at tau_pred, the geometric middle of the admissible window.
    Positive whenever the probe decreased (s < 0).
    """
    slope = (f_eps - f0) / eps
    return -tau_pred * slope


def expand_while_concave(phi, ts, fs, sigma: float, max_expansions: int):
    """Grow the right abscissa until the three samples sit convexly.

    While the secant slope over (t1, t2) does not exceed the one over
    (t0, t1) the samples are consistent with the objective still falling
    away, so the right endpoint grows: t2 <- t2 / sigma.  Returns the
    abscissae, their values and whether the expansion cap was hit.
    """
    t0, t1, t2 = ts
    f0, f1, f2 = fs
    capped = True
    for _ in range(max_expansions):
        # slope12 > slope01, cross-multiplied (t2 > t1 > t0)
        if (f2 - f1) * (t1 - t0) > (f1 - f0) * (t2 - t1):
            capped = False
            break
        t2 = t2 / sigma
        f2 = phi(t2)
    return (t0, t1, t2), (f0, f1, f2), capped


def parabola_vertex(t0, t1, t2, f0, f1, f2):
    """Vertex abscissa of the parabola through three samples.

    Returns None when the denominator cancels to below 1e-14 of its
    constituent terms (numerically collinear samples, no usable vertex).
    """
    a = (t1 - t0) * (f1 - f2)
    b = (t1 - t2) * (f1 - f0)
    den = a - b
    if abs(den) <= 1e-14 * (abs(a) + abs(b)):
        return None
    num = (t1 - t0) * a - (t1 - t2) * b
    return t1 - 0.5 * num / den


def _golden_probe(ts):
    """One golden-section abscissa inside the larger gap of a sorted triple."""
    a, b, c = ts
    if c - b >= b - a:
        return b + GOLDEN_STEP * (c - b)
    return b - GOLDEN_STEP * (b - a)


def parabolic_refine(phi, ts, fs, f_ref: float, max_parabolic: int):
    """Successive parabolic interpolation until a vertex decreases phi.

    Each round fits a parabola through the three working samples and
    evaluates its vertex; the first candidate with phi below ``f_ref``
    is returned as (t, phi(t)).  A degenerate vertex (collinear samples,
    nonpositive or duplicate abscissa) falls back to one golden-section
    probe into the larger gap.  Candidates that fail to decrease replace
    the worst working sample and the fit repeats, up to the cap; then
    the best decreasing sample seen is returned, or None if there was
    none at all.
    """
    pts = sorted(zip(ts, fs))
    best = None
    for t, f in pts:
        if t > 0.0 and f < f_ref and (best is None or f < best[1]):
            best = (t, f)
    for _ in range(max_parabolic):
        t_abs = [p[0] for p in pts]
        y = parabola_vertex(*t_abs, *[p[1] for p in pts])
        span = t_abs[2] - t_abs[0]
        degenerate = (
            y is None
            or not math.isfinite(y)
            or y <= 0.0
            or min(abs(y - t) for t in t_abs) <= 1e-12 * max(abs(y), span)
        )
        if degenerate:
            y = _golden_probe(t_abs)
            if y <= 0.0 or not math.isfinite(y):
                break
        fy = phi(y)
        if fy < f_ref:
            return y, fy
        worst = max(range(3), key=lambda i: pts[i][1])
        pts[worst] = (y, fy)
        pts.sort()
    return best


@dataclass
class ClampResult:
    t: float
    f_t: float
    tau: float
    status: StepStatus


def clamp_ratio(phi, t: float, f_t: float, f0: float, cfg: SolverConfig) -> ClampResult:
    """Rescale a decreasing displacement until its implied step size fits.

    tau(t) = t^2 / (f0 - phi(t)) below tau_min means the decrease is too
    steep for the displacement (the step is shorter than allowed), so
    lengthen: t <- t / sigma.  Above tau_max, or no decrease at all,
    means the step overshoots, so shorten: t <- sigma * t.  After one
    violation of each sense the admissible window is straddled and the
    remaining budget bisects the straddling pair.  If the evaluation cap
    or the underflow guard trips first, the best decreasing displacement
    seen is returned as BestEffort.
    """
    lo = None  # latest too-steep displacement (tau < tau_min)
    hi = None  # latest too-shallow or non-decreasing displacement
    best = None
    t_floor = cfg.probe_eps * 1e-6
    tau_lo = cfg.tau_min * (1.0 - TAU_REL_SLACK)
    tau_hi = cfg.tau_max * (1.0 + TAU_REL_SLACK)
    evals = 0
    while True:
        decrease = f0 - f_t
        if decrease > 0.0:
            tau = t * t / decrease
            if tau_lo <= tau <= tau_hi:
                return ClampResult(t, f_t, tau, StepStatus.ACCEPTED)
            if best is None or f_t < best[1]:
                best = (t, f_t)
            if tau < cfg.tau_min:
                lo = (t, f_t)
            else:
                hi = (t, f_t)
        else:
            hi = (t, f_t)
        if evals >= cfg.max_clamp:
            break
        if lo is not None and hi is not None:
            if hi[0] - lo[0] <= 1e-15 * abs(hi[0]):
                break  # straddling pair pinched to rounding width
            t = 0.5 * (lo[0] + hi[0])
        elif lo is not None:
            t = t / cfg.sigma
        else:
            t = cfg.sigma * t
        if not math.isfinite(t) or t < t_floor:
            break
        f_t = phi(t)
        evals += 1
    if best is None:
        return ClampResult(0.0, f0, math.nan, StepStatus.BEST_EFFORT)
    t_b, f_b = best
    return ClampResult(t_b, f_b, t_b * t_b / (f0 - f_b), StepStatus.BEST_EFFORT)


def itoh_abe_step(x, d, objective: Objective, cfg: SolverConfig, f_x: float | None = None) -> StepOutcome:
    """One discrete-gradient descent attempt along +/- d from x.

    ``f_x``, when supplied, must equal objective(x) and saves one
    evaluation; ``evals_used`` counts evaluations beyond it.  Algorithmic
    failure never raises: the outcome degrades to StationaryAlongDirection
    (no sense of the direction decreases at the probe scale) or
    BestEffort (a decrease was found but the step-size clamp could not
    finish).  Only objective errors propagate.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    if f_x is None:
        f_x = objective.eval(x)
    count0 = objective.eval_count
    problem = LineProblem(objective, x, d, f_x)

    probed = probe(problem, cfg.probe_eps)
    if probed is None:
        return StepOutcome(
            point=x.copy(), f_new=f_x, f_old=f_x, displacement_norm=0.0,
            beta=0.0, tau_implied=math.nan, status=StepStatus.STATIONARY,
            evals_used=objective.eval_count - count0,
        )
    sign, f_eps = probed

    def psi(t: float) -> float:
        return problem.phi(sign * t)

    eps = cfg.probe_eps
    delta0 = initial_beta(f_x, f_eps, eps, cfg.tau_predicted())
    if delta0 <= eps:
        ts = (0.0, 0.5 * delta0, delta0)
        fs = (f_x, psi(ts[1]), psi(ts[2]))
    else:
        ts = (0.0, eps, delta0)
        fs = (f_x, f_eps, psi(delta0))

    ts, fs, _capped = expand_while_concave(psi, ts, fs, cfg.sigma, cfg.max_expansions)
    candidate = parabolic_refine(psi, ts, fs, f_x, cfg.max_parabolic)
    if candidate is None:
        candidate = (eps, f_eps)  # the probe point always decreases
    clamped = clamp_ratio(psi, candidate[0], candidate[1], f_x, cfg)

    if clamped.t == 0.0:
        return StepOutcome(
            point=x.copy(), f_new=f_x, f_old=f_x, displacement_norm=0.0,
            beta=0.0, tau_implied=math.nan, status=StepStatus.BEST_EFFORT,
            evals_used=objective.eval_count - count0,
        )
    t, f_new = clamped.t, clamped.f_t
    return StepOutcome(
        point=x + (sign * t) * d,
        f_new=f_new,
        f_old=f_x,
        displacement_norm=t * float(np.linalg.norm(d)),
        beta=(f_x - f_new) / t,
        tau_implied=clamped.tau,
        status=clamped.status,
        evals_used=objective.eval_count - count0,
    )
