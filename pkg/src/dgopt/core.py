"""Shared types for the discrete-gradient descent solver.

The solver only ever sees an objective through :class:`Objective`, a thin
counting wrapper around a plain callable.  Everything the inner scalar
solver and the outer loop need to agree on (step-size interval, probe
scale, stall rule, iteration caps) lives in :class:`SolverConfig`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np


class ConfigError(ValueError):
    """Invalid solver or problem configuration.  Message names the field."""


class NonFiniteObjectiveError(ArithmeticError):
    """The objective returned NaN or +/-inf at some query point."""


class Objective:
    """Callable objective with an evaluation counter.

    Wraps ``fn: R^dimension -> R``.  Every call increments ``eval_count``
    by exactly one; a non-finite value raises
    :class:`NonFiniteObjectiveError` (the call is still counted).
    """

    def __init__(self, fn, dimension: int, name: str = ""):
        if dimension < 1:
            raise ConfigError(f"dimension must be >= 1, got {dimension}")
        self._fn = fn
        self.dimension = int(dimension)
        self.name = name
        self.eval_count = 0

    def eval(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(
                f"point has shape {x.shape}, expected ({self.dimension},)"
            )
        self.eval_count += 1
        value = float(self._fn(x))
        if not math.isfinite(value):
            raise NonFiniteObjectiveError(
                f"objective {self.name or '<anonymous>'} returned {value!r} "
                f"at x={x.tolist()}"
            )
        return value

    __call__ = eval

    def reset_count(self) -> None:
        self.eval_count = 0


def wrap_counting(fn, dimension: int, name: str = "") -> Objective:
    """Wrap a plain callable as a counting :class:`Objective`."""
    return Objective(fn, dimension, name=name)


class StepStatus(Enum):
    """Outcome classification of one directional step."""

    ACCEPTED = "Accepted"
    STATIONARY = "StationaryAlongDirection"
    BEST_EFFORT = "BestEffort"


class StopReason(Enum):
    """Why the outer loop terminated."""

    MAX_ITERS = "MaxIters"
    STALL_LIMIT = "StallLimit"
    USER_BUDGET = "UserBudget"


# Accepted steps must land the implied step size inside [tau_min, tau_max].
# The interval may be degenerate (tau_min == tau_max); no float abscissa
# then hits it exactly, so containment carries this relative slack.
TAU_REL_SLACK = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the scalar step solver and the outer loop.

    ``max_stall`` left as None means "use the problem dimension".
    ``seed`` feeds the direction strategy when one is built from this
    config; the solver itself draws no randomness.
    """

    tau_min: float = 1e-4
    tau_max: float = 1e2
    probe_eps: float = 1e-5
    eta: float = 1e-9
    max_stall: int | None = None
    max_iters: int = 10_000
    sigma: float = 0.5
    seed: int = 0
    max_expansions: int = 60
    max_parabolic: int = 100
    max_clamp: int = 200

    def tau_predicted(self) -> float:
        """Geometric midpoint of the admissible step-size interval."""
        return math.sqrt(self.tau_min * self.tau_max)

    def with_overrides(self, **kwargs) -> "SolverConfig":
        return replace(self, **kwargs)


def validate_config(cfg: SolverConfig) -> SolverConfig:
    """Check field ranges; raise :class:`ConfigError` naming the offender.

    A degenerate interval tau_min == tau_max is legal; only an inverted
    one is rejected.
    """
    def positive(name, value):
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ConfigError(f"{name} must be a positive finite number, got {value!r}")

    positive("tau_min", cfg.tau_min)
    positive("tau_max", cfg.tau_max)
    if cfg.tau_min > cfg.tau_max:
        raise ConfigError(
            f"tau_min must not exceed tau_max, got tau_min={cfg.tau_min} "
            f"tau_max={cfg.tau_max}"
        )
    positive("probe_eps", cfg.probe_eps)
    if not (isinstance(cfg.eta, (int, float)) and math.isfinite(cfg.eta) and cfg.eta >= 0):
        raise ConfigError(f"eta must be a nonnegative finite number, got {cfg.eta!r}")
    if cfg.max_stall is not None and cfg.max_stall < 1:
        raise ConfigError(f"max_stall must be >= 1, got {cfg.max_stall}")
    if cfg.max_iters < 1:
        raise ConfigError(f"max_iters must be >= 1, got {cfg.max_iters}")
    if not (0.0 < cfg.sigma < 1.0):
        raise ConfigError(f"sigma must lie in (0, 1), got {cfg.sigma}")
    if cfg.seed < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {cfg.seed}")
    for cap_name in ("max_expansions", "max_parabolic", "max_clamp"):
        cap = getattr(cfg, cap_name)
        if cap < 1:
            raise ConfigError(f"{cap_name} must be >= 1, got {cap}")
    return cfg


@dataclass
class StepOutcome:
    """Result of one directional step from a single point.

    ``tau_implied`` is ||dx||^2 / (f_old - f_new) when the step moved and
    decreased the objective, NaN otherwise.  For ACCEPTED steps it lies in
    [tau_min, tau_max] (up to TAU_REL_SLACK); BEST_EFFORT steps decrease
    the objective but may fall outside that interval; STATIONARY steps do
    not move at all.
    """

    point: np.ndarray
    f_new: float
    f_old: float
    displacement_norm: float
    beta: float
    tau_implied: float
    status: StepStatus
    evals_used: int


@dataclass
class TraceRecord:
    """One outer-iteration row of a run trace."""

    iteration: int
    cumulative_evals: int
    f_value: float
    step_norm: float
    tau_implied: float
    status: StepStatus
    direction_index: int


@dataclass
class RunResult:
    """Final state plus the full per-iteration trace of one run."""

    final_point: np.ndarray
    final_value: float
    iterations: int
    total_evals: int
    stop_reason: StopReason
    trace: list[TraceRecord] = field(default_factory=list)
