"""Outer descent loop: repeated scalar line steps along generated directions.

The loop is direction-agnostic: it asks a strategy for direction k,
delegates the whole step to the scalar solver, and applies a stall rule
on the per-iteration decrease.  Objective values along the trace are
non-increasing by construction because the scalar solver never returns
an increase.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import (
    ConfigError,
    NonFiniteObjectiveError,
    Objective,
    RunResult,
    SolverConfig,
    StopReason,
    TraceRecord,
    validate_config,
)
from .directions import DirectionStrategy, make_strategy
from .line_step import itoh_abe_step


def run(
    objective: Objective,
    x0,
    strategy: DirectionStrategy,
    cfg: SolverConfig,
    eval_budget: int | None = None,
    wall_time_limit: float | None = None,
) -> RunResult:
    """Minimise by repeated directional steps until stall, cap or budget.

    Stall rule: a counter m increases on every iteration whose decrease
    is at most eta (stationary directions included) and resets on any
    larger decrease; the run stops with StallLimit once m reaches
    max_stall (defaulting to the problem dimension).  Otherwise the run
    ends at max_iters iterations (MaxIters) or when the optional
    evaluation / wall-clock budget is exhausted (UserBudget).

    Iterations that do not move still append a trace record, so the
    trace has exactly one record per iteration.  On a non-finite
    objective value the error propagates with the partial trace attached
    as ``err.partial_trace``.
    """
    validate_config(cfg)
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (objective.dimension,):
        raise ConfigError(
            f"x0 has shape {x.shape}, objective expects ({objective.dimension},)"
        )
    if strategy.n != objective.dimension:
        raise ConfigError(
            f"strategy dimension {strategy.n} != objective dimension "
            f"{objective.dimension}"
        )
    max_stall = cfg.max_stall if cfg.max_stall is not None else objective.dimension
    started = time.monotonic()

    trace: list[TraceRecord] = []
    stall = 0
    reason = StopReason.MAX_ITERS
    try:
        f = objective.eval(x)
        f_initial = f
        for k in range(cfg.max_iters):
            d = strategy.direction(k)
            outcome = itoh_abe_step(x, d, objective, cfg, f_x=f)
            trace.append(TraceRecord(
                iteration=k,
                cumulative_evals=objective.eval_count,
                f_value=outcome.f_new,
                step_norm=outcome.displacement_norm,
                tau_implied=outcome.tau_implied,
                status=outcome.status,
                direction_index=strategy.direction_index(k),
            ))
            decrease = f - outcome.f_new
            x = outcome.point
            f = outcome.f_new
            stall = stall + 1 if decrease <= cfg.eta else 0
            if stall >= max_stall:
                reason = StopReason.STALL_LIMIT
                break
            if eval_budget is not None and objective.eval_count >= eval_budget:
                reason = StopReason.USER_BUDGET
                break
            if wall_time_limit is not None and time.monotonic() - started >= wall_time_limit:
                reason = StopReason.USER_BUDGET
                break
    except NonFiniteObjectiveError as err:
        err.partial_trace = trace
        err.partial_point = x
        raise
    result = RunResult(
        final_point=x,
        final_value=f,
        iterations=len(trace),
        total_evals=objective.eval_count,
        stop_reason=reason,
        trace=trace,
    )
    result.initial_value = f_initial
    return result


@dataclass
class EnsembleRun:
    """One (strategy, seed) cell of an ensemble; ``result`` is the
    RunResult, or the exception that aborted this run."""

    strategy: str
    seed: int
    result: object

    @property
    def ok(self) -> bool:
        return isinstance(self.result, RunResult)


def run_ensemble(
    objective_factory,
    x0,
    strategies,
    cfg: SolverConfig,
    seeds,
    eval_budget: int | None = None,
) -> list[EnsembleRun]:
    """Independent runs over the cross product of strategies and seeds.

    ``strategies`` holds kind names or strategy instances; each run gets
    a fresh objective from the factory and a strategy reseeded with that
    run's seed, so results do not depend on execution order.  A failing
    objective aborts only its own run; the exception is stored in that
    cell and the remaining runs complete.
    """
    seeds = list(seeds)
    if not seeds:
        raise ConfigError("seeds must be a non-empty list")
    n = len(np.asarray(x0, dtype=float))
    cells = []
    for strat in strategies:
        for seed in seeds:
            if isinstance(strat, str):
                instance = make_strategy(strat, n, seed)
                kind = strat
            else:
                instance = strat.reseeded(seed)
                kind = instance.kind
            objective = objective_factory()
            try:
                result = run(objective, x0, instance,
                             cfg.with_overrides(seed=seed), eval_budget=eval_budget)
            except NonFiniteObjectiveError as err:
                result = err
            cells.append(EnsembleRun(strategy=kind, seed=seed, result=result))
    return cells


def relative_trajectory(result: RunResult, v_star: float | None):
    """(cumulative_evals, relative objective) pairs for convergence plots.

    With a known optimal value the objective is normalised to start at
    1.0; without one the raw objective is reported.  The first pair is
    the state right after the initial evaluation.
    """
    f0 = getattr(result, "initial_value", None)
    if f0 is None:
        f0 = result.trace[0].f_value if result.trace else result.final_value
    rows = [(1, 1.0 if v_star is not None else f0)]
    for rec in result.trace:
        if v_star is not None and f0 - v_star > 0:
            rel = (rec.f_value - v_star) / (f0 - v_star)
        else:
            rel = rec.f_value
        rows.append((rec.cumulative_evals, rel))
    return rows
