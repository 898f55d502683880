"""Derivative-free descent with discrete-gradient line steps.

Minimises locally Lipschitz objectives without gradients by solving, at
every iteration, a scalar secant equation along one search direction:
the accepted displacement t along direction d satisfies

    V(x) - V(x + t d) = t^2 / tau

for an implied step size tau inside a configured interval, which makes
the per-step decrease identity exact by construction.  Direction
sequences range from deterministic coordinate cycling to uniformly
random directions and randomly rotated orthonormal blocks.
"""

from .core import (
    ConfigError,
    NonFiniteObjectiveError,
    Objective,
    RunResult,
    SolverConfig,
    StepOutcome,
    StepStatus,
    StopReason,
    TraceRecord,
    validate_config,
    wrap_counting,
)
from .directions import (
    CyclicCoordinates,
    DeterministicDense2D,
    DirectionStrategy,
    RandomPursuit,
    RotatedBlocks,
    make_strategy,
    random_orthogonal,
    uniform_sphere,
)
from .discrete_gradient import RotatedFrame, itoh_abe_dg, rotated_itoh_abe_dg
from .line_step import itoh_abe_step
from .optimizer import EnsembleRun, run, run_ensemble

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CyclicCoordinates",
    "DeterministicDense2D",
    "DirectionStrategy",
    "EnsembleRun",
    "NonFiniteObjectiveError",
    "Objective",
    "RandomPursuit",
    "RotatedBlocks",
    "RotatedFrame",
    "RunResult",
    "SolverConfig",
    "StepOutcome",
    "StepStatus",
    "StopReason",
    "TraceRecord",
    "itoh_abe_dg",
    "itoh_abe_step",
    "make_strategy",
    "random_orthogonal",
    "rotated_itoh_abe_dg",
    "run",
    "run_ensemble",
    "uniform_sphere",
    "validate_config",
    "wrap_counting",
]
