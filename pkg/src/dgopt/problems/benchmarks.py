"""Small 2-D test objectives, smooth and nonsmooth.

The nonsmooth ones are the interesting stress cases: ``nesterov_nonsmooth``
has a kinked valley that defeats coordinate-wise search while remaining
tractable for dense direction sets, ``narrow_descent`` squeezes the
descent cone near the axes, and ``max_coords`` is nonsmooth, non-coercive
and stalls every coordinate direction at any point with equal entries.
"""

from __future__ import annotations

import numpy as np


def rosenbrock(x) -> float:
    """(1 - x)^2 + 100 (y - x^2)^2, minimum 0 at (1, 1)."""
    a, b = float(x[0]), float(x[1])
    return (1.0 - a) ** 2 + 100.0 * (b - a * a) ** 2


def nesterov_nonsmooth(x) -> float:
    """Nonsmooth Chebyshev-Rosenbrock variant 0.25|x - 1| + |y - 2|x| + 1|.

    Minimum 0 at (1, 1); the point (0, -1) is stationary but not
    minimising, with value 0.25.
    """
    a, b = float(x[0]), float(x[1])
    return 0.25 * abs(a - 1.0) + abs(b - 2.0 * abs(a) + 1.0)


def narrow_descent(x, weight: float = 10.0) -> float:
    """|x1| + weight * |x2|: a weighted corner whose descent cone at
    points with small |x2| narrows as the weight grows."""
    return abs(float(x[0])) + weight * abs(float(x[1]))


def max_coords(x) -> float:
    """max(x, y): nonsmooth, non-coercive, unbounded below.

    At any point with x == y neither coordinate direction descends (one
    sense raises the max, the other leaves it unchanged), yet almost
    every non-axis direction does; useful only for single-step
    diagnostics, not full runs.
    """
    return max(float(x[0]), float(x[1]))
