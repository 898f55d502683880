"""Benchmark objectives and the image-denoising bilevel application."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import ConfigError, Objective
from .benchmarks import max_coords, narrow_descent, nesterov_nonsmooth, rosenbrock
from .bilevel import BilevelProblem, bilevel_objective
from .images import ImageGrid, read_pgm, synthetic_pair, write_pgm
from .metrics import l2_error, ssim
from .tv import rof_objective, tv_denoise_pdhg, tv_value
from .wavelet import haar_dwt, haar_idwt, shrink, wavelet_denoise

PROBLEM_NAMES = ("rosenbrock", "nesterov", "narrow", "bilevel-wavelet", "bilevel-tv")


@dataclass
class ProblemSetup:
    """Everything the CLI needs to run one named problem."""

    name: str
    objective_factory: object  # () -> Objective
    dimension: int
    default_x0: np.ndarray
    v_star: float | None  # known optimal value, for relative-error reporting


def get_problem(
    name: str,
    weight: float = 10.0,
    score: str = "l2",
    levels: int = 3,
    pdhg_iters: int = 300,
    threshold_approx: bool = False,
    image: str = "synthetic",
    image_seed: int = 0,
    noise_sigma: float = 0.1,
    clean_image: str | None = None,
) -> ProblemSetup:
    """Build a named problem; raises :class:`ConfigError` on a bad name.

    For the bilevel problems ``image`` is either "synthetic" (a seeded
    piecewise-constant test pair) or a path to a noisy PGM file, in
    which case ``clean_image`` must point to the ground-truth PGM.
    """
    if name == "rosenbrock":
        return ProblemSetup(
            name, lambda: Objective(rosenbrock, 2, name=name), 2,
            np.array([-1.0, 1.0]), 0.0,
        )
    if name == "nesterov":
        return ProblemSetup(
            name, lambda: Objective(nesterov_nonsmooth, 2, name=name), 2,
            np.array([-1.0, -1.0]), 0.0,
        )
    if name == "narrow":
        return ProblemSetup(
            name, lambda: Objective(lambda x: narrow_descent(x, weight), 2, name=name),
            2, np.array([1.0, 1.0]), 0.0,
        )
    if name == "max-coords":
        return ProblemSetup(
            name, lambda: Objective(max_coords, 2, name=name), 2,
            np.array([1.0, 1.0]), None,
        )
    if name in ("bilevel-wavelet", "bilevel-tv"):
        if image == "synthetic":
            clean, noisy = synthetic_pair(seed=image_seed, noise_sigma=noise_sigma)
        else:
            if clean_image is None:
                raise ConfigError(
                    "image: a PGM path needs clean_image set to the ground-truth PGM"
                )
            clean, noisy = read_pgm(clean_image), read_pgm(image)
        problem = BilevelProblem(
            clean=clean, noisy=noisy,
            inner="wavelet" if name == "bilevel-wavelet" else "tv",
            score=score, levels=levels, pdhg_iters=pdhg_iters,
            threshold_approx=threshold_approx,
        )
        return ProblemSetup(
            name, lambda: bilevel_objective(problem), 1, np.array([0.0]), None,
        )
    raise ConfigError(
        f"unknown problem {name!r}, expected one of {PROBLEM_NAMES}"
    )
