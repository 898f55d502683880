"""Learning a scalar regularisation weight by derivative-free descent.

The inner problem maps a noisy image and a weight alpha to a denoised
image (Haar soft-thresholding or TV via the primal-dual solver); the
outer objective scores that reconstruction against the ground truth,
either by half squared distance or by structural dissimilarity
1 - SSIM.  The outer variable is a = log(alpha): the positivity
constraint disappears and the search is unconstrained in one variable.
Both inner solvers are deterministic, so the outer objective is a
plain black-box function fit for the descent loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..core import ConfigError, Objective
from .images import ImageGrid
from .metrics import l2_error, ssim
from .tv import tv_denoise_pdhg
from .wavelet import wavelet_denoise

INNER_SOLVERS = ("wavelet", "tv")
SCORES = ("l2", "ssim")


@dataclass
class BilevelProblem:
    """Ground truth, corrupted observation and the inner solver choice."""

    clean: ImageGrid
    noisy: ImageGrid
    inner: str = "wavelet"
    score: str = "l2"
    levels: int = 3
    pdhg_iters: int = 300
    threshold_approx: bool = False

    def __post_init__(self):
        if self.inner not in INNER_SOLVERS:
            raise ConfigError(f"inner must be one of {INNER_SOLVERS}, got {self.inner!r}")
        if self.score not in SCORES:
            raise ConfigError(f"score must be one of {SCORES}, got {self.score!r}")
        if self.clean.pixels.shape != self.noisy.pixels.shape:
            raise ConfigError(
                f"clean shape {self.clean.pixels.shape} != noisy shape "
                f"{self.noisy.pixels.shape}"
            )

    def denoise(self, alpha: float) -> ImageGrid:
        if self.inner == "wavelet":
            return wavelet_denoise(
                self.noisy, alpha, levels=self.levels,
                threshold_approx=self.threshold_approx,
            )
        return tv_denoise_pdhg(self.noisy, alpha, iters=self.pdhg_iters)

    def score_image(self, u: ImageGrid) -> float:
        if self.score == "l2":
            return l2_error(u, self.clean)
        return 1.0 - ssim(u, self.clean)

    def value(self, log_alpha: float) -> float:
        return self.score_image(self.denoise(math.exp(log_alpha)))


def bilevel_objective(problem: BilevelProblem) -> Objective:
    """Counting objective over the 1-D log-weight variable."""
    return Objective(
        lambda a: problem.value(float(a[0])),
        dimension=1,
        name=f"bilevel-{problem.inner}-{problem.score}",
    )
