"""Self-check suites behind ``dgopt check``.

Each suite returns (name, passed, detail) tuples; the CLI prints one
line per check and fails if any check fails.  These are smoke-level
diagnostics runnable on any installation, not the full test suite.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Objective, SolverConfig, StepStatus
from .directions import RandomPursuit
from .discrete_gradient import RotatedFrame, itoh_abe_dg, rotated_itoh_abe_dg
from .line_step import itoh_abe_step
from .optimizer import run
from .problems.benchmarks import rosenbrock
from .problems.images import ImageGrid, synthetic_pair
from .problems.metrics import ssim
from .problems.tv import tv_denoise_pdhg
from .problems.wavelet import haar_dwt, haar_idwt, wavelet_denoise


def _check_dg():
    rng = np.random.default_rng(20240601)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        a = rng.standard_normal((n, n))
        quad = a @ a.T + np.eye(n)
        b = rng.standard_normal(n)

        def fn(z, quad=quad, b=b):
            return 0.5 * z @ quad @ z + b @ z

        x = rng.standard_normal(n)
        y = x + rng.standard_normal(n)
        g = itoh_abe_dg(fn, x, y)
        lhs = g @ (y - x)
        rhs = fn(y) - fn(x)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    yield "dg mean-value identity, 100 random quadratics", worst <= 1e-9, f"worst rel err {worst:.2e}"

    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 5))
        q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        frame = RotatedFrame(q)

        def fn(z):
            return float(np.abs(z).sum() + 0.5 * z @ z)

        x = rng.standard_normal(n)
        y = x + rng.standard_normal(n)
        g = rotated_itoh_abe_dg(fn, x, y, frame)
        lhs = g @ (y - x)
        rhs = fn(y) - fn(x)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    yield "rotated dg mean-value identity, 50 nonsmooth instances", worst <= 1e-9, f"worst rel err {worst:.2e}"


def _check_step():
    quad = Objective(lambda z: 0.5 * z @ z, 1)
    cfg = SolverConfig(tau_min=1.0, tau_max=1.0, probe_eps=1e-5)
    out = itoh_abe_step(np.array([1.0]), np.array([-1.0]), quad, cfg)
    err = abs(out.point[0] - 1.0 / 3.0)
    yield (
        "scalar oracle: quadratic with pinned step size lands at 1/3",
        out.status is StepStatus.ACCEPTED and err <= 1e-6,
        f"status {out.status.value}, |y - 1/3| = {err:.2e}",
    )

    obj = Objective(rosenbrock, 2)
    result = run(
        obj, np.array([-1.0, 1.0]), RandomPursuit(2, seed=7),
        SolverConfig(max_iters=300, max_stall=30),
    )
    worst = 0.0
    f_prev = result.initial_value
    monotone = True
    for rec in result.trace:
        if rec.f_value > f_prev:
            monotone = False
        if rec.status is StepStatus.ACCEPTED:
            lhs = (f_prev - rec.f_value) * rec.tau_implied
            rhs = rec.step_norm ** 2
            worst = max(worst, abs(lhs - rhs) / max(rhs, 1e-300))
        f_prev = rec.f_value
    yield "decrease identity on accepted steps", worst <= 1e-9, f"worst rel err {worst:.2e}"
    yield "trace is non-increasing", monotone, f"final f {result.final_value:.3e}"


def _check_bilevel():
    two = ImageGrid(np.array([[0.0, 2.0]]))
    u = tv_denoise_pdhg(two, alpha=0.5, iters=300).pixels
    err = max(abs(u[0, 0] - 0.5), abs(u[0, 1] - 1.5))
    yield "two-pixel tv oracle (0.5, 1.5)", err <= 1e-4, f"max err {err:.2e}"

    clean, noisy = synthetic_pair(seed=3)
    coeffs = haar_dwt(noisy, 3)
    parseval = abs(np.linalg.norm(coeffs) - np.linalg.norm(noisy.pixels))
    yield "haar transform preserves norm", parseval <= 1e-9, f"defect {parseval:.2e}"

    back = haar_idwt(coeffs, 3).pixels
    roundtrip = np.abs(back - noisy.pixels).max()
    yield "haar roundtrip is exact", roundtrip <= 1e-12, f"max err {roundtrip:.2e}"

    ident = wavelet_denoise(noisy, 0.0).pixels
    alpha_zero = np.abs(ident - noisy.pixels).max()
    yield "zero threshold returns the input", alpha_zero <= 1e-12, f"max err {alpha_zero:.2e}"

    s = float(ssim(clean, clean))
    yield "ssim of an image with itself is 1", abs(s - 1.0) <= 1e-12, f"ssim {s!r}"


SUITES = {
    "dg": _check_dg,
    "step": _check_step,
    "bilevel": _check_bilevel,
}


def run_suite(suite: str):
    """Run one suite (or all); returns a list of (name, passed, detail)."""
    names = list(SUITES) if suite == "all" else [suite]
    results = []
    for name in names:
        for check in SUITES[name]():
            results.append(check)
    return results
