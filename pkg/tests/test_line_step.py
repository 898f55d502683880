"""Scalar step solver: probes, bracketing, refinement, step-size clamp.

Expected values come from independent oracles computed here: parabola
vertices from a least-squares quadratic fit, the pinned-step-size
quadratic answer from a bisection root solve of the implicit secant
equation, and closed forms worked out from the definitions.
"""

import math

import numpy as np
import pytest

from dgopt.core import Objective, SolverConfig, StepStatus, TAU_REL_SLACK
from dgopt.line_step import (
    LineProblem,
    clamp_ratio,
    expand_while_concave,
    initial_beta,
    itoh_abe_step,
    parabola_vertex,
    parabolic_refine,
    probe,
)
from dgopt.problems.benchmarks import max_coords, nesterov_nonsmooth, rosenbrock


def line_problem(fn, x, d, n=1):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = np.atleast_1d(np.asarray(d, dtype=float))
    obj = Objective(fn, x.size)
    return LineProblem(obj, x, d, obj.eval(x))


def fit_vertex(ts, fs):
    """Oracle: vertex of the least-squares parabola through three samples."""
    c2, c1, _ = np.polyfit(ts, fs, 2)
    return -c1 / (2.0 * c2)


class TestProbe:
    def test_keeps_descending_sense(self):
        prob = line_problem(rosenbrock, [-1.0, 1.0], [1.0, 0.0], n=2)
        sign, f_eps = probe(prob, 1e-5)
        assert sign == 1
        assert f_eps < prob.f0
        assert prob.objective.eval_count == 2  # initial value plus one probe

    def test_flips_ascending_sense(self):
        prob = line_problem(lambda x: 0.5 * float(x @ x), 1.0, 1.0)
        sign, f_eps = probe(prob, 1e-5)
        assert sign == -1
        assert f_eps < prob.f0

    def test_none_at_one_dimensional_minimum(self):
        prob = line_problem(lambda x: 0.5 * float(x @ x), 0.0, 1.0)
        before = prob.objective.eval_count
        assert probe(prob, 1e-5) is None
        assert prob.objective.eval_count - before == 2

    def test_none_on_flat_objective(self):
        prob = line_problem(lambda x: 1.0, 0.0, 1.0)
        assert probe(prob, 1e-3) is None


class TestInitialBeta:
    def test_linear_model_value(self):
        # slope -1 with tau_pred 0.1 extrapolates a displacement of 0.1
        assert initial_beta(1.0, 1.0 - 1e-5, 1e-5, 0.1) == pytest.approx(0.1, rel=1e-12)

    def test_ratio_on_exactly_linear_phi(self):
        # on a linear restriction the extrapolated displacement makes the
        # implied step size equal tau_pred exactly
        slope = -3.7
        f0 = 2.0
        eps = 1e-6
        tau_pred = math.sqrt(1e-4 * 1e2)
        delta0 = initial_beta(f0, f0 + slope * eps, eps, tau_pred)
        decrease = -slope * delta0
        assert delta0 * delta0 / decrease == pytest.approx(tau_pred, rel=1e-9)

    def test_positive_after_decreasing_probe(self):
        assert initial_beta(5.0, 4.0, 0.5, 2.0) > 0


class TestExpandWhileConcave:
    def test_convex_triple_unchanged(self):
        calls = []

        def phi(t):
            calls.append(t)
            return t * t

        ts, fs, capped = expand_while_concave(phi, (0, 1, 2), (0, 1, 4), 0.5, 60)
        assert ts == (0, 1, 2)
        assert not capped
        assert calls == []

    def test_linear_phi_hits_cap(self):
        ts, fs, capped = expand_while_concave(
            lambda t: -t, (0.0, 1.0, 2.0), (0.0, -1.0, -2.0), 0.5, 60,
        )
        assert capped
        assert ts[2] == 2.0 / 0.5 ** 60

    def test_concave_phi_expands(self):
        ts, fs, capped = expand_while_concave(
            lambda t: math.sqrt(t), (0.0, 0.25, 1.0),
            (0.0, 0.5, 1.0), 0.5, 10,
        )
        assert capped  # sqrt stays concave at every scale
        assert ts[2] == 1.0 / 0.5 ** 10


class TestParabolaVertex:
    def test_exact_on_quadratic(self):
        ts = (0.0, 0.5, 2.0)
        fs = tuple((t - 1.0) ** 2 for t in ts)
        v = parabola_vertex(*ts, *fs)
        assert v == pytest.approx(1.0, abs=1e-12)
        assert v == pytest.approx(fit_vertex(ts, fs), abs=1e-9)

    def test_symmetric_samples_give_midpoint(self):
        # t^4 - t sampled at (0, 0.5, 1) has equal end values, so the
        # interpolating parabola is symmetric about the middle abscissa
        ts = (0.0, 0.5, 1.0)
        fs = tuple(t ** 4 - t for t in ts)
        assert fs == (0.0, -0.4375, 0.0)
        v = parabola_vertex(*ts, *fs)
        assert v == pytest.approx(0.5, abs=1e-12)
        assert v == pytest.approx(fit_vertex(ts, fs), abs=1e-9)

    def test_collinear_samples_degenerate(self):
        assert parabola_vertex(0.0, 1.0, 2.0, 0.0, 2.0, 4.0) is None

    def test_equal_values_degenerate(self):
        assert parabola_vertex(0.0, 1.0, 2.0, 3.0, 3.0, 3.0) is None


class TestParabolicRefine:
    def test_returns_first_decreasing_vertex(self):
        calls = []

        def phi(t):
            calls.append(t)
            return (t - 1.0) ** 2

        ts = (0.0, 0.5, 2.0)
        fs = tuple((t - 1.0) ** 2 for t in ts)
        t, ft = parabolic_refine(phi, ts, fs, f_ref=1.0, max_parabolic=100)
        assert t == pytest.approx(1.0, abs=1e-12)
        assert ft == pytest.approx(0.0, abs=1e-12)
        assert len(calls) == 1

    def test_golden_fallback_on_collinear_samples(self):
        # linear phi keeps every fit degenerate; golden probes still find
        # decreasing abscissae
        t, ft = parabolic_refine(lambda t: -t, (0.0, 1.0, 2.0),
                                 (0.0, -1.0, -2.0), f_ref=0.0, max_parabolic=100)
        assert ft < 0.0
        assert t > 0.0

    def test_none_when_nothing_decreases(self):
        # upward parabola with f_ref below its minimum: no decrease exists
        result = parabolic_refine(lambda t: (t - 1.0) ** 2 + 5.0,
                                  (0.0, 1.0, 2.0), (6.0, 5.0, 6.0),
                                  f_ref=1.0, max_parabolic=20)
        assert result is None


class TestClampRatio:
    def test_accepts_in_window_without_evals(self):
        calls = []

        def phi(t):
            calls.append(t)
            return 0.5 * (1.0 - t) ** 2

        cfg = SolverConfig(tau_min=1e-4, tau_max=1e2)
        f_half = phi(0.5)
        calls.clear()
        res = clamp_ratio(phi, 0.5, f_half, 0.5, cfg)
        assert res.status is StepStatus.ACCEPTED
        assert calls == []
        assert cfg.tau_min <= res.tau <= cfg.tau_max

    def test_cap_gives_best_effort_decrease(self):
        cfg = SolverConfig(tau_min=1e-6, tau_max=2e-6, max_clamp=1)
        phi = lambda t: 0.5 * (1.0 - t) ** 2 - 0.5
        res = clamp_ratio(phi, 1.0, phi(1.0), 0.0, cfg)
        assert res.status is StepStatus.BEST_EFFORT
        assert res.f_t < 0.0  # still a strict decrease

    def test_underflow_guard_gives_best_effort(self):
        cfg = SolverConfig(tau_min=1e-30, tau_max=2e-30, probe_eps=1e-5)
        res = clamp_ratio(lambda t: -t, 1.0, -1.0, 0.0, cfg)
        assert res.status is StepStatus.BEST_EFFORT
        assert res.f_t <= -1.0

    def test_degenerate_window_bisects_to_root(self):
        # implied step size pinned to 1: the only admissible displacement
        # on phi(t) = 0.5 (1 - t)^2 - 0.5 solves t^2/(t - t^2/2) = 1, t = 2/3
        cfg = SolverConfig(tau_min=1.0, tau_max=1.0)
        phi = lambda t: 0.5 * (1.0 - t) ** 2 - 0.5
        res = clamp_ratio(phi, 1.0, phi(1.0), 0.0, cfg)
        assert res.status is StepStatus.ACCEPTED
        assert res.t == pytest.approx(2.0 / 3.0, abs=1e-6)


def bisect_pinned_step(fn, x, tau, lo, hi, iters=200):
    """Oracle: solve (fn(y) - fn(x)) + (y - x)^2 / tau = 0 for y by bisection."""
    g = lambda y: (fn(y) - fn(x)) + (y - x) ** 2 / tau
    assert g(lo) * g(hi) < 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if g(lo) * g(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


class TestItohAbeStep:
    def test_pinned_step_size_matches_root_oracle(self):
        # V(x) = x^2/2 from x = 1 with tau pinned to 1; the implicit
        # secant equation has the unique root y = 1/3 on (-1, 1)
        fn = lambda x: 0.5 * float(x[0]) ** 2
        oracle = bisect_pinned_step(lambda y: 0.5 * y * y, 1.0, 1.0, -0.999, 0.999)
        assert oracle == pytest.approx(1.0 / 3.0, abs=1e-12)
        obj = Objective(fn, 1)
        out = itoh_abe_step(np.array([1.0]), np.array([-1.0]), obj,
                            SolverConfig(tau_min=1.0, tau_max=1.0))
        assert out.status is StepStatus.ACCEPTED
        assert out.point[0] == pytest.approx(oracle, abs=1e-6)
        assert out.tau_implied == pytest.approx(1.0, rel=2e-9)

    def test_stationary_at_minimum(self):
        obj = Objective(rosenbrock, 2)
        out = itoh_abe_step(np.array([1.0, 1.0]), np.array([0.6, 0.8]), obj,
                            SolverConfig())
        assert out.status is StepStatus.STATIONARY
        assert np.array_equal(out.point, [1.0, 1.0])
        assert out.f_new == out.f_old
        assert out.evals_used <= 2
        assert math.isnan(out.tau_implied)

    def test_linear_direction_is_accepted_despite_expansion_cap(self):
        # max(x, y) falls linearly along (-1, -1)/sqrt(2): the concavity
        # expansion caps out, yet the clamp still lands in the window
        obj = Objective(max_coords, 2)
        d = np.array([-1.0, -1.0]) / math.sqrt(2.0)
        out = itoh_abe_step(np.array([1.0, 1.0]), d, obj, SolverConfig())
        assert out.status is StepStatus.ACCEPTED
        assert out.f_new < out.f_old

    def test_supplied_value_saves_one_eval(self):
        x = np.array([-1.0, 1.0])
        obj_a = Objective(rosenbrock, 2)
        out_a = itoh_abe_step(x, np.array([1.0, 0.0]), obj_a, SolverConfig())
        obj_b = Objective(rosenbrock, 2)
        out_b = itoh_abe_step(x, np.array([1.0, 0.0]), obj_b, SolverConfig(),
                              f_x=rosenbrock(x))
        assert np.array_equal(out_a.point, out_b.point)
        assert obj_a.eval_count == obj_b.eval_count + 1
        assert out_a.evals_used == out_b.evals_used

    def test_evals_used_matches_counter_delta(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            obj = Objective(nesterov_nonsmooth, 2)
            x = rng.uniform(-2, 2, size=2)
            d = rng.standard_normal(2)
            d /= np.linalg.norm(d)
            f_x = obj.eval(x)
            before = obj.eval_count
            out = itoh_abe_step(x, d, obj, SolverConfig(), f_x=f_x)
            assert out.evals_used == obj.eval_count - before


@pytest.mark.parametrize("fn,n", [(rosenbrock, 2), (nesterov_nonsmooth, 2)])
def test_step_properties_random_instances(fn, n):
    """Decrease identity, step-size containment and monotonicity."""
    rng = np.random.default_rng(314)
    cfg = SolverConfig()
    tau_lo = cfg.tau_min * (1.0 - TAU_REL_SLACK)
    tau_hi = cfg.tau_max * (1.0 + TAU_REL_SLACK)
    accepted = 0
    for _ in range(150):
        obj = Objective(fn, n)
        x = rng.uniform(-2.0, 2.0, size=n)
        d = rng.standard_normal(n)
        d /= np.linalg.norm(d)
        out = itoh_abe_step(x, d, obj, cfg)
        assert out.f_new <= out.f_old
        assert np.all(np.isfinite(out.point))
        if out.status is StepStatus.ACCEPTED:
            accepted += 1
            lhs = (out.f_old - out.f_new) * out.tau_implied
            rhs = out.displacement_norm ** 2
            assert lhs == pytest.approx(rhs, rel=1e-9)
            assert tau_lo <= out.tau_implied <= tau_hi
            assert out.beta == pytest.approx(
                (out.f_old - out.f_new) / (out.displacement_norm), rel=1e-9
            )
    assert accepted > 100  # most random directions from random points descend
