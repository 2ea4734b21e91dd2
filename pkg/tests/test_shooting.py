import math

import numpy as np
import pytest

from robinext.besselref import lambda1_ball_p2
from robinext.core import (
    NoNegativeEigenvalue,
    ProblemParams,
    decay_rate,
    lambda1_halfline,
)
from robinext.shooting import (
    ShotClass,
    SolverOptions,
    TerminationCause,
    classify_shot,
    effective_robin_ratio,
    eigenfunction_from_g,
    g_rhs,
    integrate_g,
    solve_lambda1_ball,
)

P2N3 = ProblemParams(p=2.0, n=3, alpha=-2.0, R=1.0)  # exact lambda1 = -1


def test_g_rhs_equilibrium():
    # At n = 1 the constant g = |alpha|^(1/(p-1)) with lam = halfline value is
    # an exact equilibrium of the Riccati equation.
    for p, alpha in ((2.0, -2.0), (3.0, -1.5)):
        g0 = abs(alpha) ** (1.0 / (p - 1.0))
        lam = lambda1_halfline(alpha, p)
        assert g_rhs(5.0, g0, lam, p, 1) == pytest.approx(0.0, abs=1e-13)


def test_g_rhs_domain():
    with pytest.raises(ValueError):
        g_rhs(1.0, 0.0, -1.0, 2.0, 3)
    with pytest.raises(ValueError):
        g_rhs(0.0, 1.0, -1.0, 2.0, 3)


class TestIntegrateG:
    def test_boundary_value(self):
        traj = integrate_g(-1.5, P2N3)
        assert traj.g_values[0] == 2.0  # |alpha|^(1/(p-1))
        assert traj.radii[0] == 1.0

    def test_low_lambda_crosses_floor(self):
        # lambda far below the eigenvalue: g dives through the far-field level.
        traj = integrate_g(-3.5, P2N3)
        assert traj.terminated_at == TerminationCause.G_CROSSED_FLOOR
        assert classify_shot(traj, -3.5, 2.0) == ShotClass.TOO_LOW

    def test_high_lambda_blows_up(self):
        # lambda above the eigenvalue: g turns around and blows up.
        traj = integrate_g(-0.25, P2N3)
        assert traj.terminated_at == TerminationCause.G_BLEW_UP
        assert classify_shot(traj, -0.25, 2.0) == ShotClass.TOO_HIGH

    def test_radii_strictly_increasing(self):
        for lam in (-3.5, -1.0001, -0.25):
            traj = integrate_g(lam, P2N3)
            assert np.all(np.diff(traj.radii) > 0)

    def test_g_at_interpolates(self):
        traj = integrate_g(-3.5, P2N3)
        mid = 0.5 * (traj.radii[0] + traj.radii[-1])
        assert traj.g_values.min() <= traj.g_at(mid) <= traj.g_values.max()
        with pytest.raises(ValueError):
            traj.g_at(traj.radii[-1] + 1.0)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            integrate_g(0.5, P2N3)
        with pytest.raises(ValueError):
            integrate_g(-1.0, ProblemParams(p=2.0, n=3, alpha=0.5))


class TestSolve:
    def test_p2_n3_closed_form(self):
        res = solve_lambda1_ball(P2N3)
        assert res.lambda1 == pytest.approx(-1.0, rel=1e-8)
        assert res.bracket.lo <= res.lambda1 <= res.bracket.hi
        assert res.iterations > 0

    def test_p2_n2_bessel(self):
        res = solve_lambda1_ball(ProblemParams(p=2.0, n=2, alpha=-1.0))
        assert res.lambda1 == pytest.approx(
            lambda1_ball_p2(2, 1.0, -1.0), rel=1e-6
        )

    def test_above_halfline_floor(self):
        for p, n, alpha in ((2.0, 3, -2.0), (3.0, 2, -1.0), (1.5, 2, -2.0)):
            res = solve_lambda1_ball(ProblemParams(p=p, n=n, alpha=alpha))
            assert res.lambda1 > lambda1_halfline(alpha, p)

    def test_threshold_refusal(self):
        with pytest.raises(NoNegativeEigenvalue):
            solve_lambda1_ball(ProblemParams(p=2.0, n=3, alpha=-1.0))
        with pytest.raises(NoNegativeEigenvalue):
            solve_lambda1_ball(ProblemParams(p=2.0, n=2, alpha=0.0))

    def test_trajectory_structure(self):
        res = solve_lambda1_ball(P2N3)
        g = res.trajectory.g_values
        assert g[0] == 2.0
        assert np.all(np.diff(g) < 0)
        c = decay_rate(res.lambda1, 2.0)
        assert abs(g[-1] - c) <= 1e-6
        assert res.g_limit_residual == pytest.approx(abs(g[-1] - c))

    def test_scaled_problem(self):
        # R = 2: closed form -(2 - 1/2)^2 = -2.25
        res = solve_lambda1_ball(ProblemParams(p=2.0, n=3, alpha=-2.0, R=2.0))
        assert res.lambda1 == pytest.approx(-2.25, rel=1e-8)

    def test_options_accepted(self):
        opts = SolverOptions(lambda_tol=1e-6)
        res = solve_lambda1_ball(P2N3, opts)
        assert res.lambda1 == pytest.approx(-1.0, rel=1e-5)


class TestEigenfunction:
    def test_p2_n3_closed_form(self):
        # phi(r) = e^-(r-1) / r for p=2, n=3, alpha=-2 (normalized at R=1).
        res = solve_lambda1_ball(P2N3)
        phi = eigenfunction_from_g(res.trajectory)
        sample = phi.nodes[phi.nodes < 20.0]
        expected = np.exp(-(sample - 1.0)) / sample
        got = np.interp(sample, phi.nodes, phi.values)
        # Tolerance reflects the trapezoid accumulation of int g on the
        # stored log-spaced grid, not solver error.
        assert np.allclose(got, expected, rtol=3e-3)

    def test_positive_decreasing(self):
        res = solve_lambda1_ball(ProblemParams(p=3.0, n=3, alpha=-4.0))
        phi = eigenfunction_from_g(res.trajectory)
        assert phi.values[0] == 1.0
        assert np.all(phi.values > 0)
        assert np.all(np.diff(phi.values) < 0)


class TestEffectiveRobinRatio:
    def test_boundary_recovers_alpha(self):
        res = solve_lambda1_ball(P2N3)
        assert effective_robin_ratio(res.trajectory, 2.0, 1.0, 1.0) == -2.0

    def test_interior_between_alpha_and_zero(self):
        res = solve_lambda1_ball(P2N3)
        for r in (1.5, 3.0, 10.0):
            val = effective_robin_ratio(res.trajectory, 2.0, r, 1.0)
            assert -2.0 < val < 0.0

    def test_increasing_in_r(self):
        res = solve_lambda1_ball(P2N3)
        vals = [effective_robin_ratio(res.trajectory, 2.0, r, 1.0) for r in (1.0, 2.0, 4.0)]
        assert vals[0] < vals[1] < vals[2]

    def test_tilt_raises_value(self):
        res = solve_lambda1_ball(P2N3)
        full = effective_robin_ratio(res.trajectory, 2.0, 2.0, 1.0)
        tilted = effective_robin_ratio(res.trajectory, 2.0, 2.0, 0.5)
        assert tilted > full

    def test_cos_angle_domain(self):
        res = solve_lambda1_ball(P2N3)
        with pytest.raises(ValueError):
            effective_robin_ratio(res.trajectory, 2.0, 2.0, 0.0)
        with pytest.raises(ValueError):
            effective_robin_ratio(res.trajectory, 2.0, 2.0, 1.5)
