import math

import numpy as np
import pytest
from scipy.integrate import quad

from robinext.besselref import lambda1_ball_p2
from robinext.core import ProblemParams, lambda1_halfline
from robinext.shooting import solve_lambda1_ball
from robinext.variational import (
    MESH_GROWTH,
    RadialProfile,
    _exp_tail_integral,
    _trapezoid_weights,
    envelope_beta,
    envelope_test_function_quotient,
    graded_mesh,
    minimize_truncated,
    rayleigh_quotient,
)


class TestRadialProfile:
    def test_valid(self):
        prof = RadialProfile(nodes=[1.0, 2.0, 3.0], values=[1.0, 0.5, 0.2])
        assert prof.nodes.shape == (3,)

    def test_invalid(self):
        with pytest.raises(ValueError):
            RadialProfile(nodes=[1.0, 1.0], values=[1.0, 0.5])
        with pytest.raises(ValueError):
            RadialProfile(nodes=[1.0, 2.0], values=[1.0])
        with pytest.raises(ValueError):
            RadialProfile(nodes=[1.0, 2.0], values=[1.0, float("nan")])


class TestGradedMesh:
    def test_endpoints_and_monotonicity(self):
        r = graded_mesh(1.0, 40.0, 256)
        assert r[0] == 1.0
        assert r[-1] == pytest.approx(40.0)
        assert np.all(np.diff(r) > 0)

    def test_total_growth_fixed(self):
        # Last cell over first cell equals MESH_GROWTH regardless of N, so
        # doubling N refines everywhere.
        for N in (64, 256, 1024):
            h = np.diff(graded_mesh(1.0, 40.0, N))
            assert h[-1] / h[0] == pytest.approx(MESH_GROWTH)

    def test_refinement_halves_cells(self):
        h1 = np.diff(graded_mesh(1.0, 40.0, 128))
        h2 = np.diff(graded_mesh(1.0, 40.0, 256))
        assert h2.max() < h1.max()


def test_trapezoid_weights():
    nodes = np.array([0.0, 1.0, 3.0, 4.0])
    w = _trapezoid_weights(nodes)
    assert w.sum() == pytest.approx(4.0)
    f = nodes**2
    assert np.sum(w * f) == pytest.approx(np.trapezoid(f, nodes))


def test_exp_tail_integral_vs_quad():
    for a, r0, n in ((1.0, 1.0, 2), (2.5, 0.7, 3), (0.3, 4.0, 4)):
        ref, _ = quad(lambda r: math.exp(-a * (r - r0)) * r ** (n - 1), r0, r0 + 200.0 / a)
        assert _exp_tail_integral(a, r0, n) == pytest.approx(ref, rel=1e-9)


class TestRayleighQuotient:
    def test_known_eigenfunction_p2_n3(self):
        # u = e^-(r-1)/r is the exact minimizer for p=2, n=3, alpha=-2,
        # with quotient -1.  The exponential tail closes the truncation.
        params = ProblemParams(p=2.0, n=3, alpha=-2.0)
        r = np.linspace(1.0, 30.0, 4000)
        profile = RadialProfile(nodes=r, values=np.exp(-(r - 1.0)) / r)
        qb = rayleigh_quotient(profile, params, tail_gamma=1.0)
        assert qb.quotient == pytest.approx(-1.0, abs=2e-3)

    def test_breakdown_signs(self):
        params = ProblemParams(p=2.0, n=3, alpha=-2.0)
        r = np.linspace(1.0, 20.0, 500)
        profile = RadialProfile(nodes=r, values=np.exp(-(r - 1.0)))
        qb = rayleigh_quotient(profile, params)
        assert qb.gradient_term > 0
        assert qb.boundary_term < 0
        assert qb.mass_term > 0

    def test_upper_bound_property(self):
        # Any profile with a tail gives a quotient above the true eigenvalue.
        params = ProblemParams(p=2.0, n=3, alpha=-2.0)
        r = np.linspace(1.0, 25.0, 2000)
        for rate in (0.7, 1.0, 1.6):
            profile = RadialProfile(nodes=r, values=np.exp(-rate * (r - 1.0)))
            qb = rayleigh_quotient(profile, params, tail_gamma=rate)
            assert qb.quotient >= -1.0 - 1e-9

    def test_profile_must_start_at_R(self):
        params = ProblemParams(p=2.0, n=3, alpha=-2.0)
        r = np.linspace(2.0, 10.0, 50)
        profile = RadialProfile(nodes=r, values=np.exp(-r))
        with pytest.raises(ValueError):
            rayleigh_quotient(profile, params)

    def test_bad_tail(self):
        params = ProblemParams(p=2.0, n=3, alpha=-2.0)
        r = np.linspace(1.0, 10.0, 50)
        profile = RadialProfile(nodes=r, values=np.exp(-r))
        with pytest.raises(ValueError):
            rayleigh_quotient(profile, params, tail_gamma=-1.0)


class TestMinimizeTruncated:
    def test_p2_matches_bessel(self):
        params = ProblemParams(p=2.0, n=2, alpha=-2.0)
        theta, profile = minimize_truncated(params, R0=30.0, N=1024)
        assert theta == pytest.approx(lambda1_ball_p2(2, 1.0, -2.0), rel=1e-3)
        assert np.all(profile.values > 0)
        assert profile.p_norm == 1.0

    def test_p3_brackets_shooting(self):
        params = ProblemParams(p=3.0, n=2, alpha=-2.0)
        lam = solve_lambda1_ball(params).lambda1
        theta, _ = minimize_truncated(params, R0=40.0, N=1024)
        assert theta == pytest.approx(lam, rel=1e-2)

    def test_n1_halfline(self):
        params = ProblemParams(p=2.0, n=1, alpha=-1.0)
        theta, _ = minimize_truncated(params, R0=30.0, N=512)
        assert theta == pytest.approx(lambda1_halfline(-1.0, 2.0), rel=1e-4)

    def test_input_validation(self):
        params = ProblemParams(p=2.0, n=2, alpha=-1.0)
        with pytest.raises(ValueError):
            minimize_truncated(params, R0=0.5, N=256)
        with pytest.raises(ValueError):
            minimize_truncated(params, R0=30.0, N=8)


class TestEnvelope:
    def test_beta_formula(self):
        # (|alpha| p^n / (2 Gamma(n)))^(1/(p-n)) at p=3, n=2: (4.5 |alpha|)^1
        assert envelope_beta(-1.0, 3.0, 2) == pytest.approx(4.5)
        assert envelope_beta(-1e-3, 3.0, 2) == pytest.approx(4.5e-3)

    def test_beta_domain(self):
        with pytest.raises(ValueError):
            envelope_beta(-1.0, 2.0, 2)
        with pytest.raises(ValueError):
            envelope_beta(1.0, 3.0, 2)

    def test_quotient_methods_agree(self):
        params = ProblemParams(p=3.0, n=2, alpha=-1e-2)
        beta = envelope_beta(params.alpha, params.p, params.n)
        analytic = envelope_test_function_quotient(params, beta, method="analytic")
        numeric = envelope_test_function_quotient(params, beta, method="quad")
        assert analytic == pytest.approx(numeric, rel=1e-8)

    def test_quotient_is_upper_bound(self):
        params = ProblemParams(p=3.0, n=2, alpha=-1e-3)
        beta = envelope_beta(params.alpha, params.p, params.n)
        quotient = envelope_test_function_quotient(params, beta)
        lam = solve_lambda1_ball(params).lambda1
        assert lam <= quotient < 0

    def test_quotient_validation(self):
        params = ProblemParams(p=3.0, n=2, alpha=-1.0)
        with pytest.raises(ValueError):
            envelope_test_function_quotient(params, -0.5)
        with pytest.raises(ValueError):
            envelope_test_function_quotient(params, 1.0, method="magic")
