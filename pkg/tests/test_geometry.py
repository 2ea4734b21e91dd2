import math

import pytest

from robinext.geometry import (
    EllipsoidSpec,
    PacDomainSpec,
    comparator_threshold,
    ellipsoid_hmax_ext,
    equal_volume_ball_hmax_ext,
    expansion_comparator,
    pac_quotient,
)

# Frozen after the first verified cell-doubling-converged run (8000 cells).
PAC_GOLDEN_P2_EPS05 = -0.4475091129092558


class TestSpecs:
    def test_pac_validation(self):
        PacDomainSpec(p=2.0, epsilon=0.5)
        with pytest.raises(ValueError):
            PacDomainSpec(p=1.0, epsilon=0.5)
        with pytest.raises(ValueError):
            PacDomainSpec(p=2.0, epsilon=0.0)
        with pytest.raises(ValueError):
            PacDomainSpec(p=2.0, epsilon=1.0)

    def test_ellipsoid_validation(self):
        EllipsoidSpec(n=3, a=0.5)
        with pytest.raises(ValueError):
            EllipsoidSpec(n=2, a=0.5)
        with pytest.raises(ValueError):
            EllipsoidSpec(n=3, a=0.0)
        with pytest.raises(ValueError):
            EllipsoidSpec(n=3, a=1.5)


class TestPacQuotient:
    def test_golden(self):
        qb = pac_quotient(PacDomainSpec(p=2.0, epsilon=0.5), alpha=-1.0)
        assert qb.quotient == pytest.approx(PAC_GOLDEN_P2_EPS05, rel=1e-4)
        assert qb.quotient < 0

    def test_closed_bounds(self):
        # mass < 2/(p+1) + |circle|; gradient <= 2 (3/p)^p + (3/p)^p |circle|/(p+1)
        for p in (2.0, 3.0):
            for eps in (0.3, 0.05):
                qb = pac_quotient(PacDomainSpec(p=p, epsilon=eps), alpha=-1.0)
                assert qb.mass_term < 2.0 / (p + 1.0) + 2.0 * math.pi
                assert qb.gradient_term <= (3.0 / p) ** p * (2.0 + 2.0 * math.pi / (p + 1.0))

    def test_divergence(self):
        prev = 0.0
        for eps in (0.3, 0.1, 0.03, 0.01):
            qb = pac_quotient(PacDomainSpec(p=2.0, epsilon=eps), alpha=-1.0)
            assert qb.quotient < prev
            prev = qb.quotient
        assert prev < -1e3
        # divergence rate: boundary term scales like alpha / epsilon^2
        assert abs(qb.boundary_term) > 0.5 / 0.01**2

    def test_boundary_scales_with_alpha(self):
        q1 = pac_quotient(PacDomainSpec(p=2.0, epsilon=0.1), alpha=-1.0)
        q2 = pac_quotient(PacDomainSpec(p=2.0, epsilon=0.1), alpha=-2.0)
        assert q2.boundary_term == pytest.approx(2.0 * q1.boundary_term)
        assert q2.mass_term == pytest.approx(q1.mass_term)

    def test_validation(self):
        with pytest.raises(ValueError):
            pac_quotient(PacDomainSpec(p=2.0, epsilon=0.5), alpha=1.0)
        with pytest.raises(ValueError):
            pac_quotient(PacDomainSpec(p=2.0, epsilon=0.5), alpha=-1.0, quad_cells=10)


class TestEllipsoid:
    def test_hmax_formula(self):
        assert ellipsoid_hmax_ext(EllipsoidSpec(n=3, a=1.0)) == -1.0
        assert ellipsoid_hmax_ext(EllipsoidSpec(n=4, a=0.1)) == pytest.approx(-2.01 / 3.0)

    def test_ball_hmax(self):
        assert equal_volume_ball_hmax_ext(EllipsoidSpec(n=3, a=1.0)) == -1.0
        assert equal_volume_ball_hmax_ext(EllipsoidSpec(n=3, a=0.001)) == pytest.approx(-0.1)

    def test_sphere_degenerate_agreement(self):
        spec = EllipsoidSpec(n=3, a=1.0)
        assert abs(ellipsoid_hmax_ext(spec) - equal_volume_ball_hmax_ext(spec)) <= 1e-12

    def test_threshold(self):
        a_dag = comparator_threshold(3)
        assert 0.1 < a_dag < 0.5
        # crossing: H_E < H_B below, H_E > H_B above
        below, above = 0.9 * a_dag, 1.1 * a_dag
        assert ellipsoid_hmax_ext(EllipsoidSpec(n=3, a=below)) < equal_volume_ball_hmax_ext(
            EllipsoidSpec(n=3, a=below)
        )
        assert ellipsoid_hmax_ext(EllipsoidSpec(n=3, a=above)) > equal_volume_ball_hmax_ext(
            EllipsoidSpec(n=3, a=above)
        )

    def test_comparator(self):
        exp_e, exp_b, flag = expansion_comparator(-100.0, 2.0, EllipsoidSpec(n=3, a=0.1))
        assert flag and exp_e > exp_b
        _, _, flag_flat = expansion_comparator(-100.0, 2.0, EllipsoidSpec(n=3, a=0.9))
        assert not flag_flat

    def test_comparator_flips_once(self):
        import numpy as np

        flags = [
            expansion_comparator(-50.0, 3.0, EllipsoidSpec(n=3, a=float(a)))[2]
            for a in np.linspace(0.02, 0.98, 30)
        ]
        assert sum(flags[i] != flags[i + 1] for i in range(len(flags) - 1)) == 1
