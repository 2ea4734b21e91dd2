"""Planar notched-disk and ellipsoid constructions.

Two explicit families of domains that probe the shape dependence of the
exterior Robin eigenvalue:

* a unit disk with a thin power-law notch cut out (``PacDomainSpec``): the
  Rayleigh quotient of the fixed test function u = |x|^(-3/p) over the
  exterior diverges to -infinity as the notch parameter epsilon -> 0, so the
  eigenvalue is unbounded below over Lipschitz planar domains of bounded
  measure and perimeter;
* flattened ellipsoids (``EllipsoidSpec``): comparing maximal exterior mean
  curvatures of the ellipsoid and of the equal-volume ball through the
  strong-coupling two-term expansion shows the ball does not maximize the
  eigenvalue in dimension n >= 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import strong_coupling_expansion
from .variational import QuotientBreakdown


class QuadratureNotConverged(RuntimeError):
    """Cell doubling changed the quotient by more than the declared band."""


@dataclass(frozen=True)
class PacDomainSpec:
    """Unit disk minus the notch {x1 >= epsilon, |x2| <= x1^(p+3)}."""

    p: float
    epsilon: float

    def __post_init__(self) -> None:
        if not (self.p > 1):
            raise ValueError(f"p must exceed 1, got {self.p}")
        if not (0 < self.epsilon < 1):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class EllipsoidSpec:
    """Ellipsoid {(a x1)^2 + x2^2 + ... + xn^2 < 1} with flattening a."""

    n: int
    a: float

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        if not (0 < self.a <= 1):
            raise ValueError(f"a must lie in (0, 1], got {self.a}")


def _notch_circle_crossing(p: float) -> float:
    """x1 coordinate where the notch curve x2 = x1^(p+3) meets the unit
    circle."""
    return brentq(
        lambda x: x * x + x ** (2.0 * (p + 3.0)) - 1.0, 0.5, 1.0, xtol=1e-15
    )


_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gauss_cells(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Composite 16-point Gauss-Legendre nodes/weights on the cells given by
    ``edges``."""
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    x = (mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]).ravel()
    w = (half[:, None] * _GAUSS_WEIGHTS[None, :]).ravel()
    return x, w


def _pac_quotient_once(spec: PacDomainSpec, alpha: float, cells: int) -> QuotientBreakdown:
    p, eps = spec.p, spec.epsilon
    q = p + 3.0
    x1c = _notch_circle_crossing(p)

    # Exterior of the unit disk, in polar coordinates: |u|^p = r^-3 and
    # |grad u|^p = (3/p)^p r^(-3-p), both against the area element r dr.
    mass = 2.0 * math.pi
    grad = 2.0 * math.pi * (3.0 / p) ** p / (p + 1.0)

    # Notch strip {eps <= x1 <= x1c, |x2| <= x1^q}, graded toward x1 = eps
    # where the integrands are largest.
    edges = np.geomspace(eps, x1c, cells + 1)
    x1, w1 = _gauss_cells(edges)
    b = x1**q
    # inner x2 integral of |x|^-3 in closed form
    mass += float(np.sum(w1 * 2.0 * b / (x1**2 * np.hypot(x1, b))))
    # inner x2 integral of |x|^(-3-p) by Gauss quadrature on [0, b], doubled
    x2, w2 = _gauss_cells(np.array([0.0, 1.0]))
    rr = np.hypot(x1[:, None], b[:, None] * x2[None, :])
    inner = 2.0 * b * np.sum(w2[None, :] * rr ** (-(3.0 + p)), axis=1)
    grad += (3.0 / p) ** p * float(np.sum(w1 * inner))

    # Boundary: two notch curves x2 = +-x1^q, the tip segment x1 = eps, and
    # the unit circle minus the arc swallowed by the notch.
    ds = np.sqrt(1.0 + (q * x1 ** (q - 1.0)) ** 2)
    curve = 2.0 * float(np.sum(w1 * np.hypot(x1, b) ** (-3.0) * ds))
    b_eps = eps**q
    tip = 2.0 * b_eps / (eps**2 * math.hypot(eps, b_eps))
    theta_c = math.atan2(x1c**q, x1c)
    arc = 2.0 * math.pi - 2.0 * theta_c  # u = 1 on the unit circle
    boundary = alpha * (curve + tip + arc)

    return QuotientBreakdown(gradient_term=grad, boundary_term=boundary, mass_term=mass)


def pac_quotient(spec: PacDomainSpec, alpha: float, quad_cells: int = 2000) -> QuotientBreakdown:
    """Rayleigh quotient terms of u = |x|^(-3/p) over the exterior of the
    notched disk.

    The exterior-of-the-disk contributions are analytic; the notch strip and
    its boundary are integrated by composite Gauss quadrature on a geometric
    grid graded toward the notch tip.  The quotient must agree under cell
    doubling to 1% or :class:`QuadratureNotConverged` is raised.
    """
    if alpha >= 0:
        raise ValueError(f"alpha must be negative, got {alpha}")
    if quad_cells < 1000:
        raise ValueError(f"need quad_cells >= 1000, got {quad_cells}")
    coarse = _pac_quotient_once(spec, alpha, quad_cells)
    fine = _pac_quotient_once(spec, alpha, 2 * quad_cells)
    if abs(fine.quotient - coarse.quotient) > 0.01 * abs(fine.quotient):
        raise QuadratureNotConverged(
            f"quotient moved from {coarse.quotient} to {fine.quotient} under cell doubling"
        )
    return fine


def ellipsoid_hmax_ext(spec: EllipsoidSpec) -> float:
    """Maximal mean curvature -(n-2+a^2)/(n-1) of the ellipsoid boundary,
    signed as seen from the exterior."""
    return -(spec.n - 2.0 + spec.a**2) / (spec.n - 1.0)


def equal_volume_ball_hmax_ext(spec: EllipsoidSpec) -> float:
    """Maximal (= constant) exterior mean curvature -a^(1/n) of the ball with
    the same volume as the ellipsoid (radius a^(-1/n))."""
    return -spec.a ** (1.0 / spec.n)


def expansion_comparator(alpha: float, p: float, spec: EllipsoidSpec) -> tuple[float, float, bool]:
    """Two-term strong-coupling expansions for the ellipsoid exterior and the
    equal-volume-ball exterior, plus whether the ellipsoid value is larger.

    A true comparator at small flattening shows the ball is not the maximizer
    among equal-volume domains for n >= 3.  Diagnostic only: meaningful when
    |alpha| is large.
    """
    if alpha >= 0:
        raise ValueError(f"alpha must be negative, got {alpha}")
    exp_e = strong_coupling_expansion(alpha, p, spec.n, ellipsoid_hmax_ext(spec))
    exp_b = strong_coupling_expansion(alpha, p, spec.n, equal_volume_ball_hmax_ext(spec))
    return exp_e, exp_b, exp_e > exp_b


def comparator_threshold(n: int) -> float:
    """Flattening a{dagger}(n) where the two H_max values cross.

    Below the threshold the ellipsoid's maximal curvature is smaller (more
    negative is not the case -- smaller means H_E < H_B) and the comparator
    holds; a = 1 is the degenerate sphere root and is excluded.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")

    def f(a: float) -> float:
        return a ** (1.0 / n) - (n - 2.0 + a * a) / (n - 1.0)

    return brentq(f, 1e-9, 0.99, xtol=1e-13)
