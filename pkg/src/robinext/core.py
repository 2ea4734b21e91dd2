"""Closed-form quantities for the first Robin eigenvalue of the p-Laplacian
on the exterior of a ball.

Everything in this module is a pure function of scalar arguments: thresholds,
scaling maps, asymptotic envelopes and sandwich bounds that need no ODE
solving.  The main solver lives in :mod:`robinext.shooting`.

Conventions: the domain is the exterior of the ball of radius ``R`` in
``n`` dimensions, the Robin parameter is ``alpha`` (negative values bind),
and ``p > 1`` is the p-Laplacian exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class NoNegativeEigenvalue(ValueError):
    """alpha is at or above the Steklov threshold: the bottom of the spectrum
    is 0 and there is no interior eigenvalue to compute."""


class NoBracket(RuntimeError):
    """Shot classification never produced a sign change; typically the
    integration window is too short."""


class StepFailure(RuntimeError):
    """The ODE step controller failed before a termination event."""


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ProblemParams:
    """Scalar parameters (p, n, alpha, R) of the exterior-ball problem."""

    p: float
    n: int
    alpha: float
    R: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _require_finite("p", self.p))
        object.__setattr__(self, "alpha", _require_finite("alpha", self.alpha))
        object.__setattr__(self, "R", _require_finite("R", self.R))
        if int(self.n) != self.n:
            raise ValueError(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.p <= 1:
            raise ValueError(f"p must exceed 1, got {self.p}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.R <= 0:
            raise ValueError(f"R must be positive, got {self.R}")


@dataclass(frozen=True)
class EigenvalueBracket:
    """Bisection bracket [lo, hi] around the eigenvalue; both bounds <= 0."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (self.lo <= self.hi <= 0.0):
            raise ValueError(f"need lo <= hi <= 0, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def gamma_int(n: int) -> float:
    """Gamma(n) for integer n >= 1, computed as (n-1)!."""
    if n < 1 or int(n) != n:
        raise ValueError(f"gamma_int needs an integer n >= 1, got {n!r}")
    return float(math.factorial(int(n) - 1))


def steklov_threshold(params: ProblemParams) -> float:
    """Critical Robin parameter alpha* below which the eigenvalue is negative.

    For 1 < p < n this is minus the first p-harmonic Steklov eigenvalue of the
    exterior ball, -((n-p)/((p-1)R))^(p-1); for n <= p it is 0.
    """
    p, n, R = params.p, params.n, params.R
    if n <= p:
        return 0.0
    return -(((n - p) / ((p - 1) * R)) ** (p - 1))


def lambda1_halfline(alpha: float, p: float) -> float:
    """Eigenvalue -(p-1)|alpha|^(p/(p-1)) of the one-dimensional problem on
    the complement of an interval; independent of the interval's length."""
    if p <= 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if alpha >= 0:
        raise NoNegativeEigenvalue(
            f"alpha must be negative for an interior eigenvalue, got {alpha}"
        )
    return -(p - 1) * abs(alpha) ** (p / (p - 1))


def scale_problem(params: ProblemParams, beta: float) -> ProblemParams:
    """Dilate the ball by beta > 0, adjusting alpha so the eigenvalues of the
    two problems are related by ``scale_eigenvalue``.

    The scaled problem is (p, n, beta^(1-p) * alpha, beta * R) and its
    eigenvalue equals the original one divided by beta^p.
    """
    if not (beta > 0) or not math.isfinite(beta):
        raise ValueError(f"beta must be positive and finite, got {beta}")
    return ProblemParams(
        p=params.p,
        n=params.n,
        alpha=beta ** (1.0 - params.p) * params.alpha,
        R=beta * params.R,
    )


def scale_eigenvalue(lam: float, beta: float, p: float) -> float:
    """Eigenvalue of ``scale_problem(params, beta)`` given the original one."""
    if not (beta > 0) or not math.isfinite(beta):
        raise ValueError(f"beta must be positive and finite, got {beta}")
    return lam / beta**p


def strong_coupling_expansion(alpha: float, p: float, n: int, h_max: float) -> float:
    """Two-term large-|alpha| expansion of the eigenvalue.

    Returns -(p-1)|alpha|^(p/(p-1)) - (n-1) * h_max * |alpha| where ``h_max``
    is the maximal curvature of the boundary seen from the exterior; for the
    exterior of a ball of radius R pass ``h_max = -1/R``.
    """
    if alpha >= 0:
        raise ValueError(f"alpha must be negative, got {alpha}")
    a = abs(alpha)
    return -(p - 1) * a ** (p / (p - 1)) - (n - 1) * h_max * a


def small_alpha_envelope(alpha: float, p: float, n: int) -> float:
    """Asymptotic upper envelope -(p^n/(2 Gamma(n)))^(p/(p-n)) |alpha|^(p/(p-n))
    of the unit-ball eigenvalue as alpha -> 0-.  Requires 2 <= n < p."""
    if not (2 <= n < p):
        raise ValueError(f"need 2 <= n < p, got n={n}, p={p}")
    if alpha >= 0:
        raise ValueError(f"alpha must be negative, got {alpha}")
    const = (p**n / (2.0 * gamma_int(n))) ** (p / (p - n))
    return -const * abs(alpha) ** (p / (p - n))


def critical_sandwich_bounds(alpha: float, n: int, lambda_p2: float) -> tuple[float, float]:
    """Sandwich bounds for the critical-exponent eigenvalue (p = n) on the
    unit ball, in terms of the p = 2 planar eigenvalue at -|alpha|^(1/(n-1)).

    ``lambda_p2`` must be the (negative) value lambda_1(-|alpha|^(1/(n-1)),
    2, 2, unit ball exterior), supplied by the caller to keep this module
    free of Bessel machinery.  Returns (lower, upper).
    """
    if alpha >= 0:
        raise ValueError(f"alpha must be negative, got {alpha}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if lambda_p2 >= 0:
        raise ValueError(f"lambda_p2 must be negative, got {lambda_p2}")
    a = abs(alpha)
    lower = (n - 1) * a ** ((n - 2) / (n - 1)) * lambda_p2
    upper = -(n - 1) * abs(lambda_p2) ** (n / 2.0)
    return lower, upper


def decay_rate(lam: float, p: float) -> float:
    """Far-field logarithmic decay rate (-lam/(p-1))^(1/p) of the
    eigenfunction; the limit of the log-derivative as r -> infinity."""
    if lam >= 0:
        raise ValueError(f"lam must be negative, got {lam}")
    return (-lam / (p - 1)) ** (1.0 / p)
