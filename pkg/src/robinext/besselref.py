"""Exact p = 2 reference solver built on modified Bessel functions of the
second kind.

This module supplies the oracles used to validate the nonlinear shooting
solver: the planar (n = 2) secular equation alpha = -s K1(sR)/K0(sR), the
n = 3 closed form, and the Segura ratio inequality.

K0/K1 are evaluated in two regimes: the ascending series with log term for
x <= 2, and a trapezoid discretization of the integral representation
K_nu(x) = int_0^infty exp(-x cosh t) cosh(nu t) dt for x > 2 (the integrand
is even and decays double-exponentially, so the trapezoid rule converges
spectrally).  Half-integer orders use the closed form K_{1/2} and the upward
recurrence K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .core import NoNegativeEigenvalue, ProblemParams, steklov_threshold

_EULER_GAMMA = 0.5772156649015328606

# exp(-x) underflows to zero a little above 745; beyond that the value is not
# representable in double precision.
_X_UNDERFLOW = 740.0

_SUPPORTED_ORDERS = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5)


class BesselUnderflow(ArithmeticError):
    """K_nu(x) underflows double precision for this argument."""


def _k01_series(x: float) -> tuple[float, float]:
    """Ascending series for (K0, K1), accurate for 0 < x <= 2."""
    q = 0.25 * x * x
    log_half_x = math.log(0.5 * x)

    # I0, I1 and the companion psi-weighted sums, all from one loop.
    i0_term = 1.0
    i0 = 1.0
    k0_sum = 0.0  # sum psi(k+1) (x^2/4)^k / (k!)^2, psi(1) = -gamma
    psi = -_EULER_GAMMA
    k0_sum += psi * i0_term
    i1 = 0.5
    i1_term = 0.5  # (x/2)^? handled via factor x at the end; here I1/x * ...
    # K1 companion: (x/4) sum [psi(k+1)+psi(k+2)] q^k / (k! (k+1)!)
    k1_sum = (psi + psi + 1.0) * 0.5  # k = 0 term of sum without x/4 factor
    term01 = 0.5
    for k in range(1, 60):
        i0_term *= q / (k * k)
        i0 += i0_term
        psi += 1.0 / k
        k0_sum += psi * i0_term
        term01 *= q / (k * (k + 1))
        i1 += term01
        k1_sum += (2.0 * psi + 1.0 / (k + 1)) * term01
        if i0_term < 1e-19 * i0:
            break
    i1 *= x  # I1(x) = (x/2) sum q^k/(k!(k+1)!) ; term01 started at 1/2
    k0 = -(log_half_x + 0.0) * i0 + k0_sum
    # k0_sum already carries the -gamma through psi, so only the log remains.
    k1 = log_half_x * i1 + 1.0 / x - 0.5 * x * k1_sum
    return k0, k1


def _k_integral(order: float, x: float) -> float:
    """Trapezoid evaluation of int_0^inf exp(-x cosh t) cosh(order*t) dt."""
    # Truncate where the integrand is below 1e-24 * exp(-x).
    t_max = math.acosh(1.0 + 56.0 / x)
    t = np.linspace(0.0, t_max, 800)
    f = np.exp(-x * np.cosh(t)) * np.cosh(order * t)
    return float(np.trapezoid(f, t))


def bessel_k(order: float, x: float) -> float:
    """Modified Bessel function of the second kind K_order(x), x > 0.

    Supported orders: 0, 1/2, 1, 3/2, 2, 5/2.  Relative accuracy is better
    than 1e-10 on [1e-3, 700]; arguments beyond the double-precision
    underflow range raise :class:`BesselUnderflow`.
    """
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    if order not in _SUPPORTED_ORDERS:
        raise ValueError(f"unsupported order {order!r}")
    if x > _X_UNDERFLOW:
        raise BesselUnderflow(f"K_{order}({x}) underflows double precision")

    if order in (0.5, 1.5, 2.5):
        k_half = math.sqrt(0.5 * math.pi / x) * math.exp(-x)
        if order == 0.5:
            return k_half
        k_3half = k_half * (1.0 + 1.0 / x)
        if order == 1.5:
            return k_3half
        return k_half + (3.0 / x) * k_3half

    if x <= 2.0:
        k0, k1 = _k01_series(x)
    else:
        k0 = _k_integral(0.0, x)
        k1 = _k_integral(1.0, x)
    if order == 0.0:
        return k0
    if order == 1.0:
        return k1
    return k0 + (2.0 / x) * k1  # K2 via recurrence


def lambda1_ball_p2(n: int, R: float, alpha: float) -> float:
    """First Robin eigenvalue for p = 2 on the exterior of a ball, n in {2, 3}.

    n = 2: lambda = -s^2 where s solves alpha = -s K1(sR)/K0(sR).
    n = 3: closed form -(|alpha| - 1/R)^2 from the exponential solution
    exp(-s r)/r.
    """
    if n not in (2, 3):
        raise ValueError(f"only n in {{2, 3}} supported, got {n}")
    params = ProblemParams(p=2.0, n=n, alpha=alpha, R=R)
    if alpha >= steklov_threshold(params):
        raise NoNegativeEigenvalue(
            f"alpha={alpha} is not below the threshold for (p=2, n={n}, R={R})"
        )
    if n == 3:
        s = abs(alpha) - 1.0 / R
        return -s * s

    target = abs(alpha)

    def secular(log_s: float) -> float:
        s = math.exp(log_s)
        return s * bessel_k(1.0, s * R) / bessel_k(0.0, s * R) - target

    # s K1(sR)/K0(sR) increases from 0 (logarithmically slowly) to above s,
    # so the root lies in (0, |alpha|).  Work in log s: for small |alpha| the
    # root is transcendentally small.
    hi = math.log(target)
    lo = hi - 700.0
    while secular(lo) > 0.0:
        lo -= 300.0
        if lo < -3000.0:  # pragma: no cover - unreachable for valid input
            raise RuntimeError("failed to bracket the secular root")
    log_s = brentq(secular, lo, hi, xtol=1e-14, rtol=8.9e-16, maxiter=300)
    s = math.exp(log_s)
    return -s * s


def segura_ratio_gap(m: int, x: float) -> float:
    """Nonnegative gap x K_{m/2+1}(x)/K_{m/2}(x) - (m/2 + sqrt(m^2/4 + x^2))
    in the Bessel ratio lower bound, for m in {0, 1, 2, 3}."""
    if m not in (0, 1, 2, 3):
        raise ValueError(f"unsupported order m={m}")
    nu = 0.5 * m
    ratio = bessel_k(nu + 1.0, x) / bessel_k(nu, x)
    return x * ratio - (0.5 * m + math.sqrt(0.25 * m * m + x * x))


def convex_lower_bound_p2(alpha: float) -> float:
    """Lower bound -alpha^2 for the planar p = 2 eigenvalue over all convex
    exterior domains."""
    if alpha >= 0:
        raise ValueError(f"alpha must be negative, got {alpha}")
    return -(alpha * alpha)
