"""Modified Bessel functions I0 and I1 and the derivative kernels built on them.

Two regimes: the power series for ``x <= SERIES_MAX`` and the large-argument
expansion ``e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(nu) / x^k`` beyond it.  All
functions accept scalars or numpy arrays and return the same shape.
"""

from __future__ import annotations

import math

import numpy as np

from .core import DomainError

SERIES_MAX = 15.0
# largest argument for which I0 and I1 are finite in double precision
OVERFLOW_ARG = 713.98

_SERIES_TERMS = 64
_ASYMPTOTIC_TERMS = 60


def _scalar_or_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _series(y, order):
    """sum_k y^k / (k! (k+order)!) for y = x^2/4, order 0 or 1."""
    term = np.ones_like(y)
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * y / (k * (k + order))
        total = total + term
    return total


def _asymptotic_sum(x, nu):
    mu = 4.0 * nu * nu
    term = np.ones_like(x)
    total = term.copy()
    done = np.zeros(x.shape, dtype=bool)
    for k in range(1, _ASYMPTOTIC_TERMS):
        nxt = term * (-(mu - (2 * k - 1) ** 2)) / (8.0 * k * x)
        # stop at the smallest term of the divergent expansion
        done |= np.abs(nxt) >= np.abs(term)
        done |= np.abs(nxt) < 1e-17 * np.abs(total)
        term = np.where(done, 0.0, nxt)
        total = total + term
        if done.all():
            break
    return total


def _bessel(x, nu):
    arr, scalar = _scalar_or_array(x)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("Bessel argument must be a nonnegative real")
    if np.any(arr > OVERFLOW_ARG):
        raise OverflowError(f"I{nu}(x) exceeds the double range for x > {OVERFLOW_ARG}")
    out = np.empty_like(arr)
    small = arr <= SERIES_MAX
    if small.any():
        xs = arr[small]
        s = _series(xs * xs / 4.0, nu)
        out[small] = s if nu == 0 else 0.5 * xs * s
    big = ~small
    if big.any():
        xb = arr[big]
        # split the exponential so that e^x alone cannot overflow before the prefactor
        out[big] = np.exp(xb - 0.5 * np.log(2.0 * np.pi * xb)) * _asymptotic_sum(xb, nu)
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"I{nu}(x) overflowed")
    return float(out) if scalar else out


def bessel_i0(x):
    """Modified Bessel function of the first kind, order zero."""
    return _bessel(x, 0)


def bessel_i1(x):
    """Modified Bessel function of the first kind, order one."""
    return _bessel(x, 1)


def i1_over_x(x):
    """``I1(x)/x`` with its limit 1/2 at the origin."""
    arr, scalar = _scalar_or_array(x)
    if np.any(arr < 0):
        raise DomainError("argument must be nonnegative")
    out = np.empty_like(arr)
    small = arr <= SERIES_MAX
    if small.any():
        xs = arr[small]
        out[small] = 0.5 * _series(xs * xs / 4.0, 1)
    big = ~small
    if big.any():
        out[big] = _bessel(arr[big], 1) / arr[big]
    return float(out) if scalar else out


def i0_dt_kernel(K, c, t, w):
    """Time derivative of ``I0(K sqrt(c^2 t^2 - w^2))``.

    Equals ``K^2 c^2 t I1(z)/z`` with ``z = K sqrt(c^2 t^2 - w^2)``; bounded on
    the closed segment, but only defined here for ``|w| < c t``.
    """
    w_arr, scalar = _scalar_or_array(w)
    ct = c * t
    if K < 0:
        raise DomainError("K must be nonnegative")
    if np.any(np.abs(w_arr) >= ct):
        raise DomainError(f"|w| must be < c*t = {ct!r}")
    z = K * np.sqrt((ct - w_arr) * (ct + w_arr))
    out = K * K * c * c * t * np.asarray(i1_over_x(z))
    return float(out) if scalar else out


def _occupation_z(K, t, s):
    s_arr, scalar = _scalar_or_array(s)
    if np.any(s_arr <= 0) or np.any(s_arr >= t):
        raise DomainError(f"s must lie in (0, {t!r})")
    return s_arr, scalar, K * np.sqrt(s_arr * (t - s_arr))


def i0_occupation(K, t, s):
    """``I0(K sqrt(s (t - s)))`` for ``0 < s < t``."""
    _, scalar, z = _occupation_z(K, t, s)
    out = np.asarray(bessel_i0(z))
    return float(out) if scalar else out


def i0_occupation_dt(K, t, s):
    """``d/dt I0(K sqrt(s (t - s))) = (K^2 s / 2) I1(z)/z``."""
    s_arr, scalar, z = _occupation_z(K, t, s)
    out = 0.5 * K * K * s_arr * np.asarray(i1_over_x(z))
    return float(out) if scalar else out


def i0_occupation_ds(K, t, s):
    """``d/ds I0(K sqrt(s (t - s))) = (K^2 (t - 2 s) / 2) I1(z)/z``."""
    s_arr, scalar, z = _occupation_z(K, t, s)
    out = 0.5 * K * K * (t - 2.0 * s_arr) * np.asarray(i1_over_x(z))
    return float(out) if scalar else out


def i0_light_cone_integral(K, c, t):
    """Closed form of the integral of ``I0(K sqrt(c^2 t^2 - w^2))`` over ``|w| < c t``."""
    if K == 0:
        return 2.0 * c * t
    return 2.0 * math.sinh(K * c * t) / K


def i0_dt_light_cone_integral(K, c, t):
    """Closed form of the integral of the time-derivative kernel over ``|w| < c t``."""
    return 2.0 * c * (math.cosh(K * c * t) - 1.0)
