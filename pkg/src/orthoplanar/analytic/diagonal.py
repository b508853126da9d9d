"""The two axes through the origin: paths made only of reversals."""

from __future__ import annotations

import math

import numpy as np

from ..bessel import bessel_i0, i0_dt_kernel
from ..core import DomainError
from ._checks import check_finite, check_time, params_of, require_reflection
from ._hyper import damped_cosh_sinhc


def prob_diagonals(params, t) -> float:
    """``P(only reversals up to t)``, both axes and the four vertices."""
    pr = params_of(params)
    return math.exp(-pr.lam * (pr.p + pr.q) * check_time(t))


def prob_diag_interior(params, t) -> float:
    """Mass on the open horizontal segment ``|x| < c t, y = 0``."""
    pr = params_of(params)
    t = check_time(t)
    # (e^{-lam(p+q)t} - e^{-lam t})/2 without cancellation for small r t
    return 0.5 * math.exp(-pr.lam * t) * math.expm1(pr.lam * pr.r * t)


def diag_density(params, t, x):
    """Density of ``X`` on the open horizontal segment; requires ``p + q < 1``."""
    pr = params_of(params)
    t = check_time(t, positive=True)
    r = require_reflection(pr)
    lam, c = pr.lam, pr.c
    x_arr = np.asarray(x, dtype=float)
    ct = c * t
    if np.any(~np.isfinite(x_arr)) or np.any(np.abs(x_arr) >= ct):
        raise DomainError(f"coordinate must satisfy |x| < c*t = {ct!r}")
    K = lam * r / c
    rad = np.sqrt((ct - x_arr) * (ct + x_arr))
    val = math.exp(-lam * t) / (4.0 * c) * (
        lam * r * np.asarray(bessel_i0(K * rad)) + np.asarray(i0_dt_kernel(K, c, t, x_arr))
    )
    return float(val) if np.ndim(x) == 0 else val


def diag_charfn(params, t, alpha) -> complex:
    """``E[exp(i alpha X); Y = 0 throughout]`` including the atoms at ``x = +-c t``."""
    pr = params_of(params)
    t = check_time(t)
    alpha = check_finite("alpha", alpha)
    lam, r = pr.lam, max(pr.r, 0.0)
    z = (lam * r) ** 2 - (alpha * pr.c) ** 2
    ch, sh = damped_cosh_sinhc(-lam * t, z, t)
    return complex(0.5 * (ch + lam * r * sh), 0.0)


def vertical_side_density(params, t, y):
    """Density of ``Y`` on ``{T(t) = t}``: the vertical axis, same law as the horizontal one."""
    return diag_density(params, t, y)


def vertical_side_charfn(params, t, beta) -> complex:
    """``E[exp(i beta Y); T(t) = t]``."""
    return diag_charfn(params, t, beta)
