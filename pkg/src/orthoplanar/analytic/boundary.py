"""Mass, density and characteristic function on the boundary of the square ``|x| + |y| <= c t``.

A path ends on the boundary exactly when no reversal happened and the
rotations alternated, so the whole path stays on one side of the square.
"""

from __future__ import annotations

import math

import numpy as np

from ..bessel import bessel_i0, i0_dt_kernel
from ..core import DomainError
from ._checks import check_finite, check_time, params_of
from ._hyper import damped_coshm1, damped_cosh_sinhc


def prob_boundary(params, t) -> float:
    """``P(|X(t)| + |Y(t)| = c t)``, vertices included.

    Evaluated as ``e^{-lam t} [2 cosh(x) + lam t (p+q) sinh(x)/x - 1]`` with
    ``x = lam t sqrt(pq)``, which is finite and exact at ``pq = 0``.
    """
    pr = params_of(params)
    t = check_time(t)
    lam = pr.lam
    ch, sh = damped_cosh_sinhc(-lam * t, lam * lam * pr.p * pr.q, t)
    return 2.0 * ch + lam * (pr.p + pr.q) * sh - math.exp(-lam * t)


def prob_side_interior(params, t) -> float:
    """Mass on the open side ``x + y = c t, x > 0, y > 0`` (one of four)."""
    pr = params_of(params)
    t = check_time(t)
    lam = pr.lam
    z = lam * lam * pr.p * pr.q
    chm1 = damped_coshm1(-lam * t, z, t)
    _, sh = damped_cosh_sinhc(-lam * t, z, t)
    return 0.25 * (2.0 * chm1 + lam * (pr.p + pr.q) * sh)


def _side_radius(pr, t, eta):
    eta_arr = np.asarray(eta, dtype=float)
    ct = pr.c * t
    if np.any(~np.isfinite(eta_arr)) or np.any(np.abs(eta_arr) >= ct):
        raise DomainError(f"eta must satisfy |eta| < c*t = {ct!r}")
    return eta_arr, np.sqrt((ct - eta_arr) * (ct + eta_arr))


def side_density(params, t, eta):
    """Density of ``X - Y`` on the open side ``X + Y = c t``.

    Accepts a scalar or an array of ``eta`` with ``|eta| < c t``.
    """
    pr = params_of(params)
    t = check_time(t, positive=True)
    lam, c = pr.lam, pr.c
    eta_arr, rad = _side_radius(pr, t, eta)
    K = lam / c * math.sqrt(pr.p * pr.q)
    val = math.exp(-lam * t) / (4.0 * c) * (
        0.5 * lam * (pr.p + pr.q) * np.asarray(bessel_i0(K * rad))
        + np.asarray(i0_dt_kernel(K, c, t, eta_arr))
    )
    return float(val) if np.ndim(eta) == 0 else val


def side_charfn(params, t, alpha) -> complex:
    """``E[exp(i alpha (X - Y)); X + Y = c t]``, vertices of that side included.

    Real by the ``eta -> -eta`` symmetry; returned as a complex with zero
    imaginary part.
    """
    pr = params_of(params)
    t = check_time(t)
    alpha = check_finite("alpha", alpha)
    lam = pr.lam
    z = lam * lam * pr.p * pr.q - alpha * alpha * pr.c * pr.c
    ch, sh = damped_cosh_sinhc(-lam * t, z, t)
    return complex(0.5 * ch + 0.25 * lam * (pr.p + pr.q) * sh, 0.0)


def side_vertex_mass(params, t) -> float:
    """Mass of each vertex, ``e^{-lam t}/4``; each side holds two of them."""
    pr = params_of(params)
    return 0.25 * math.exp(-pr.lam * check_time(t))
