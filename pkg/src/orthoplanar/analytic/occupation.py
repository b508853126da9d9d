"""Vertical occupation time ``T(t)`` and the oblique side ``Y(t) = c T(t)``.

``T(t)`` is the time spent moving along ``d_1`` or ``d_3``; ``|Y| <= c T``
always, so ``(T, Y)`` lives in the triangle ``|y| <= c s, 0 <= s <= t``.  The
oblique side ``y = c s`` is reached exactly by the paths that never move
along ``d_3``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..core import DomainError
from ..bessel import bessel_i0, i1_over_x, i0_occupation, i0_occupation_ds, i0_occupation_dt
from ._checks import check_finite, check_time, params_of, require_no_reflection, require_symmetric
from ._hyper import damped_cosh_sinhc


def _mu(pr) -> float:
    return pr.lam * (pr.p + pr.q)


def _check_s(t, s):
    s_arr = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(s_arr)) or np.any(s_arr <= 0.0) or np.any(s_arr >= t):
        raise DomainError(f"s must lie in the open interval (0, {t!r})")
    return s_arr


def t_endpoint_mass(params, t) -> float:
    """``P(T(t) = 0) = P(T(t) = t)``."""
    pr = params_of(params)
    return 0.5 * math.exp(-_mu(pr) * check_time(t))


def t_density(params, t, s):
    """Density of ``T(t)`` on ``0 < s < t``.

    With ``mu = lam (p+q)`` and ``z = 2 mu sqrt(s (t-s))`` this is
    ``e^{-mu t} [mu I0(z) + mu^2 t I1(z)/z]``, symmetric in ``s <-> t - s``.
    """
    pr = params_of(params)
    t = check_time(t, positive=True)
    s_arr = _check_s(t, s)
    mu = _mu(pr)
    z = 2.0 * mu * np.sqrt(s_arr * (t - s_arr))
    val = math.exp(-mu * t) * (mu * np.asarray(bessel_i0(z)) + mu * mu * t * np.asarray(i1_over_x(z)))
    return float(val) if np.ndim(s) == 0 else val


def t_charfn(params, t, alpha) -> complex:
    """``E[exp(i alpha T(t))]``, endpoint atoms included."""
    pr = params_of(params)
    t = check_time(t)
    alpha = check_finite("alpha", alpha)
    mu = _mu(pr)
    ch, sh = damped_cosh_sinhc(-mu * t, 4.0 * mu * mu - alpha * alpha, 0.5 * t)
    return cmath.exp(0.5j * alpha * t) * (ch + 2.0 * mu * sh)


def oblique_prob_noref(params, t) -> float:
    """``P(Y(t) = c T(t))`` for ``p + q = 1``, ``0 < p < 1``."""
    pr = params_of(params)
    p = require_no_reflection(pr)
    t = check_time(t)
    lam = pr.lam
    w = p * (1.0 - p)
    ch, sh = damped_cosh_sinhc(-lam * t, 2.0 * lam * lam * w, t)
    a2 = 1.0 / (2.0 * w)
    return 0.125 * (2.0 * (1.0 + a2) * ch + 4.0 * lam * sh - (2 * p - 1) ** 2 / w * math.exp(-lam * t))


def oblique_atoms_noref(params, t) -> tuple[float, float]:
    """Masses of ``(T, Y) = (0, 0)`` and ``(t, c t)`` on the oblique side, for ``p + q = 1``."""
    pr = params_of(params)
    require_no_reflection(pr)
    e = math.exp(-pr.lam * check_time(t))
    return 0.5 * e, 0.25 * e


def oblique_density_noref(params, t, s):
    """Density of ``T(t)`` on ``{Y(t) = c T(t)}``, ``0 < s < t``, for ``p + q = 1``.

    With ``w = p(1-p)`` and ``K = 2 lam sqrt(2 w)``:
    ``e^{-lam t} [(lam/2) I0 + (1 + 1/(2w))/4 dI0/dt + 1/(8w) dI0/ds]`` where
    ``I0 = I0(K sqrt(s (t-s)))``.  Not symmetric in ``s <-> t - s``: paths
    starting horizontally are twice as likely as those starting upward.
    """
    pr = params_of(params)
    p = require_no_reflection(pr)
    t = check_time(t, positive=True)
    s_arr = _check_s(t, s)
    lam = pr.lam
    w = p * (1.0 - p)
    K = 2.0 * lam * math.sqrt(2.0 * w)
    val = math.exp(-lam * t) * (
        0.5 * lam * np.asarray(i0_occupation(K, t, s_arr))
        + 0.25 * (1.0 + 1.0 / (2.0 * w)) * np.asarray(i0_occupation_dt(K, t, s_arr))
        + np.asarray(i0_occupation_ds(K, t, s_arr)) / (8.0 * w)
    )
    return float(val) if np.ndim(s) == 0 else val


def oblique_charfn_noref(params, t, alpha) -> complex:
    """``E[exp(i alpha T(t)); Y(t) = c T(t)]`` for ``p + q = 1``."""
    pr = params_of(params)
    p = require_no_reflection(pr)
    t = check_time(t)
    alpha = check_finite("alpha", alpha)
    lam = pr.lam
    w = p * (1.0 - p)
    ch, sh = damped_cosh_sinhc(complex(-lam * t), complex(8.0 * lam * lam * w - alpha * alpha), 0.5 * t)
    N = 4.0 * w * (2.0 * lam + 1j * alpha) - 1j * alpha * (1.0 + 2.0 * w)
    body = (1.0 + 2.0 * w) / (8.0 * w) * ch + N / (8.0 * w) * sh
    return complex(cmath.exp(0.5j * alpha * t) * body - (2 * p - 1) ** 2 / (8.0 * w) * math.exp(-lam * t))


def oblique_charfn_pq(params, t, alpha) -> complex:
    """``E[exp(i alpha T(t)); Y(t) = c T(t)]`` for ``p = q``."""
    pr = params_of(params)
    p = require_symmetric(pr)
    t = check_time(t)
    alpha = check_finite("alpha", alpha)
    lam = pr.lam
    radicand = lam * lam * (12 * p * p - 4 * p + 1) - alpha * alpha - 2j * alpha * lam * (1 - 2 * p)
    M = lam - 1j * alpha + 6.0 * lam * p
    ch, sh = damped_cosh_sinhc(complex(-0.5 * lam * (1 + 2 * p) * t), complex(radicand), 0.5 * t)
    return complex(cmath.exp(0.5j * alpha * t) * (0.75 * ch + 0.25 * M * sh))


def oblique_prob_pq(params, t) -> float:
    """``P(Y(t) = c T(t))`` for ``p = q``."""
    return oblique_charfn_pq(params, t, 0.0).real


