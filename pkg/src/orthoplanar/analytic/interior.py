"""Characteristic function of ``(X(t), Y(t))`` when reversals are impossible (``p + q = 1``).

``u(t) = e^{lam t} E[exp(i(alpha X + beta Y))]`` solves a fourth-order linear
ODE whose characteristic polynomial is ``D^4 - S D^2 + P`` with

    S = 4 lam^2 p (1-p) - c^2 (alpha^2 + beta^2)
    P = c^4 alpha^2 beta^2 - lam^4 (2p - 1)^2

so the rates are ``+-(A+B)`` and ``+-(A-B)`` with ``(A+B)^2, (A-B)^2`` the two
roots of ``w^2 - S w + P``.  The closed form divides by ``A B`` and ``A - B``;
near those zeros the same solution is rebuilt from divided differences of
entire functions of the squared rates.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ._checks import check_finite, check_time, params_of, require_no_reflection
from ._hyper import damped_cosh_sinhc, real_part

# relative gap between the squared rates below which the closed form is abandoned
DEGENERACY_THRESHOLD = 1e-2
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _initial_derivatives(lam, c, s):
    """``u, u', u'', u'''`` at ``t = 0``."""
    return 1.0, lam, lam * lam - 0.5 * c * c * s, lam ** 3 - lam * c * c * s


def _k_form(lam, c, p, t, alpha, beta):
    s = alpha * alpha + beta * beta
    inner = cmath.sqrt(c ** 4 * alpha * alpha * beta * beta - lam ** 4 * (2 * p - 1) ** 2)
    base = 4 * lam * lam * p * (1 - p) - c * c * s
    A = 0.5 * cmath.sqrt(base + 2 * inner)
    B = 0.5 * cmath.sqrt(base - 2 * inner)
    k0 = (2 * lam ** 2 - c * c * s - 2 * (A - B) ** 2) / (8 * A * B)
    k1 = (lam ** 3 - lam * c * c * s - lam * (A - B) ** 2) / (4 * A * B * (A + B))
    k2 = (2 * lam ** 2 - c * c * s - 2 * (A + B) ** 2) / (8 * A * B)
    k3 = (lam ** 3 - lam * c * c * s - lam * (A + B) ** 2) / (4 * A * B * (A - B))
    ch_p, sh_p = damped_cosh_sinhc(complex(-lam * t), complex((A + B) ** 2), t)
    ch_m, sh_m = damped_cosh_sinhc(complex(-lam * t), complex((A - B) ** 2), t)
    return k0 * ch_p + k1 * (A + B) * sh_p - k2 * ch_m - k3 * (A - B) * sh_m


def _squared_rates(S, P):
    disc = cmath.sqrt(S * S - 4 * P)
    big = 0.5 * (S + disc) if abs(S + disc) >= abs(S - disc) else 0.5 * (S - disc)
    small = P / big if big != 0 else 0.0
    return complex(big), complex(small)


def _fg(shift, z, t):
    """Damped ``F(z) = cosh(sqrt z t)``, ``G(z) = sinh(sqrt z t)/sqrt z`` and their z-derivatives."""
    F, G = damped_cosh_sinhc(complex(shift), complex(z), t)
    w = z * t * t
    if abs(w) < 1.0:
        # G'(z) = sum_k k z^{k-1} t^{2k+1}/(2k+1)!, scaled by the damping factor
        scale = cmath.exp(shift)
        dG = 0.0
        term = t ** 3
        for k in range(1, 30):
            dG += k * term / math.factorial(2 * k + 1)
            term *= z * t * t
        dG *= scale
    else:
        dG = (t * F - G) / (2 * z)
    return F, G, 0.5 * t * G, dG


def _divided(shift, z1, z2, t):
    """Divided differences ``F[z1, z2]``, ``G[z1, z2]`` by Gauss-Legendre over the segment."""
    dF = dG = 0.0
    for x, wgt in zip(_GL_NODES, _GL_WEIGHTS):
        z = z2 + 0.5 * (x + 1.0) * (z1 - z2)
        _, _, f1, g1 = _fg(shift, z, t)
        dF += 0.5 * wgt * f1
        dG += 0.5 * wgt * g1
    return dF, dG


def _stable_form(lam, c, p, t, alpha, beta):
    s = alpha * alpha + beta * beta
    S = 4 * lam * lam * p * (1 - p) - c * c * s
    P = c ** 4 * alpha * alpha * beta * beta - lam ** 4 * (2 * p - 1) ** 2
    a2, b2 = _squared_rates(S, P)
    u0, u1, u2, u3 = _initial_derivatives(lam, c, s)
    shift = -lam * t
    Fa, Ga, _, _ = _fg(shift, a2, t)
    Fb, Gb, _, _ = _fg(shift, b2, t)
    scale2 = lam * lam + c * c * s
    if abs(a2 - b2) < 1e-3 * scale2:
        dF, dG = _divided(shift, a2, b2, t)
    else:
        dF, dG = (Fa - Fb) / (a2 - b2), (Ga - Gb) / (a2 - b2)
    even = u2 * dF + u0 * (Fb - b2 * dF)
    odd = u3 * dG + u1 * (Gb - b2 * dG)
    return even + odd


def _degenerate(lam, c, p, alpha, beta) -> bool:
    s = alpha * alpha + beta * beta
    S = 4 * lam * lam * p * (1 - p) - c * c * s
    P = c ** 4 * alpha * alpha * beta * beta - lam ** 4 * (2 * p - 1) ** 2
    a2, b2 = _squared_rates(S, P)
    scale2 = lam * lam + c * c * s
    return min(abs(a2 - b2), abs(a2), abs(b2)) < DEGENERACY_THRESHOLD * scale2


def interior_charfn_noref(params, t, alpha, beta) -> complex:
    """``E[exp(i(alpha X(t) + beta Y(t)))]`` over the whole square, for ``p + q = 1``.

    Real because the law is invariant under ``(x, y) -> (-x, -y)``.
    """
    pr = params_of(params)
    p = require_no_reflection(pr)
    t = check_time(t)
    alpha = check_finite("alpha", alpha)
    beta = check_finite("beta", beta)
    lam, c = pr.lam, pr.c
    if _degenerate(lam, c, p, alpha, beta):
        val = _stable_form(lam, c, p, t, alpha, beta)
    else:
        val = _k_form(lam, c, p, t, alpha, beta)
    return complex(real_part(complex(val), "interior characteristic function"), 0.0)
