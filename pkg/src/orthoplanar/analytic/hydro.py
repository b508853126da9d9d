"""Diffusive scaling limit (``lam, c -> inf`` with ``c^2/lam = 1``)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import InvalidProbability
from ._checks import check_time, params_of


@dataclass(frozen=True)
class HydroCoeff:
    """Diffusion coefficient ``D`` of the limiting heat equation ``u_t = D (u_xx + u_yy)``."""

    D: float


def _coeff(p, q):
    # works for floats and Fractions alike
    return (2 - p - q) / (4 * ((1 - p) ** 2 + (1 - q) ** 2))


def hydro_coeff(p, q) -> HydroCoeff:
    """``D = (1/4) ((1-p) + (1-q)) / ((1-p)^2 + (1-q)^2)``."""
    p, q = float(p), float(q)
    if p < 0 or q < 0 or p + q > 1:
        raise InvalidProbability(f"need p, q >= 0 and p + q <= 1, got p={p!r}, q={q!r}")
    # sorted so that D(p, q) == D(q, p) holds bit for bit
    return HydroCoeff(_coeff(*sorted((p, q))))


def limiting_variance_y(p, q, t):
    """Variance of the Gaussian factor of the joint ``(T, Y)`` limit.

    Written as ``t (2 - p - q) / (2 ((1-p)^2 + (1-q)^2))``; equal to
    ``2 D t``.  Exact when given ``Fraction`` arguments.
    """
    return t * (2 - p - q) / (2 * ((1 - p) ** 2 + (1 - q) ** 2))


@dataclass(frozen=True)
class JointHydroLimit:
    """Limit law of ``(T(t), Y(t))``: ``T`` concentrates at ``s_star``, ``Y`` is centred Gaussian."""

    density_y: float
    s_star: float
    variance: float
    at_s_star: bool


def joint_hydro_limit(params, t, s, y) -> JointHydroLimit:
    """Evaluate the limiting law at ``(s, y)``.

    The Gaussian factor in ``y`` is returned as ``density_y``; the time factor
    is ``delta(s - t/2)``, reported through ``s_star`` and ``at_s_star``.
    """
    pr = params_of(params)
    t = check_time(t, positive=True)
    D = hydro_coeff(pr.p, pr.q).D
    var = limiting_variance_y(pr.p, pr.q, t)
    assert math.isclose(var, 2.0 * D * t, rel_tol=1e-12)
    dens = math.exp(-float(y) ** 2 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    s_star = 0.5 * t
    return JointHydroLimit(dens, s_star, var, math.isclose(float(s), s_star, rel_tol=0.0, abs_tol=1e-12 * t))
