"""Argument checks shared by the closed-form modules."""

from __future__ import annotations

import math

from ..core import DomainError, ModelParams, UnsupportedRegime, validate_params

# tolerance for recognising p + q = 1 and p = q in floating point
REGIME_TOL = 1e-12


def params_of(params) -> ModelParams:
    if isinstance(params, ModelParams):
        return validate_params(params.lam, params.c, params.p, params.q)
    return validate_params(*params)


def check_time(t, *, positive: bool = False) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0 or (positive and t == 0.0):
        bound = "> 0" if positive else ">= 0"
        raise DomainError(f"t must be finite and {bound}, got {t!r}")
    return t


def check_finite(name: str, v) -> float:
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v!r}")
    return v


def require_no_reflection(pr: ModelParams) -> float:
    """Return ``p`` after checking ``p + q = 1`` and ``0 < p < 1``."""
    if abs(pr.p + pr.q - 1.0) > REGIME_TOL:
        raise UnsupportedRegime(f"requires p + q = 1, got p + q = {pr.p + pr.q!r}")
    if pr.p <= 0.0 or pr.p >= 1.0:
        raise DomainError(f"requires 0 < p < 1 when p + q = 1, got p = {pr.p!r}")
    return pr.p


def require_symmetric(pr: ModelParams) -> float:
    if abs(pr.p - pr.q) > REGIME_TOL:
        raise UnsupportedRegime(f"requires p = q, got p={pr.p!r}, q={pr.q!r}")
    return pr.p


def require_reflection(pr: ModelParams) -> float:
    """Return ``r = 1 - p - q`` after checking it is positive."""
    r = pr.r
    if r <= REGIME_TOL:
        raise UnsupportedRegime("no reflections (p + q = 1): the diagonals carry no mass")
    return r
