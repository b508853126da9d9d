"""Branch-free evaluation of ``e^shift cosh(sqrt(z) tau)`` and ``e^shift sinh(sqrt(z) tau)/sqrt(z)``.

Every characteristic function here has the shape
``(1 + k/R) e^{R t} + (1 - k/R) e^{-R t}`` with ``R = sqrt(z)``; it equals
``2 cosh(R t) + 2 k sinh(R t)/R``, which is entire in ``z``.  Evaluating that
form removes the 0/0 at ``z = 0`` and makes the choice of square-root branch
irrelevant.
"""

from __future__ import annotations

import cmath
import math

_SERIES_RADIUS = 0.25
_SERIES_TERMS = 20


def _is_real(v) -> bool:
    return not isinstance(v, complex) or v.imag == 0.0


def _series(w):
    """cosh(sqrt(w)) and sinh(sqrt(w))/sqrt(w) from their Taylor series in w."""
    ch = sh = 0.0
    term = 1.0
    for k in range(_SERIES_TERMS):
        ch += term / math.factorial(2 * k)
        sh += term / math.factorial(2 * k + 1)
        term *= w
    return ch, sh


def damped_cosh_sinhc(shift, z, tau):
    """Return ``(e^shift cosh(sqrt(z) tau), e^shift sinh(sqrt(z) tau)/sqrt(z))``.

    Real inputs give real outputs; ``z`` may be any real or complex number.
    """
    w = z * tau * tau
    if abs(w) < _SERIES_RADIUS:
        ch, sh = _series(w)
        scale = cmath.exp(shift) if isinstance(shift, complex) else math.exp(shift)
        return scale * ch, scale * sh * tau
    if _is_real(z) and _is_real(shift):
        z = float(z.real if isinstance(z, complex) else z)
        shift = float(shift.real if isinstance(shift, complex) else shift)
        if z > 0.0:
            root = math.sqrt(z)
            ep = math.exp(shift + root * tau)
            em = math.exp(shift - root * tau)
            return 0.5 * (ep + em), 0.5 * (ep - em) / root
        omega = math.sqrt(-z)
        scale = math.exp(shift)
        return scale * math.cos(omega * tau), scale * math.sin(omega * tau) / omega
    root = cmath.sqrt(z)
    ep = cmath.exp(shift + root * tau)
    em = cmath.exp(shift - root * tau)
    return 0.5 * (ep + em), 0.5 * (ep - em) / root


def damped_coshm1(shift, z, tau):
    """``e^shift (cosh(sqrt(z) tau) - 1)`` for real ``z`` without cancellation."""
    w = z * tau * tau
    if abs(w) < _SERIES_RADIUS:
        ch, _ = _series(w)
        # ch - 1 = w/2 + w^2/24 + ... summed directly
        tail = 0.0
        term = w
        for k in range(1, _SERIES_TERMS):
            tail += term / math.factorial(2 * k)
            term *= w
        return math.exp(shift) * tail
    if z > 0.0:
        x = math.sqrt(z) * tau
        # cosh x - 1 = e^x (1 - e^-x)^2 / 2, with e^shift folded into the exponent
        return 0.5 * math.exp(shift + x) * math.expm1(-x) ** 2
    half = 0.5 * math.sqrt(-z) * tau
    return -2.0 * math.exp(shift) * math.sin(half) ** 2


def real_part(value: complex, what: str, rtol: float = 1e-10) -> float:
    """Drop an imaginary residue that symmetry says must vanish."""
    if not isinstance(value, complex):
        return float(value)
    if abs(value.imag) > rtol * max(1.0, abs(value.real)):
        raise ArithmeticError(f"{what}: imaginary residue {value.imag!r} exceeds tolerance")
    return value.real
