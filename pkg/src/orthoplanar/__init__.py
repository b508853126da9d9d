"""Planar orthogonal random motion with rotations and reversals.

Closed-form laws live in :mod:`orthoplanar.analytic`, the simulator in
:mod:`orthoplanar.sim`, estimators in :mod:`orthoplanar.mc` and the
cross-checks in :mod:`orthoplanar.verify`.
"""

from .core import (
    Direction,
    DomainError,
    InvalidProbability,
    ModelParams,
    NonPositiveRate,
    OrthoPlanarError,
    TurnKind,
    UnsupportedRegime,
    validate_params,
)

__version__ = "0.1.0"
