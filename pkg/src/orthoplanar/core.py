"""Parameters, directions and the state/region vocabulary shared by the package.

The motion moves at speed ``c`` along one of the four axis directions
``d_j = (cos(j*pi/2), sin(j*pi/2))``.  At the epochs of a Poisson process of
rate ``lam`` it turns counter-clockwise with probability ``p``, clockwise with
probability ``q`` and reverses with probability ``1 - p - q``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class OrthoPlanarError(Exception):
    """Base class for errors raised by this package."""


class NonPositiveRate(OrthoPlanarError, ValueError):
    pass


class InvalidProbability(OrthoPlanarError, ValueError):
    pass


class DomainError(OrthoPlanarError, ValueError):
    """Argument outside the open support of a density or formula."""


class UnsupportedRegime(OrthoPlanarError, ValueError):
    """The requested quantity does not exist for these parameters."""


@dataclass(frozen=True)
class ModelParams:
    """Rate ``lam``, speed ``c`` and turn probabilities ``p`` (CCW), ``q`` (CW)."""

    lam: float
    c: float
    p: float
    q: float

    @property
    def r(self) -> float:
        """Reflection probability ``1 - p - q``."""
        return 1.0 - self.p - self.q

    @property
    def no_reflection(self) -> bool:
        return self.p + self.q == 1.0

    @property
    def symmetric(self) -> bool:
        return self.p == self.q


def validate_params(lam, c, p, q) -> ModelParams:
    """Check the raw inputs and return a :class:`ModelParams`.

    Raises
    ------
    NonPositiveRate
        If ``lam <= 0`` or ``c <= 0``.
    InvalidProbability
        If ``p < 0``, ``q < 0`` or ``p + q > 1``.
    """
    lam, c, p, q = float(lam), float(c), float(p), float(q)
    if not lam > 0.0:
        raise NonPositiveRate(f"rate must be positive, got lam={lam!r}")
    if not c > 0.0:
        raise NonPositiveRate(f"speed must be positive, got c={c!r}")
    if not (p >= 0.0 and q >= 0.0):
        raise InvalidProbability(f"turn probabilities must be nonnegative, got p={p!r}, q={q!r}")
    if p + q > 1.0:
        raise InvalidProbability(f"p + q must not exceed 1, got p + q = {p + q!r}")
    return ModelParams(lam, c, p, q)


class Direction(enum.IntEnum):
    """Axis direction ``d_j``; arithmetic on the index is mod 4."""

    EAST = 0
    NORTH = 1
    WEST = 2
    SOUTH = 3

    @classmethod
    def of(cls, index: int) -> Direction:
        return cls(index % 4)

    @property
    def vertical(self) -> bool:
        return self.value % 2 == 1

    @property
    def unit(self) -> tuple[int, int]:
        return _UNIT[self.value]


# exact integer components of d_j, no trigonometry
_UNIT = ((1, 0), (0, 1), (-1, 0), (0, -1))
DX = tuple(u[0] for u in _UNIT)
DY = tuple(u[1] for u in _UNIT)


class TurnKind(enum.IntEnum):
    CCW = 0
    CW = 1
    REFLECT = 2


_TURN_SHIFT = {TurnKind.CCW: 1, TurnKind.CW: -1, TurnKind.REFLECT: 2}


def apply_turn(direction: int, kind: TurnKind) -> Direction:
    return Direction.of(int(direction) + _TURN_SHIFT[TurnKind(kind)])


def sample_turn(params: ModelParams, u: float) -> TurnKind:
    """Map a uniform draw ``u`` in [0, 1) to a turn.

    The partition is ``[0, p)`` -> CCW, ``[p, p+q)`` -> CW, the rest -> REFLECT.
    """
    if u < params.p:
        return TurnKind.CCW
    if u < params.p + params.q:
        return TurnKind.CW
    return TurnKind.REFLECT


@dataclass
class PathHistory:
    """Flags summarising the sequence of turns seen so far.

    ``only_reflections`` stays true while every event is a reversal;
    ``alternating_turns`` stays true while no reversal occurred and the
    rotations strictly alternate CCW/CW.  Both are true before any event and
    never become true again once false.  ``initial_direction`` fixes the
    diagonal axis and, with ``first_turn``, the side of the square.
    """

    initial_direction: Direction = Direction.EAST
    only_reflections: bool = True
    alternating_turns: bool = True
    first_turn: TurnKind | None = None
    last_turn: TurnKind | None = None

    def record(self, kind: TurnKind) -> None:
        if self.first_turn is None:
            self.first_turn = kind
        if kind is TurnKind.REFLECT:
            self.alternating_turns = False
        else:
            self.only_reflections = False
            if self.last_turn is kind:
                self.alternating_turns = False
        self.last_turn = kind


@dataclass
class MotionState:
    """Position, elapsed time, current direction and path bookkeeping."""

    x: float = 0.0
    y: float = 0.0
    t: float = 0.0
    direction: Direction = Direction.EAST
    t_vertical: float = 0.0
    n_events: int = 0
    history: PathHistory = field(default_factory=PathHistory)


class RegionKind(enum.IntEnum):
    VERTEX = 0
    SIDE = 1
    DIAGONAL = 2
    INTERIOR = 3


class Axis(enum.IntEnum):
    HORIZONTAL = 0
    VERTICAL = 1


@dataclass(frozen=True)
class Vertex:
    """No event occurred: the particle sits at ``c*t*d_direction``."""

    direction: Direction
    kind = RegionKind.VERTEX


@dataclass(frozen=True)
class SideInterior:
    """Open side of the square in the given quadrant.

    ``eta`` is the coordinate along the side after rotating the quadrant onto
    the first one, i.e. ``x - y`` for the side ``x + y = c t``.
    """

    quadrant: int
    eta: float
    kind = RegionKind.SIDE


@dataclass(frozen=True)
class DiagonalInterior:
    """Open segment of one of the two axes through the origin."""

    axis: Axis
    coordinate: float
    kind = RegionKind.DIAGONAL


@dataclass(frozen=True)
class Interior:
    kind = RegionKind.INTERIOR


RegionClass = Vertex | SideInterior | DiagonalInterior | Interior


def rotate_to_first_quadrant(x, y, quadrant: int):
    """Rotate ``(x, y)`` by ``-quadrant * pi/2`` (exact for integer quadrants)."""
    k = quadrant % 4
    if k == 0:
        return x, y
    if k == 1:
        return y, -x
    if k == 2:
        return -x, -y
    return -y, x
