import pytest
from hypothesis import given, strategies as st

from orthoplanar.core import (
    Direction,
    DX,
    DY,
    InvalidProbability,
    ModelParams,
    NonPositiveRate,
    PathHistory,
    TurnKind,
    apply_turn,
    rotate_to_first_quadrant,
    sample_turn,
    validate_params,
)


def test_validate_accepts_boundary_cases():
    assert validate_params(1, 1, 0.5, 0.5).r == 0.0
    assert validate_params(2.0, 0.5, 0.0, 0.0).r == 1.0
    assert validate_params(1, 1, 1.0, 0.0).no_reflection


@pytest.mark.parametrize("lam,c", [(0, 1), (-1, 1), (1, 0), (1, -2), (float("nan"), 1)])
def test_nonpositive_rate(lam, c):
    with pytest.raises(NonPositiveRate):
        validate_params(lam, c, 0.2, 0.2)


@pytest.mark.parametrize("p,q", [(-0.1, 0.2), (0.2, -0.1), (0.6, 0.5), (float("nan"), 0.1)])
def test_invalid_probability(p, q):
    with pytest.raises(InvalidProbability):
        validate_params(1, 1, p, q)


def test_sample_turn_partition():
    pr = ModelParams(1, 1, 0.3, 0.4)
    assert sample_turn(pr, 0.0) is TurnKind.CCW
    assert sample_turn(pr, 0.2999) is TurnKind.CCW
    assert sample_turn(pr, 0.3) is TurnKind.CW
    assert sample_turn(pr, 0.6999) is TurnKind.CW
    assert sample_turn(pr, 0.7) is TurnKind.REFLECT
    assert sample_turn(pr, 0.999999) is TurnKind.REFLECT


def test_no_reflection_when_p_plus_q_is_one():
    pr = ModelParams(1, 1, 0.5, 0.5)
    assert all(sample_turn(pr, u / 1000) is not TurnKind.REFLECT for u in range(1000))


@given(st.integers(0, 3))
def test_turns(d):
    assert apply_turn(d, TurnKind.CCW) == (d + 1) % 4
    assert apply_turn(d, TurnKind.CW) == (d - 1) % 4
    assert apply_turn(d, TurnKind.REFLECT) == (d + 2) % 4
    assert apply_turn(apply_turn(d, TurnKind.CCW), TurnKind.CW) == d


def test_unit_vectors_are_exact():
    assert [Direction(j).unit for j in range(4)] == [(1, 0), (0, 1), (-1, 0), (0, -1)]
    assert DX == (1, 0, -1, 0) and DY == (0, 1, 0, -1)
    assert Direction.of(-1) is Direction.SOUTH
    assert Direction.NORTH.vertical and not Direction.WEST.vertical


def test_history_flags():
    h = PathHistory()
    assert h.only_reflections and h.alternating_turns
    for k in (TurnKind.CCW, TurnKind.CW, TurnKind.CCW):
        h.record(k)
    assert h.alternating_turns and not h.only_reflections and h.first_turn is TurnKind.CCW
    h.record(TurnKind.CCW)
    assert not h.alternating_turns
    h.record(TurnKind.CW)
    assert not h.alternating_turns

    h = PathHistory()
    h.record(TurnKind.REFLECT)
    h.record(TurnKind.REFLECT)
    assert h.only_reflections and not h.alternating_turns


@given(st.floats(-10, 10), st.floats(-10, 10), st.integers(0, 3))
def test_rotation_preserves_l1_norm_and_inverts(x, y, k):
    xr, yr = rotate_to_first_quadrant(x, y, k)
    assert abs(xr) + abs(yr) == abs(x) + abs(y)
    assert rotate_to_first_quadrant(xr, yr, (4 - k) % 4) == (x, y)


def test_rotation_maps_quadrant_onto_first():
    for k in range(4):
        # the point (1, 1) rotated by k quarter turns sits in quadrant k
        pts = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
        assert rotate_to_first_quadrant(*pts[k], k) == (1, 1)
