import io
import math

import numpy as np
import pytest

from orthoplanar import sim
from orthoplanar.core import (
    Axis,
    DiagonalInterior,
    Direction,
    DomainError,
    Interior,
    ModelParams,
    PathHistory,
    SideInterior,
    TurnKind,
    Vertex,
)

BASE = ModelParams(1.0, 1.0, 0.3, 0.4)
ULP4 = 4 * np.finfo(float).eps


def test_support_and_triangle_invariants_scalar():
    pr = ModelParams(2.0, 1.5, 0.2, 0.5)
    t = 1.7
    for seed in range(500):
        o = sim.simulate(pr, t, seed)
        x, y = o.final.x, o.final.y
        assert abs(x) + abs(y) <= pr.c * t * (1 + ULP4)
        assert abs(y) <= pr.c * o.t_vertical
        assert abs(x) <= pr.c * (t - o.t_vertical) * (1 + ULP4) + ULP4


def test_batch_invariants():
    pr = ModelParams(3.0, 0.7, 0.25, 0.35)
    t = 2.0
    b = sim.simulate_batch(pr, t, 100_000, seed=11)
    ct = pr.c * t
    assert np.all(np.abs(b.x) + np.abs(b.y) <= ct * (1 + ULP4))
    assert np.all(np.abs(b.y) <= pr.c * b.t_vertical)
    assert np.all(np.abs(b.x) <= pr.c * b.t_horizontal)
    np.testing.assert_allclose(b.t_vertical + b.t_horizontal, t, rtol=1e-13)


def test_history_decides_geometry():
    pr = ModelParams(1.0, 1.0, 0.3, 0.4)
    b = sim.simulate_batch(pr, 1.0, 50_000, seed=3)
    r = b.region
    side = r == 1
    np.testing.assert_allclose(np.abs(b.x[side]) + np.abs(b.y[side]), 1.0, rtol=1e-14)
    diag = r == 2
    horiz = diag & (b.dir0 % 2 == 0)
    assert np.all(b.y[horiz] == 0.0) and np.all(b.x[diag & ~horiz] == 0.0)
    # eta recomputed from the quadrant sign pattern
    k = b.side_quadrant[side]
    assert np.all(np.sign(b.x[side]) == np.array([1, -1, -1, 1])[k])
    assert np.all(np.sign(b.y[side]) == np.array([1, 1, -1, -1])[k])
    assert np.all(np.abs(b.eta[side]) < 1.0)


def test_no_reflection_law():
    pr = ModelParams(1.0, 1.0, 0.5, 0.5)
    for seed in range(200):
        o = sim.simulate(pr, 3.0, seed)
        h = o.final.history
        if o.final.n_events:
            assert not h.only_reflections
        on_boundary = math.isclose(abs(o.final.x) + abs(o.final.y), 3.0, rel_tol=1e-14)
        assert on_boundary == h.alternating_turns


def test_no_event_probability_scalar_engine():
    # smaller n than the batch check: the scalar engine is pure Python
    n = 20_000
    hits = sum(sim.simulate(BASE, 1.0, np.random.default_rng([9, i])).final.n_events == 0 for i in range(n))
    m = hits / n
    assert abs(m - math.exp(-1)) <= 4 * math.sqrt(m * (1 - m) / n)


def test_region_frequencies_batch():
    n = 1_000_000
    b = sim.simulate_batch(BASE, 1.0, n, seed=2024)
    r = b.region
    for freq, target in [((r == 0).mean(), math.exp(-1)), (((r == 0) | (r == 2)).mean(), math.exp(-0.7))]:
        assert abs(freq - target) <= 4 * math.sqrt(target * (1 - target) / n)


def test_classify_examples():
    h = PathHistory(initial_direction=Direction.EAST)
    assert sim.classify(h, 0, (1.0, 0.0), BASE, 1.0) == Vertex(Direction.EAST)

    h = PathHistory(initial_direction=Direction.EAST)
    for k in (TurnKind.CCW, TurnKind.CW, TurnKind.CCW):
        h.record(k)
    reg = sim.classify(h, 3, (0.6, 0.4), BASE, 1.0)
    assert isinstance(reg, SideInterior) and reg.quadrant == 0
    assert reg.eta == pytest.approx(0.2)

    h = PathHistory(initial_direction=Direction.EAST)
    h.record(TurnKind.CW)
    reg = sim.classify(h, 1, (0.7, -0.3), BASE, 1.0)
    # rotating quadrant 3 onto the first maps (0.7, -0.3) to (0.3, 0.7)
    assert reg.quadrant == 3 and reg.eta == pytest.approx(0.3 - 0.7)

    h = PathHistory(initial_direction=Direction.EAST)
    h.record(TurnKind.REFLECT)
    h.record(TurnKind.REFLECT)
    assert sim.classify(h, 2, (0.2, 0.0), BASE, 1.0) == DiagonalInterior(Axis.HORIZONTAL, 0.2)

    h = PathHistory(initial_direction=Direction.SOUTH)
    h.record(TurnKind.REFLECT)
    assert sim.classify(h, 1, (0.0, 0.1), BASE, 1.0).axis is Axis.VERTICAL

    h = PathHistory()
    h.record(TurnKind.CCW)
    h.record(TurnKind.REFLECT)
    assert sim.classify(h, 2, (0.1, 0.1), BASE, 1.0) == Interior()


def test_reproducible():
    a = sim.simulate(BASE, 2.0, 77)
    b = sim.simulate(BASE, 2.0, 77)
    assert a == b
    b1 = sim.simulate_batch(BASE, 1.0, 200_000, seed=5, threads=1)
    b4 = sim.simulate_batch(BASE, 1.0, 200_000, seed=5, threads=4)
    for f in ("x", "y", "t_vertical", "n_events", "alternating", "only_reflections", "never_down"):
        np.testing.assert_array_equal(getattr(b1, f), getattr(b4, f))


def test_bad_horizon():
    with pytest.raises(DomainError):
        sim.simulate(BASE, 0.0, 1)
    with pytest.raises(DomainError):
        sim.export_trajectory(BASE, -1.0, 1)


def test_trajectory_structure_and_replay():
    for seed in range(200):
        tr = sim.export_trajectory(BASE, 2.0, seed)
        out = sim.simulate(BASE, 2.0, seed)
        assert len(tr.breakpoints) == out.final.n_events + 2
        assert tr.breakpoints[0][:3] == (0.0, 0.0, 0.0)
        ts = [bp[0] for bp in tr.breakpoints]
        assert all(a < b for a, b in zip(ts, ts[1:]))
        assert tr.breakpoints[-1][1:3] == (out.final.x, out.final.y)
        assert abs(tr.t_vertical() - out.t_vertical) <= 1e-12
        for (t0, x0, y0, d), (t1, x1, y1, _) in zip(tr.breakpoints, tr.breakpoints[1:]):
            ux, uy = Direction(d).unit
            assert math.isclose(x1 - x0, BASE.c * (t1 - t0) * ux, abs_tol=1e-12)
            assert math.isclose(y1 - y0, BASE.c * (t1 - t0) * uy, abs_tol=1e-12)
        for t, s, y in tr.triangle():
            assert abs(y) <= BASE.c * s and 0 <= s <= t


def test_zero_event_trajectory():
    pr = ModelParams(1e-9, 2.0, 0.3, 0.3)
    tr = sim.export_trajectory(pr, 1.5, 4)
    assert tr.n_events == 0 and len(tr.breakpoints) == 2
    _, x, y, _ = tr.breakpoints[-1]
    assert math.hypot(x, y) == 3.0


def test_csv_round_trip_is_exact():
    tr = sim.export_trajectory(ModelParams(3.0, 1.1, 0.3, 0.4), 2.0, 8)
    text = sim.trajectory_csv(tr)
    assert text.startswith("t,x,y,dir\n") and "\r" not in text
    back = sim.Trajectory.from_csv(io.StringIO(text), tr.c)
    assert back.breakpoints == tr.breakpoints
