"""Event-driven simulation of the orthogonal planar motion.

Two engines share the same stochastic model:

* :func:`simulate` / :func:`export_trajectory` follow one path with a
  ``numpy.random.Generator``.  The stream layout is fixed: one uniform for the
  initial direction, then per epoch one exponential gap and, if the epoch
  falls before ``t_end``, one uniform for the turn.
* :func:`simulate_batch` advances blocks of ``BLOCK_SIZE`` paths in lockstep.
  Block ``b`` draws from ``SeedSequence(seed, spawn_key=(b,))`` so the output
  depends only on ``(seed, n)``, never on how blocks are scheduled.

Positions come from the time spent along each direction,
``x = c (tau_0 - tau_2)``, ``y = c (tau_1 - tau_3)``, ``T = tau_1 + tau_3``,
which makes ``|y| <= c T`` hold exactly in floating point.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .core import (
    Axis,
    DiagonalInterior,
    Direction,
    DomainError,
    Interior,
    ModelParams,
    MotionState,
    PathHistory,
    RegionClass,
    RegionKind,
    SideInterior,
    TurnKind,
    Vertex,
    apply_turn,
    rotate_to_first_quadrant,
    sample_turn,
)

BLOCK_SIZE = 1 << 16


def _rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _check_t_end(t_end) -> float:
    t_end = float(t_end)
    if not (math.isfinite(t_end) and t_end > 0.0):
        raise DomainError(f"t_end must be finite and > 0, got {t_end!r}")
    return t_end


@dataclass
class SimOutcome:
    """Terminal state of one path and its classification."""

    final: MotionState
    region: RegionClass
    t_vertical: float
    tau: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    @property
    def never_down(self) -> bool:
        """True when no time was spent moving along ``d_3``, i.e. ``Y = c T``."""
        return self.tau[3] == 0.0


def classify(history: PathHistory, n_events: int, position, params: ModelParams, t_end: float) -> RegionClass:
    """Region of the terminal point, decided from the turn history alone.

    ``position`` is only used for the coordinate carried by the side and
    diagonal classes.
    """
    x, y = position
    d0 = history.initial_direction
    if n_events == 0:
        return Vertex(Direction(d0))
    if history.alternating_turns:
        # the first rotation picks which of the two sides adjacent to d0
        k = int(d0) if history.first_turn is TurnKind.CCW else (int(d0) - 1) % 4
        xr, yr = rotate_to_first_quadrant(x, y, k)
        return SideInterior(k, xr - yr)
    if history.only_reflections:
        axis = Axis.VERTICAL if Direction(d0).vertical else Axis.HORIZONTAL
        return DiagonalInterior(axis, y if axis is Axis.VERTICAL else x)
    return Interior()


def _run_path(params: ModelParams, t_end: float, rng, on_break: Callable | None = None):
    """Shared path generator; calls ``on_break(t, tau, direction)`` at each breakpoint."""
    gen = _rng(rng)
    lam = params.lam
    d = Direction.of(int(gen.random() * 4.0))
    hist = PathHistory(initial_direction=d)
    tau = [0.0, 0.0, 0.0, 0.0]
    now = 0.0
    n = 0
    if on_break is not None:
        on_break(0.0, tau, d)
    while True:
        gap = gen.exponential(1.0 / lam)
        if now + gap >= t_end:
            tau[d] += t_end - now
            break
        tau[d] += gap
        now += gap
        kind = sample_turn(params, gen.random())
        hist.record(kind)
        d = apply_turn(d, kind)
        n += 1
        if on_break is not None:
            on_break(now, tau, d)
    if on_break is not None:
        on_break(t_end, tau, d)
    return d, hist, tau, n


def _xy(c, tau):
    return c * (tau[0] - tau[2]), c * (tau[1] - tau[3])


def simulate(params: ModelParams, t_end, rng) -> SimOutcome:
    """Simulate one path up to ``t_end``; ``rng`` is a Generator or an integer seed."""
    t_end = _check_t_end(t_end)
    d, hist, tau, n = _run_path(params, t_end, rng)
    x, y = _xy(params.c, tau)
    t_vert = tau[1] + tau[3]
    state = MotionState(x=x, y=y, t=t_end, direction=d, t_vertical=t_vert, n_events=n, history=hist)
    region = classify(hist, n, (x, y), params, t_end)
    return SimOutcome(state, region, t_vert, tuple(tau))


@dataclass
class Trajectory:
    """Breakpoints ``(t, x, y, dir)`` at time 0, each epoch, and ``t_end``.

    ``dir`` is the direction followed after the breakpoint (at ``t_end``, the
    direction held at the end).
    """

    c: float
    breakpoints: list[tuple[float, float, float, int]] = field(default_factory=list)

    @property
    def n_events(self) -> int:
        return len(self.breakpoints) - 2

    def t_vertical(self) -> float:
        """Vertical occupation time recomputed from the breakpoints."""
        total = 0.0
        for (t0, _, _, d), (t1, _, _, _) in zip(self.breakpoints, self.breakpoints[1:]):
            if d % 2 == 1:
                total += t1 - t0
        return total

    def triangle(self) -> list[tuple[float, float, float]]:
        """Replay as ``(t, T(t), Y(t))`` rows; ``|Y| <= c T`` on every row."""
        rows = [(0.0, 0.0, 0.0)]
        up = down = 0.0
        for (t0, _, _, d), (t1, _, _, _) in zip(self.breakpoints, self.breakpoints[1:]):
            if d == Direction.NORTH:
                up += t1 - t0
            elif d == Direction.SOUTH:
                down += t1 - t0
            rows.append((t1, up + down, self.c * (up - down)))
        return rows

    def to_csv(self, out: TextIO, path_id: int | None = None) -> None:
        write_rows(out, ["t", "x", "y", "dir"], self.breakpoints, path_id)

    @classmethod
    def from_csv(cls, src: TextIO, c: float) -> Trajectory:
        reader = csv.DictReader(src)
        pts = [(float(r["t"]), float(r["x"]), float(r["y"]), int(r["dir"])) for r in reader]
        return cls(c, pts)


def write_rows(out: TextIO, header: Sequence[str], rows: Iterable[Sequence], path_id: int | None = None,
               write_header: bool = True) -> None:
    """CSV with ``repr`` floats (shortest round-trip) and LF line endings."""
    if write_header:
        out.write(",".join((["path"] if path_id is not None else []) + list(header)) + "\n")
    prefix = f"{path_id}," if path_id is not None else ""
    for row in rows:
        out.write(prefix + ",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row) + "\n")


def export_trajectory(params: ModelParams, t_end, rng) -> Trajectory:
    """Same path as :func:`simulate` for the same stream, with every breakpoint kept."""
    t_end = _check_t_end(t_end)
    traj = Trajectory(params.c)
    c = params.c

    def on_break(t, tau, d):
        x, y = _xy(c, tau)
        traj.breakpoints.append((t, x, y, int(d)))

    _run_path(params, t_end, rng, on_break)
    return traj


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    traj.to_csv(buf)
    return buf.getvalue()


# ---------------------------------------------------------------- batch engine

_SHIFT = np.array([1, 3, 2], dtype=np.int64)  # CCW, CW, REFLECT as index offsets mod 4


@dataclass
class PathBatch:
    """Columnar outcomes of a block of paths (one entry per path)."""

    params: ModelParams
    t: float
    x: np.ndarray
    y: np.ndarray
    t_vertical: np.ndarray
    t_horizontal: np.ndarray
    n_events: np.ndarray
    dir0: np.ndarray
    only_reflections: np.ndarray
    alternating: np.ndarray
    never_down: np.ndarray
    first_turn: np.ndarray

    def __len__(self) -> int:
        return self.x.size

    @property
    def all_vertical(self) -> np.ndarray:
        """``T(t) = t``; tested on the horizontal time, which is exactly zero."""
        return self.t_horizontal == 0.0

    @property
    def region(self) -> np.ndarray:
        """:class:`RegionKind` codes, decided from the history columns."""
        code = np.full(self.x.size, int(RegionKind.INTERIOR), dtype=np.int8)
        code[self.only_reflections] = RegionKind.DIAGONAL
        code[self.alternating] = RegionKind.SIDE
        code[self.n_events == 0] = RegionKind.VERTEX
        return code

    @property
    def side_quadrant(self) -> np.ndarray:
        """Quadrant of the side for alternating paths (meaningless elsewhere)."""
        return np.where(self.first_turn == TurnKind.CW, (self.dir0 - 1) % 4, self.dir0)

    @property
    def eta(self) -> np.ndarray:
        """Side coordinate after rotating the side's quadrant onto the first one."""
        k = self.side_quadrant
        xr = np.select([k == 0, k == 1, k == 2], [self.x, self.y, -self.x], -self.y)
        yr = np.select([k == 0, k == 1, k == 2], [self.y, -self.x, -self.y], self.x)
        return xr - yr


def _simulate_block(params: ModelParams, t: float, m: int, seed: int, block: int,
                    track_history: bool = True) -> PathBatch:
    gen = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block,)))
    lam, p, pq = params.lam, params.p, params.p + params.q
    d = np.floor(gen.random(m) * 4.0).astype(np.int64)
    dir0 = d.copy()
    tau = np.zeros((m, 4))
    left = np.full(m, t)
    n_ev = np.zeros(m, dtype=np.int64)
    only_ref = np.ones(m, dtype=bool)
    alt = np.ones(m, dtype=bool)
    last = np.full(m, -1, dtype=np.int8)
    first = np.full(m, -1, dtype=np.int8)
    idx = np.arange(m)
    while idx.size:
        gap = gen.exponential(1.0 / lam, idx.size)
        di = d[idx]
        hit = gap < left[idx]
        tau[idx, di] += np.where(hit, gap, left[idx])
        idx = idx[hit]
        if not idx.size:
            break
        left[idx] -= gap[hit]
        u = gen.random(idx.size)
        kind = np.where(u < p, 0, np.where(u < pq, 1, 2)).astype(np.int8)
        d[idx] = (d[idx] + _SHIFT[kind]) % 4
        n_ev[idx] += 1
        if track_history:
            refl = kind == 2
            only_ref[idx] &= refl
            alt[idx] &= ~refl & (kind != last[idx])
            last[idx] = kind
            first[idx] = np.where(first[idx] < 0, kind, first[idx])
    c = params.c
    return PathBatch(
        params=params, t=t,
        x=c * (tau[:, 0] - tau[:, 2]),
        y=c * (tau[:, 1] - tau[:, 3]),
        t_vertical=tau[:, 1] + tau[:, 3],
        t_horizontal=tau[:, 0] + tau[:, 2],
        n_events=n_ev,
        dir0=dir0,
        only_reflections=only_ref,
        alternating=alt,
        never_down=tau[:, 3] == 0.0,
        first_turn=first,
    )


def block_sizes(n: int, block_size: int = BLOCK_SIZE) -> list[int]:
    full, rest = divmod(int(n), block_size)
    return [block_size] * full + ([rest] if rest else [])


def map_blocks(params: ModelParams, t, n: int, seed: int, fn: Callable[[PathBatch], object],
               threads: int | None = None, track_history: bool = True) -> list:
    """Apply ``fn`` to every block of ``n`` simulated paths; results come back in block order."""
    t = _check_t_end(t)
    if n < 1:
        raise ValueError("n must be >= 1")
    sizes = block_sizes(n)

    def work(b):
        return fn(_simulate_block(params, t, sizes[b], seed, b, track_history))

    if threads is None or threads <= 1 or len(sizes) == 1:
        return [work(b) for b in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, range(len(sizes))))


def simulate_batch(params: ModelParams, t, n: int, seed: int, threads: int | None = None) -> PathBatch:
    """All ``n`` paths concatenated into one :class:`PathBatch`."""
    parts = map_blocks(params, t, n, seed, lambda b: b, threads)
    cols = {f: np.concatenate([getattr(b, f) for b in parts])
            for f in ("x", "y", "t_vertical", "t_horizontal", "n_events", "dir0", "only_reflections",
                      "alternating", "never_down", "first_turn")}
    return PathBatch(params=params, t=float(t), **cols)
