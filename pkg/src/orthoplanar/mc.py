"""Monte Carlo estimators over the batch simulator.

Every estimator reduces each simulated block to a few sums, then merges the
block sums in block order with :func:`math.fsum`.  The result is a pure
function of ``(params, t, n, seed)``; the thread count only changes speed.
Predicates and functionals are vectorised: they take a :class:`PathBatch`
and return arrays with one entry per path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .core import ModelParams
from .sim import PathBatch, map_blocks

Predicate = Callable[[PathBatch], np.ndarray]


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n: int

    def z(self, expected: float) -> float:
        """Standardised distance to ``expected``; infinite when the estimate has no spread and misses."""
        diff = self.mean - expected
        if self.stderr == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.stderr


def _merge(parts, k):
    return [math.fsum(p[i] for p in parts) for i in range(k)]


def bernoulli_estimate(hits: int, n: int) -> McEstimate:
    m = hits / n
    return McEstimate(m, math.sqrt(max(m * (1.0 - m), 0.0) / n), n)


def moment_estimate(s1: float, s2: float, n: int) -> McEstimate:
    """Mean with stderr from the sample standard deviation (``ddof = 1``)."""
    m = s1 / n
    var = max(s2 / n - m * m, 0.0) * n / (n - 1) if n > 1 else 0.0
    return McEstimate(m, math.sqrt(var / n), n)


def estimate_event(params: ModelParams, t, n: int, seed: int, predicate: Predicate,
                   threads: int | None = None) -> McEstimate:
    """Frequency of ``predicate`` over ``n`` paths, with Bernoulli stderr."""
    parts = map_blocks(params, t, n, seed, lambda b: (int(np.count_nonzero(predicate(b))),), threads)
    return bernoulli_estimate(sum(p[0] for p in parts), n)


def estimate_events(params: ModelParams, t, n: int, seed: int, predicates: dict[str, Predicate],
                    threads: int | None = None) -> dict[str, McEstimate]:
    """Several event frequencies from one shared sample."""
    names = list(predicates)
    parts = map_blocks(params, t, n, seed,
                       lambda b: tuple(int(np.count_nonzero(predicates[k](b))) for k in names), threads)
    return {k: bernoulli_estimate(sum(p[i] for p in parts), n) for i, k in enumerate(names)}


def empirical_charfn(params: ModelParams, t, n: int, seed: int,
                     functional: Callable[[PathBatch], tuple[np.ndarray, np.ndarray]],
                     threads: int | None = None) -> tuple[McEstimate, McEstimate]:
    """Estimates of ``E[cos(phase) 1_A]`` and ``E[sin(phase) 1_A]``.

    ``functional`` maps a batch to ``(phase, indicator)`` arrays.
    """
    return empirical_charfns(params, t, n, seed, [functional], threads)[0]


def empirical_charfns(params: ModelParams, t, n: int, seed: int, functionals,
                      threads: int | None = None) -> list[tuple[McEstimate, McEstimate]]:
    """Like :func:`empirical_charfn` for several functionals on one shared sample."""

    def reduce(b):
        out = []
        for f in functionals:
            phase, ind = f(b)
            ind = np.broadcast_to(np.asarray(ind, dtype=float), b.x.shape)
            co = np.cos(phase) * ind
            si = np.sin(phase) * ind
            out += [co.sum(), (co * co).sum(), si.sum(), (si * si).sum()]
        return tuple(out)

    parts = map_blocks(params, t, n, seed, reduce, threads)
    sums = _merge(parts, 4 * len(functionals))
    return [(moment_estimate(sums[4 * i], sums[4 * i + 1], n), moment_estimate(sums[4 * i + 2], sums[4 * i + 3], n))
            for i in range(len(functionals))]


@dataclass
class Histogram:
    """Counts on uniform bins over ``[lo, hi]`` with the matching expected counts.

    ``n`` is the total number of paths, so ``counts.sum() <= n``;
    ``expected`` is ``n`` times the integral of the density over each bin.
    """

    edges: np.ndarray
    counts: np.ndarray
    n: int
    expected: np.ndarray | None = None

    @property
    def outside(self) -> int:
        return self.n - int(self.counts.sum())

    @property
    def z(self) -> np.ndarray:
        """Per-bin z-scores under binomial counts."""
        if self.expected is None:
            raise ValueError("no expected counts attached")
        pr = self.expected / self.n
        sd = np.sqrt(self.n * pr * (1.0 - pr))
        with np.errstate(divide="ignore", invalid="ignore"):
            z = (self.counts - self.expected) / sd
        return np.where(sd > 0, z, np.where(self.counts == self.expected, 0.0, np.inf))


def bin_masses(density: Callable[[float], float], edges: np.ndarray) -> np.ndarray:
    """Integral of ``density`` over each bin (adaptive quadrature)."""
    return np.array([integrate.quad(density, a, b, epsabs=1e-14, epsrel=1e-11, limit=200)[0]
                     for a, b in zip(edges[:-1], edges[1:])])


def density_histogram(samples, interval: tuple[float, float], bins: int, n: int | None = None,
                      density: Callable[[float], float] | None = None) -> Histogram:
    """Histogram of ``samples`` on ``bins`` uniform bins.

    ``n`` is the number of paths the samples were drawn from (defaults to the
    sample count); with ``density`` the expected counts ``n * mass`` are attached.
    """
    if bins < 10:
        raise ValueError("bins must be >= 10")
    samples = np.asarray(samples, dtype=float)
    n = samples.size if n is None else int(n)
    edges = np.linspace(interval[0], interval[1], bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    expected = None if density is None else n * bin_masses(density, edges)
    return Histogram(edges, counts, n, expected)


def histogram_event(params: ModelParams, t, n: int, seed: int,
                    value: Callable[[PathBatch], np.ndarray], event: Predicate,
                    interval: tuple[float, float], bins: int,
                    density: Callable[[float], float] | None = None,
                    threads: int | None = None) -> Histogram:
    """Histogram of ``value`` over the paths in ``event`` without keeping all samples."""
    if bins < 10:
        raise ValueError("bins must be >= 10")
    edges = np.linspace(interval[0], interval[1], bins + 1)

    def reduce(b):
        sel = event(b)
        return np.histogram(value(b)[sel], bins=edges)[0]

    parts = map_blocks(params, t, n, seed, reduce, threads)
    counts = np.sum(parts, axis=0)
    expected = None if density is None else n * bin_masses(density, edges)
    return Histogram(edges, counts, n, expected)
