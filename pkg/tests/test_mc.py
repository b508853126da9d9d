import math

import numpy as np
import pytest

from orthoplanar import analytic as an
from orthoplanar import mc
from orthoplanar.core import ModelParams

BASE = ModelParams(1.0, 1.0, 0.3, 0.4)


def within(est, expected, k=4.0):
    assert abs(est.z(expected)) <= k, (est, expected)


def test_estimate_basics():
    e = mc.estimate_event(BASE, 1.0, 1000, 1, lambda b: np.ones(len(b), bool))
    assert (e.mean, e.stderr, e.n) == (1.0, 0.0, 1000)
    assert e.z(1.0) == 0.0 and math.isinf(e.z(0.5))
    assert mc.bernoulli_estimate(30, 100).stderr == pytest.approx(math.sqrt(0.3 * 0.7 / 100))


def test_poisson_no_event():
    within(mc.estimate_event(BASE, 1.0, 1_000_000, 17, lambda b: b.n_events == 0), math.exp(-1))


def test_degenerate_diagonal_component():
    pr = ModelParams(1.0, 1.0, 0.2, 0.3)
    within(mc.estimate_event(pr, 1.0, 1_000_000, 18, lambda b: b.only_reflections), math.exp(-0.5))


def test_events_share_one_sample_and_threads_do_not_matter():
    preds = {"v": lambda b: b.n_events == 0, "d": lambda b: b.only_reflections}
    one = mc.estimate_events(BASE, 1.0, 300_000, 4, preds, threads=1)
    four = mc.estimate_events(BASE, 1.0, 300_000, 4, preds, threads=4)
    assert one == four
    assert one["v"] == mc.estimate_event(BASE, 1.0, 300_000, 4, preds["v"])


def test_empirical_charfn_trivial():
    re, im = mc.empirical_charfn(BASE, 1.0, 5000, 2, lambda b: (np.zeros(len(b)), 1.0))
    assert (re.mean, re.stderr, im.mean, im.stderr) == (1.0, 0.0, 0.0, 0.0)


def test_empirical_side_charfn():
    a = 1.3
    # open side in the first quadrant plus its two vertices (paths starting along d_0 or d_1)
    side = lambda b: (a * (b.x - b.y),
                      (b.alternating & (b.n_events > 0) & (b.side_quadrant == 0))
                      | ((b.n_events == 0) & (b.dir0 <= 1)))
    re, im = mc.empirical_charfn(BASE, 1.0, 1_000_000, 21, side)
    within(re, an.side_charfn(BASE, 1.0, a).real)
    within(im, 0.0)


def test_empirical_interior_charfn():
    pr = ModelParams(1.0, 1.0, 0.7, 0.3)
    a, b_ = 0.8, -0.3
    re, im = mc.empirical_charfn(pr, 1.0, 1_000_000, 22, lambda b: (a * b.x + b_ * b.y, 1.0))
    exact = an.interior_charfn_noref(pr, 1.0, a, b_)
    within(re, exact.real)
    within(im, exact.imag)


def test_histogram_edge_cases():
    h = mc.density_histogram([], (0.0, 1.0), 10)
    assert h.counts.sum() == 0 and h.n == 0
    h = mc.density_histogram([0.5, 2.0, -1.0], (0.0, 1.0), 10)
    assert h.counts.sum() == 1 and h.outside == 2
    with pytest.raises(ValueError):
        mc.density_histogram([0.1], (0.0, 1.0), 5)


def test_occupation_histogram():
    t = 1.0
    h = mc.histogram_event(BASE, t, 1_000_000, 31, lambda b: b.t_vertical,
                           lambda b: (b.t_vertical > 0) & ~b.all_vertical, (0.0, t), 40,
                           density=lambda s: an.t_density(BASE, t, s))
    assert np.max(np.abs(h.z)) <= 5.0


def test_diagonal_histogram():
    t = 1.0
    h = mc.histogram_event(BASE, t, 1_000_000, 32, lambda b: b.x,
                           lambda b: b.only_reflections & (b.n_events > 0) & (b.dir0 % 2 == 0), (-t, t), 40,
                           density=lambda x: an.diag_density(BASE, t, x))
    assert np.max(np.abs(h.z)) <= 5.0


def test_oblique_density_asymmetry_matches_simulation():
    pr = ModelParams(1.0, 1.0, 0.3, 0.7)
    t = 1.0
    ev = lambda b: b.never_down & (b.t_vertical > 0) & ~b.all_vertical
    lower = mc.estimate_event(pr, t, 1_000_000, 33, lambda b: ev(b) & (b.t_vertical < 0.5 * t))
    upper = mc.estimate_event(pr, t, 1_000_000, 33, lambda b: ev(b) & (b.t_vertical > 0.5 * t))
    m_lo = mc.bin_masses(lambda s: an.oblique_density_noref(pr, t, s), np.array([0.0, 0.5 * t]))[0]
    m_hi = mc.bin_masses(lambda s: an.oblique_density_noref(pr, t, s), np.array([0.5 * t, t]))[0]
    assert m_lo > m_hi * 1.05
    within(lower, m_lo)
    within(upper, m_hi)
