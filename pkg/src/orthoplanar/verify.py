"""Cross-checks between closed forms, quadrature, finite differences and simulation.

Each check returns a list of :class:`CheckResult`; :func:`run_suite` strings
them together over the reference grid and the report serialises to a JSON
array.  Reports carry no timings so identical seeds give identical bytes.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate

from . import analytic as an
from .core import ModelParams, OrthoPlanarError, validate_params
from .mc import Histogram, McEstimate, bin_masses, empirical_charfns, estimate_events
from .sim import map_blocks

REFERENCE_PQ = ((0.5, 0.5), (0.3, 0.3), (0.6, 0.2), (0.25, 0.25), (0.4, 0.1))
REFERENCE_T = (0.5, 1.0, 2.0)
# extra no-reflection laws so the oblique identities are exercised with p != q
NOREF_PQ = ((0.3, 0.7), (0.7, 0.3))
FOURIER_ALPHAS = (0.5, 1.0, 2.0, 5.0)
INTERIOR_POINTS = ((0.8, -0.3), (1.0, 1.0), (0.5, 0.0), (2.0, 0.5), (0.0, 1.5), (-1.2, 0.7))
INTERIOR_P = (0.3, 0.5, 0.7)
HYDRO_PQ = ((0.5, 0.5), (0.6, 0.2), (0.3, 0.3))
HYDRO_C = (10.0, 20.0, 30.0)

QUAD_RTOL = 1e-8
FOURIER_ATOL = 1e-6
PDE_RTOL = 1e-4
Z_GATE = 4.0
BIN_Z_GATE = 5.0
HYDRO_MIN_N = 100_000

SUITES = ("quadrature", "fourier", "pde", "hydro", "mc", "interior")
DEFAULT_N = {"mc": 1_000_000, "interior": 10_000_000, "hydro": 200_000}


class ToleranceExceeded(OrthoPlanarError):
    """One or more gated checks failed; ``failures`` lists them."""

    def __init__(self, failures: Sequence[CheckResult]):
        self.failures = list(failures)
        worst = "; ".join(f"{f.check}[{f.statistic}] {f.params}" for f in self.failures[:5])
        super().__init__(f"{len(self.failures)} check(s) failed: {worst}")


@dataclass
class CheckResult:
    check: str
    params: dict
    statistic: str
    expected: object
    observed: object
    tolerance: float | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "statistic": self.statistic,
            "expected": _jsonable(self.expected),
            "observed": _jsonable(self.observed),
            "tolerance": self.tolerance,
            "pass": bool(self.passed),
        }


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def report_json(results: Iterable[CheckResult]) -> str:
    return json.dumps([r.to_dict() for r in results], indent=2) + "\n"


def raise_on_failure(results: Sequence[CheckResult]) -> None:
    bad = [r for r in results if not r.passed]
    if bad:
        raise ToleranceExceeded(bad)


def _pdict(pr: ModelParams, **extra) -> dict:
    d = {"lambda": pr.lam, "c": pr.c, "p": pr.p, "q": pr.q}
    d.update(extra)
    return d


def _not_applicable(check, params, why) -> CheckResult:
    return CheckResult(check, params, f"not applicable: {why}", None, None, None, True)


def _noref(pr: ModelParams) -> bool:
    return abs(pr.p + pr.q - 1.0) <= 1e-12 and 0.0 < pr.p < 1.0


# ---------------------------------------------------------------- quadrature

def _quad_sym(f: Callable[[float], complex], half: float, complex_valued=False):
    """Integral of ``f`` over ``(-half, half)`` with ``w = half sin(theta)``.

    The substitution keeps the nodes off the endpoints and smooths the
    square-root behaviour there.
    """
    g = lambda th: f(half * math.sin(th)) * half * math.cos(th)
    return _quad(g, -0.5 * math.pi, 0.5 * math.pi, complex_valued)


def _quad_seg(f, t: float, complex_valued=False):
    """Integral of ``f`` over ``(0, t)`` via ``s = t (1 + sin theta)/2``."""
    g = lambda th: f(0.5 * t * (1.0 + math.sin(th))) * 0.5 * t * math.cos(th)
    return _quad(g, -0.5 * math.pi, 0.5 * math.pi, complex_valued)


def _quad(g, a, b, complex_valued):
    # oscillatory integrands near zero need an absolute floor well below the 1e-6 gate
    kw = dict(epsabs=1e-12 if complex_valued else 0.0, epsrel=1e-12, limit=400)
    if not complex_valued:
        return integrate.quad(g, a, b, **kw)[0]
    re = integrate.quad(lambda x: g(x).real, a, b, **kw)[0]
    im = integrate.quad(lambda x: g(x).imag, a, b, **kw)[0]
    return complex(re, im)


def _rel_ok(obs, exp, rtol):
    return abs(obs - exp) <= rtol * abs(exp) or obs == exp


def quadrature_consistency(params, t, strict: bool = False) -> list[CheckResult]:
    """Density integrals against the closed-form masses, to ``QUAD_RTOL`` relative."""
    pr = validate_params(params.lam, params.c, params.p, params.q)
    t = float(t)
    ct = pr.c * t
    P = _pdict(pr, t=t)
    out = []

    def add(name, stat, exp, obs):
        out.append(CheckResult(f"quadrature.{name}", P, stat, exp, obs, QUAD_RTOL, _rel_ok(obs, exp, QUAD_RTOL)))

    add("side", "integral of side density vs side mass",
        an.prob_side_interior(pr, t), _quad_sym(lambda e: an.side_density(pr, t, e), ct))
    if pr.r > 1e-12:
        add("diagonal", "integral of diagonal density vs diagonal mass",
            an.prob_diag_interior(pr, t), _quad_sym(lambda x: an.diag_density(pr, t, x), ct))
        add("vertical_side", "integral of vertical-side density plus atoms vs P(T=t)",
            an.t_endpoint_mass(pr, t), _quad_sym(lambda y: an.vertical_side_density(pr, t, y), ct)
            + 0.5 * math.exp(-pr.lam * t))
    else:
        out.append(_not_applicable("quadrature.diagonal", P, "p + q = 1"))
        out.append(_not_applicable("quadrature.vertical_side", P, "p + q = 1"))
    if pr.p + pr.q > 0:
        add("occupation", "integral of T density vs 1 - endpoint masses",
            1.0 - 2.0 * an.t_endpoint_mass(pr, t), _quad_seg(lambda s: an.t_density(pr, t, s), t))
    else:
        out.append(_not_applicable("quadrature.occupation", P, "p = q = 0"))
    if _noref(pr):
        a0, a1 = an.oblique_atoms_noref(pr, t)
        add("oblique", "integral of oblique density plus atoms vs oblique mass",
            an.oblique_prob_noref(pr, t), _quad_seg(lambda s: an.oblique_density_noref(pr, t, s), t) + a0 + a1)
    else:
        out.append(_not_applicable("quadrature.oblique", P, "requires p + q = 1"))
    if strict:
        raise_on_failure(out)
    return out


# ---------------------------------------------------------------- fourier

def branch_points(pr: ModelParams) -> dict[str, float]:
    """Fourier variables at which a square-root radicand vanishes."""
    mu = pr.lam * (pr.p + pr.q)
    bp = {
        "side": pr.lam * math.sqrt(pr.p * pr.q) / pr.c,
        "diagonal": pr.lam * max(pr.r, 0.0) / pr.c,
        "occupation": 2.0 * mu,
    }
    if _noref(pr):
        bp["oblique"] = math.sqrt(8.0) * pr.lam * math.sqrt(pr.p * (1.0 - pr.p))
    return bp


def fourier_consistency(params, t, alphas: Sequence[float] = FOURIER_ALPHAS,
                        include_branch_points: bool = True, strict: bool = False) -> list[CheckResult]:
    """Fourier transform of density plus atoms against each closed-form charfn."""
    pr = validate_params(params.lam, params.c, params.p, params.q)
    t = float(t)
    ct = pr.c * t
    atom = math.exp(-pr.lam * t)
    out = []
    bps = branch_points(pr) if include_branch_points else {}

    def add(name, a, exp, obs):
        err = abs(exp - obs)
        out.append(CheckResult(f"fourier.{name}", _pdict(pr, t=t, alpha=a), "abs difference",
                               complex(exp), complex(obs), FOURIER_ATOL, err <= FOURIER_ATOL))

    def grid(name):
        extra = [bps[name]] if name in bps and bps[name] not in alphas else []
        return list(alphas) + extra

    for a in grid("side"):
        num = _quad_sym(lambda e: cmath.exp(1j * a * e) * an.side_density(pr, t, e), ct, True)
        add("side", a, an.side_charfn(pr, t, a), num + 0.5 * atom * math.cos(a * ct))
    for a in grid("diagonal"):
        if pr.r > 1e-12:
            num = _quad_sym(lambda x: cmath.exp(1j * a * x) * an.diag_density(pr, t, x), ct, True)
            numv = _quad_sym(lambda y: cmath.exp(1j * a * y) * an.vertical_side_density(pr, t, y), ct, True)
        else:
            num = numv = 0.0  # no continuous part without reversals
        add("diagonal", a, an.diag_charfn(pr, t, a), num + 0.5 * atom * math.cos(a * ct))
        add("vertical_side", a, an.vertical_side_charfn(pr, t, a), numv + 0.5 * atom * math.cos(a * ct))
    for a in grid("occupation"):
        num = _quad_seg(lambda s: cmath.exp(1j * a * s) * an.t_density(pr, t, s), t, True) \
            if pr.p + pr.q > 0 else 0.0
        m = an.t_endpoint_mass(pr, t)
        add("occupation", a, an.t_charfn(pr, t, a), num + m * (1.0 + cmath.exp(1j * a * t)))
    if _noref(pr):
        a0, a1 = an.oblique_atoms_noref(pr, t)
        for a in grid("oblique"):
            num = _quad_seg(lambda s: cmath.exp(1j * a * s) * an.oblique_density_noref(pr, t, s), t, True)
            add("oblique", a, an.oblique_charfn_noref(pr, t, a), num + a0 + a1 * cmath.exp(1j * a * t))
    else:
        out.append(_not_applicable("fourier.oblique", _pdict(pr, t=t), "requires p + q = 1"))
    if strict:
        raise_on_failure(out)
    return out


# ---------------------------------------------------------------- pde

def _d1(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def _d2(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


def _rich(op, f, x, h):
    """Richardson extrapolation of a second-order central difference."""
    a, b = op(f, x, h), op(f, x, h / 2)
    return b + (b - a) / 3.0


def _mixed(f, t, s, h):
    return (f(t + h, s + h) - f(t + h, s - h) - f(t - h, s + h) + f(t - h, s - h)) / (4 * h * h)


def _normalised_residual(terms):
    scale = max(abs(v) for v in terms)
    return abs(sum(terms)) / scale if scale > 0 else 0.0


def pde_residuals(params, t, n_points: int = 25, strict: bool = False) -> list[CheckResult]:
    """Term-normalised residuals of the second-order PDEs of the side, diagonal and T densities.

    Grid points keep a margin of ``0.1 c t`` (``0.1 t`` for ``T``) from the
    edges of the support; the worst residual per PDE is reported.
    """
    pr = validate_params(params.lam, params.c, params.p, params.q)
    t = float(t)
    lam, c, p, q = pr.lam, pr.c, pr.p, pr.q
    ct = c * t
    h = 0.01 * t
    hw = 0.01 * ct
    out = []
    ws = np.linspace(-0.9 * ct, 0.9 * ct, n_points)

    def space_pde(name, dens, potential):
        worst = (0.0, None)
        for w in ws:
            ft = lambda tt: dens(tt, w)
            fw = lambda ww: dens(t, ww)
            terms = [_rich(_d2, ft, t, h), 2 * lam * _rich(_d1, ft, t, h),
                     -c * c * _rich(_d2, fw, w, hw), potential * dens(t, w)]
            res = _normalised_residual(terms)
            if res >= worst[0]:
                worst = (res, float(w))
        out.append(CheckResult(f"pde.{name}", _pdict(pr, t=t, worst_point=worst[1], points=n_points),
                               "max term-normalised residual", 0.0, worst[0], PDE_RTOL, worst[0] <= PDE_RTOL))

    space_pde("side", lambda tt, w: an.side_density(pr, tt, w), lam * lam * (1 - p * q))
    if pr.r > 1e-12:
        space_pde("diagonal", lambda tt, w: an.diag_density(pr, tt, w), lam * lam * (p + q) * (2 - p - q))
    else:
        out.append(_not_applicable("pde.diagonal", _pdict(pr, t=t), "p + q = 1"))

    mu = lam * (p + q)
    if mu > 0:
        f = lambda tt, s: an.t_density(pr, tt, s)
        worst = (0.0, None)
        for s in np.linspace(0.1 * t, 0.9 * t, n_points):
            ft = lambda tt: f(tt, s)
            fs = lambda ss: f(t, ss)
            a, b = _mixed(f, t, s, h), _mixed(f, t, s, h / 2)
            terms = [_rich(_d2, ft, t, h), b + (b - a) / 3.0,
                     2 * mu * _rich(_d1, ft, t, h), mu * _rich(_d1, fs, s, h)]
            res = _normalised_residual(terms)
            if res >= worst[0]:
                worst = (res, float(s))
        out.append(CheckResult("pde.occupation", _pdict(pr, t=t, worst_point=worst[1], points=n_points),
                               "max term-normalised residual", 0.0, worst[0], PDE_RTOL, worst[0] <= PDE_RTOL))
    else:
        out.append(_not_applicable("pde.occupation", _pdict(pr, t=t), "p = q = 0"))
    if strict:
        raise_on_failure(out)
    return out


# ---------------------------------------------------------------- monte carlo

def subseed(seed: int, *keys: int) -> int:
    """Independent 64-bit seed for a sub-check, derived from the master seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _z_result(check, P, stat, est: McEstimate, expected: float, gate=Z_GATE) -> CheckResult:
    z = est.z(expected)
    return CheckResult(check, dict(P, n=est.n, stderr=est.stderr, z=z), stat, expected, est.mean, gate,
                       abs(z) <= gate)


def mc_agreement(params, t, n: int, seed: int, threads: int | None = None,
                 histograms: bool = True, strict: bool = False) -> list[CheckResult]:
    """Event frequencies (4-stderr gates) and restricted histograms (5-z per bin)."""
    pr = validate_params(params.lam, params.c, params.p, params.q)
    t = float(t)
    P = _pdict(pr, t=t)
    events = {
        "vertex": (lambda b: b.n_events == 0, math.exp(-pr.lam * t)),
        "boundary": (lambda b: b.alternating, an.prob_boundary(pr, t)),
        "side_q0": (lambda b: b.alternating & (b.n_events > 0) & (b.side_quadrant == 0),
                    an.prob_side_interior(pr, t)),
        "diagonals": (lambda b: b.only_reflections, an.prob_diagonals(pr, t)),
        "t_zero": (lambda b: b.t_vertical == 0.0, an.t_endpoint_mass(pr, t)),
        "t_full": (lambda b: b.all_vertical, an.t_endpoint_mass(pr, t)),
    }
    if _noref(pr):
        events["oblique_noref"] = (lambda b: b.never_down, an.oblique_prob_noref(pr, t))
    if abs(pr.p - pr.q) <= 1e-12:
        events["oblique_pq"] = (lambda b: b.never_down, an.oblique_prob_pq(pr, t))
    est = estimate_events(pr, t, n, seed, {k: v[0] for k, v in events.items()}, threads)
    out = [_z_result(f"mc.{k}", P, "event frequency", est[k], v[1]) for k, v in events.items()]
    if histograms:
        out += _histogram_checks(pr, t, n, subseed(seed, 1), threads)
    if strict:
        raise_on_failure(out)
    return out


def _hist_result(name, P, hist):
    z = hist.z
    worst = float(np.max(np.abs(z)))
    return CheckResult(f"mc.hist.{name}", dict(P, n=hist.n, bins=len(hist.counts)), "max |z| over bins",
                       0.0, worst, BIN_Z_GATE, worst <= BIN_Z_GATE)


def _histogram_checks(pr, t, n, seed, threads, bins=40):
    P = _pdict(pr, t=t)
    ct = pr.c * t
    out = []
    specs = [("side", lambda b: b.eta, lambda b: b.alternating & (b.n_events > 0) & (b.side_quadrant == 0),
              (-ct, ct), lambda e: an.side_density(pr, t, e))]
    if pr.p + pr.q > 0:
        specs.append(("occupation", lambda b: b.t_vertical,
                      lambda b: (b.t_vertical > 0) & ~b.all_vertical, (0.0, t), lambda s: an.t_density(pr, t, s)))
    if pr.r > 1e-12:
        specs.append(("diagonal", lambda b: b.x, lambda b: b.only_reflections & (b.n_events > 0) & (b.dir0 % 2 == 0),
                      (-ct, ct), lambda x: an.diag_density(pr, t, x)))
    if _noref(pr):
        specs.append(("oblique", lambda b: b.t_vertical,
                      lambda b: b.never_down & (b.t_vertical > 0) & ~b.all_vertical, (0.0, t),
                      lambda s: an.oblique_density_noref(pr, t, s)))
    names = [s[0] for s in specs]
    edges = {s[0]: np.linspace(s[3][0], s[3][1], bins + 1) for s in specs}

    def reduce(b):
        return tuple(np.histogram(s[1](b)[s[2](b)], bins=edges[s[0]])[0] for s in specs)

    parts = map_blocks(pr, t, n, seed, reduce, threads)
    for i, s in enumerate(specs):
        counts = np.sum([p[i] for p in parts], axis=0)
        hist = Histogram(edges[names[i]], counts, n, n * bin_masses(s[4], edges[names[i]]))
        out.append(_hist_result(names[i], P, hist))
    return out


def interior_agreement(p: float, n: int, seed: int, points=INTERIOR_POINTS, lam=1.0, c=1.0, t=1.0,
                       threads: int | None = None, strict: bool = False) -> list[CheckResult]:
    """Empirical ``E[exp(i(alpha X + beta Y))]`` against the p + q = 1 closed form."""
    pr = validate_params(lam, c, p, 1.0 - p)
    fns = [(lambda b, a=a, be=be: (a * b.x + be * b.y, 1.0)) for a, be in points]
    ests = empirical_charfns(pr, t, n, seed, fns, threads)
    out = []
    for (a, be), (re, im) in zip(points, ests):
        exact = an.interior_charfn_noref(pr, t, a, be)
        P = _pdict(pr, t=t, alpha=a, beta=be)
        out.append(_z_result("interior.re", P, "real part", re, exact.real))
        out.append(_z_result("interior.im", P, "imaginary part", im, exact.imag))
    if strict:
        raise_on_failure(out)
    return out


# ---------------------------------------------------------------- hydrodynamic limit

@dataclass
class HydroMoments:
    var_x: float
    var_y: float
    corr_xy: float
    skew_y: float
    kurt_y: float
    mean_t: float
    var_t: float


def hydro_moments(p, q, c, t, n, seed, threads=None) -> HydroMoments:
    """Moments of ``X, Y`` and ``T/t`` under the scaling ``lam = c^2``."""
    pr = validate_params(c * c, c, p, q)

    def reduce(b):
        x, y, s = b.x, b.y, b.t_vertical / t
        return (x.sum(), (x * x).sum(), y.sum(), (y * y).sum(), (x * y).sum(), (y ** 3).sum(), (y ** 4).sum(),
                s.sum(), (s * s).sum())

    parts = map_blocks(pr, t, n, seed, reduce, threads, track_history=False)
    m = [math.fsum(pt[i] for pt in parts) / n for i in range(9)]
    mx, mxx, my, myy, mxy, my3, my4, ms, mss = m
    vx = mxx - mx * mx
    vy = myy - my * my
    cov = mxy - mx * my
    c3 = my3 - 3 * my * myy + 2 * my ** 3
    c4 = my4 - 4 * my * my3 + 6 * my * my * myy - 3 * my ** 4
    return HydroMoments(vx, vy, cov / math.sqrt(vx * vy), c3 / vy ** 1.5, c4 / vy ** 2, ms, mss - ms * ms)


def hydro_convergence(p, q, t=1.0, n: int = 200_000, seed: int = 0, cs: Sequence[float] = HYDRO_C,
                      threads: int | None = None, strict: bool = False) -> list[CheckResult]:
    """Moment gates for the diffusive limit, judged at the largest ``c``."""
    D = an.hydro_coeff(p, q).D
    target = 2.0 * D * t
    P = {"p": p, "q": q, "t": t, "n": n}
    out = [CheckResult("hydro.sample_size", P, "replications", HYDRO_MIN_N, n, None, n >= HYDRO_MIN_N)]
    moms = [hydro_moments(p, q, c, t, n, subseed(seed, 2, i), threads) for i, c in enumerate(cs)]
    top = moms[-1]
    Pc = dict(P, c=cs[-1], **{"lambda": cs[-1] ** 2})
    out += [
        CheckResult("hydro.var_x", Pc, "relative error of Var(X) vs 2Dt", target, top.var_x, 0.05,
                    abs(top.var_x - target) / target <= 0.05),
        CheckResult("hydro.var_y", Pc, "relative error of Var(Y) vs 2Dt", target, top.var_y, 0.05,
                    abs(top.var_y - target) / target <= 0.05),
        CheckResult("hydro.mean_t", Pc, "mean of T/t", 0.5, top.mean_t, 0.01, abs(top.mean_t - 0.5) <= 0.01),
        CheckResult("hydro.corr_xy", Pc, "correlation of X and Y", 0.0, top.corr_xy, 0.02, abs(top.corr_xy) <= 0.02),
        CheckResult("hydro.skew_y", Pc, "skewness of Y", 0.0, top.skew_y, 0.1, abs(top.skew_y) <= 0.1),
        CheckResult("hydro.kurt_y", Pc, "kurtosis of Y", 3.0, top.kurt_y, 0.1, abs(top.kurt_y - 3.0) <= 0.1),
    ]
    vts = [m.var_t for m in moms]
    out.append(CheckResult("hydro.var_t_decreasing", dict(P, c=list(cs)), "Var(T/t) over increasing c",
                           "strictly decreasing", vts, None, all(a > b for a, b in zip(vts, vts[1:]))))
    if strict:
        raise_on_failure(out)
    return out


# ---------------------------------------------------------------- suites

def reference_params(lam=1.0, c=1.0):
    for p, q in REFERENCE_PQ:
        yield validate_params(lam, c, p, q)


def _grid(include_noref=True):
    pqs = list(REFERENCE_PQ) + (list(NOREF_PQ) if include_noref else [])
    for p, q in pqs:
        for t in REFERENCE_T:
            yield validate_params(1.0, 1.0, p, q), t


def run_suite(suite: str, seed: int = 0, n: int | None = None, threads: int | None = None) -> list[CheckResult]:
    """Run one named suite (or ``"all"``) over the reference grid."""
    if suite == "all":
        out = []
        for s in SUITES:
            out += run_suite(s, seed, n, threads)
        return out
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    n = DEFAULT_N.get(suite) if n is None else int(n)
    out: list[CheckResult] = []
    if suite == "quadrature":
        for pr, t in _grid():
            out += quadrature_consistency(pr, t)
    elif suite == "fourier":
        for pr, t in _grid():
            out += fourier_consistency(pr, t)
    elif suite == "pde":
        for pr, t in _grid():
            out += pde_residuals(pr, t)
    elif suite == "mc":
        for i, (pr, t) in enumerate(_grid()):
            out += mc_agreement(pr, t, n, subseed(seed, 3, i), threads)
    elif suite == "interior":
        for i, p in enumerate(INTERIOR_P):
            out += interior_agreement(p, n, subseed(seed, 4, i), threads=threads)
    elif suite == "hydro":
        for i, (p, q) in enumerate(HYDRO_PQ):
            out += hydro_convergence(p, q, 1.0, n, subseed(seed, 5, i), threads=threads)
    return out
