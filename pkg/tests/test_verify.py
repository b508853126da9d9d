import json

import pytest

from orthoplanar import verify as vf
from orthoplanar.core import ModelParams

HALF = ModelParams(1.0, 1.0, 0.5, 0.5)


def _all_pass(results):
    bad = [r for r in results if not r.passed]
    assert not bad, bad


def test_quadrature_half():
    res = vf.quadrature_consistency(HALF, 1.0)
    _all_pass(res)
    assert {r.check for r in res} >= {"quadrature.side", "quadrature.occupation", "quadrature.oblique"}


def test_quadrature_flags_not_applicable():
    res = vf.quadrature_consistency(ModelParams(1, 1, 0.2, 0.3), 1.0)
    _all_pass(res)
    obl = [r for r in res if r.check == "quadrature.oblique"]
    assert obl[0].statistic.startswith("not applicable")


def test_quadrature_tiny_time():
    _all_pass(vf.quadrature_consistency(ModelParams(1, 1, 0.3, 0.4), 1e-8))
    _all_pass(vf.quadrature_consistency(ModelParams(1, 1, 0.3, 0.7), 1e-8))


def test_fourier_symmetric_with_branch_points():
    res = vf.fourier_consistency(ModelParams(1, 1, 0.4, 0.4), 1.0)
    _all_pass(res)
    bps = vf.branch_points(ModelParams(1, 1, 0.4, 0.4))
    assert any(r.params["alpha"] == bps["side"] for r in res if r.check == "fourier.side")


def test_fourier_at_zero_is_the_mass_identity():
    pr = ModelParams(1, 1, 0.3, 0.7)
    _all_pass(vf.fourier_consistency(pr, 1.5, alphas=(0.0,), include_branch_points=False))


@pytest.mark.parametrize("pr,check", [
    (ModelParams(1, 1, 0.3, 0.5), "pde.side"),
    (ModelParams(1, 1, 0.2, 0.3), "pde.diagonal"),
    (ModelParams(1, 1, 0.25, 0.25), "pde.occupation"),
])
def test_pde_examples(pr, check):
    res = [r for r in vf.pde_residuals(pr, 1.0) if r.check == check]
    assert res and res[0].passed and res[0].params["points"] == 25


def test_pde_detects_a_wrong_density(monkeypatch):
    # a smooth distortion that is not a solution must show up as a residual
    orig = vf.an.t_density
    monkeypatch.setattr(vf.an, "t_density", lambda params, t, s: orig(params, t, s) * (1.0 + 0.01 * s))
    res = [r for r in vf.pde_residuals(ModelParams(1, 1, 0.3, 0.3), 1.0) if r.check == "pde.occupation"]
    assert not res[0].passed


def test_strict_raises():
    with pytest.raises(vf.ToleranceExceeded) as exc:
        vf.hydro_convergence(0.5, 0.5, n=1000, seed=1, cs=(2.0,), strict=True)
    assert any(f.check == "hydro.sample_size" for f in exc.value.failures)


def test_hydro_small_scale_flags_non_convergence():
    res = vf.hydro_convergence(0.5, 0.5, n=100_000, seed=2, cs=(2.0,))
    failed = {r.check for r in res if not r.passed}
    assert "hydro.var_x" in failed


def test_report_schema_and_determinism():
    res = vf.mc_agreement(ModelParams(1, 1, 0.3, 0.3), 1.0, 150_000, 9, threads=1, histograms=False)
    text = vf.report_json(res)
    data = json.loads(text)
    assert all(set(d) == {"check", "params", "statistic", "expected", "observed", "tolerance", "pass"}
               for d in data)
    again = vf.report_json(vf.mc_agreement(ModelParams(1, 1, 0.3, 0.3), 1.0, 150_000, 9, threads=3,
                                           histograms=False))
    assert text == again


def test_subseeds_distinct():
    seeds = {vf.subseed(1, 3, i) for i in range(100)}
    assert len(seeds) == 100 and vf.subseed(1, 3, 0) != vf.subseed(2, 3, 0)


def test_unknown_suite():
    with pytest.raises(ValueError):
        vf.run_suite("nope")
