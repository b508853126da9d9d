import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from orthoplanar import bessel
from orthoplanar.core import DomainError

# 40-digit mpmath values, frozen
ORACLE = {
    0.0: (1.0, 0.0),
    1e-5: (1.000000000025, 5.0000000000625e-6),
    0.5: (1.0634833707413235193, 0.25789430539089631636),
    1.0: (1.2660658777520083356, 0.56515910399248502721),
    5.0: (27.239871823604446895, 24.335642142450527199),
    14.9: (308375.57868743909406, 297840.6947795742081),
    15.0: (339649.37329791387952, 328124.92197020639673),
    15.1: (374103.41119040911354, 361495.56618540173547),
    30.0: (781672297823.97748972, 768532038938.95699949),
    100.0: (1.0737517071310738235e42, 1.0683693903381624812e42),
    500.0: (2.5048094765700780966e215, 2.5023034121760999957e215),
}


@pytest.mark.parametrize("x", sorted(ORACLE))
def test_against_frozen_oracle(x):
    i0, i1 = ORACLE[x]
    np.testing.assert_allclose(bessel.bessel_i0(x), i0, rtol=1e-12)
    np.testing.assert_allclose(bessel.bessel_i1(x), i1, rtol=1e-12, atol=0)


def test_vectorised_matches_scalar():
    xs = np.array([0.0, 0.3, 14.99, 15.01, 80.0])
    np.testing.assert_array_equal(bessel.bessel_i0(xs), [bessel.bessel_i0(x) for x in xs])
    assert isinstance(bessel.bessel_i1(2.0), float)


@pytest.mark.parametrize("mpx", [0.0, 1.0, 7.5, 14.999, 15.0, 15.001, 40.0, 99.9])
def test_against_mpmath(mpx):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    np.testing.assert_allclose(bessel.bessel_i0(mpx), float(mpmath.besseli(0, mpx)), rtol=1e-12)
    np.testing.assert_allclose(bessel.bessel_i1(mpx), float(mpmath.besseli(1, mpx)), rtol=1e-12, atol=1e-300)


@given(st.floats(0, 60))
def test_wronskian_like_recurrence(x):
    # I0' = I1 checked by a central difference
    h = 1e-5 * max(1.0, x)
    if x < h:
        return
    d = (bessel.bessel_i0(x + h) - bessel.bessel_i0(x - h)) / (2 * h)
    np.testing.assert_allclose(d, bessel.bessel_i1(x), rtol=1e-6)


def test_i1_over_x_limit_and_continuity():
    assert bessel.i1_over_x(0.0) == 0.5
    np.testing.assert_allclose(bessel.i1_over_x(1e-8), 0.5, rtol=1e-15)
    np.testing.assert_allclose(bessel.i1_over_x(20.0), bessel.bessel_i1(20.0) / 20.0, rtol=1e-15)


def test_domain_and_overflow():
    with pytest.raises(DomainError):
        bessel.bessel_i0(-1.0)
    with pytest.raises(OverflowError):
        bessel.bessel_i1(800.0)
    assert math.isfinite(bessel.bessel_i0(713.0))


def test_kernel_domain():
    with pytest.raises(DomainError):
        bessel.i0_dt_kernel(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        bessel.i0_occupation(1.0, 1.0, 0.0)
    # bounded at the light cone: K^2 c^2 t / 2
    np.testing.assert_allclose(bessel.i0_dt_kernel(2.0, 1.5, 1.0, 1.5 * (1 - 1e-12)), 4 * 2.25 / 2, rtol=1e-6)


def test_dt_kernel_is_time_derivative():
    K, c, t, w = 0.9, 1.3, 1.1, 0.4
    f = lambda tt: bessel.bessel_i0(K * math.sqrt(c * c * tt * tt - w * w))
    h = 1e-5
    np.testing.assert_allclose(bessel.i0_dt_kernel(K, c, t, w), (f(t + h) - f(t - h)) / (2 * h), rtol=1e-8)


def test_occupation_derivatives():
    K, t, s = 1.7, 1.4, 0.5
    f = lambda tt, ss: bessel.bessel_i0(K * math.sqrt(ss * (tt - ss)))
    h = 1e-5
    np.testing.assert_allclose(bessel.i0_occupation_dt(K, t, s), (f(t + h, s) - f(t - h, s)) / (2 * h), rtol=1e-8)
    np.testing.assert_allclose(bessel.i0_occupation_ds(K, t, s), (f(t, s + h) - f(t, s - h)) / (2 * h), rtol=1e-8)


@pytest.mark.parametrize("K,c,t", [(0.8, 1.3, 0.9), (2.0, 1.0, 2.0), (0.05, 2.0, 0.5)])
def test_light_cone_integrals(K, c, t):
    ct = c * t
    sub = lambda f: integrate.quad(lambda th: f(ct * math.sin(th)) * ct * math.cos(th),
                                   -math.pi / 2, math.pi / 2, epsabs=0, epsrel=1e-13)[0]
    i0 = sub(lambda w: bessel.bessel_i0(K * math.sqrt(max(ct * ct - w * w, 0.0))))
    np.testing.assert_allclose(i0, bessel.i0_light_cone_integral(K, c, t), rtol=1e-9)
    di0 = sub(lambda w: bessel.i0_dt_kernel(K, c, t, w) if abs(w) < ct else 0.0)
    np.testing.assert_allclose(di0, bessel.i0_dt_light_cone_integral(K, c, t), rtol=1e-9)


def test_light_cone_integral_frozen():
    # 40-digit quadrature of I0(K sqrt(c^2 t^2 - w^2)) at K=0.8, c=1.3, t=0.9
    np.testing.assert_allclose(bessel.i0_light_cone_integral(0.8, 1.3, 0.9), 2.696960586668265278, rtol=1e-14)
    assert bessel.i0_light_cone_integral(0.0, 2.0, 3.0) == 12.0
