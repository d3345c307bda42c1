import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from nullx.weierstrass import (
    Invariants,
    PoleError,
    cubic_roots,
    discriminant,
    half_periods,
    is_degenerate,
    quasi_periods,
    sigma,
    wp,
    zeta,
)

# int_1^inf dt / sqrt(4 t^3 - 4 t) by scipy.integrate.quad after t = 1 + u^2
OMEGA1_4_0 = 1.3110287771460598

NONDEGENERATE = [(4, 0), (0, 4), (5, -2), (-4, 0), (8, -16), (1, 3)]
ALL = NONDEGENERATE + [(12, -8), (12, 8), (0, 0)]


def omega1_by_quadrature(inv):
    # t = e1 + u^2 removes the square-root singularity at the largest real root
    e1 = cubic_roots(inv)[0].real

    def f(u):
        t = e1 + u * u
        return 2 / math.sqrt(4 * t * t + 4 * e1 * t + 4 * e1 * e1 - inv.g2)

    return quad(f, 0, math.inf, epsabs=1e-14, epsrel=1e-13)[0]


def grid_points(inv, n=60):
    hp = half_periods(inv)
    if hp.finite:
        a, b = complex(hp.omega1), hp.omega3
    else:
        a, b = 1.0, 1j
    pts = []
    for i in range(n):
        for frac in (0.13, 0.41, 0.77):
            t = (i + 0.5) / n
            pts.append(2 * (t - 0.5) * a * 1.9 + (frac - 0.5) * 2 * b * 0.9 + 0.05)
    return pts


def test_discriminant_examples():
    assert discriminant(Invariants(4, 0)) == -64
    assert discriminant(Invariants(0, 4)) == 432
    assert discriminant(Invariants(12, -8)) == 0


def test_cubic_roots_examples():
    np.testing.assert_allclose(cubic_roots(Invariants(4, 0)), [1, 0, -1], atol=1e-15)
    np.testing.assert_allclose(cubic_roots(Invariants(-4, 0)), [0, 1j, -1j], atol=1e-15)
    assert sorted(r.real for r in cubic_roots(Invariants(12, -8))) == pytest.approx([-2, 1, 1])


@pytest.mark.parametrize("g", ALL + [(3, 1), (-7, 2), (0.5, -0.1)])
def test_cubic_roots_properties(g):
    inv = Invariants(*g)
    roots = cubic_roots(inv)
    assert abs(sum(roots)) <= 1e-12 * (1 + max(abs(r) for r in roots))
    for r in roots:
        assert abs(inv.cubic(r)) <= 1e-10 * (1 + abs(r) ** 3)
    real = [r.real for r in roots if r.imag == 0]
    assert real == sorted(real, reverse=True)


def test_half_periods_lemniscatic_by_quadrature():
    val = omega1_by_quadrature(Invariants(4, 0))
    assert val == pytest.approx(OMEGA1_4_0, abs=1e-11)
    hp = half_periods(Invariants(4, 0))
    assert hp.omega1 == pytest.approx(OMEGA1_4_0, abs=1e-11)
    assert hp.omega3.real == 0 and hp.nu > 0


def test_half_periods_degenerate_markers():
    hp = half_periods(Invariants(12, -8))
    assert math.isinf(hp.omega1)
    assert 0 < (-1j * hp.omega3).real < math.inf
    hp = half_periods(Invariants(0, 0))
    assert math.isinf(hp.omega1) and math.isinf(hp.omega3.imag)


def test_half_periods_positive_discriminant_by_quadrature():
    inv = Invariants(0, 4)
    val = omega1_by_quadrature(inv)
    assert half_periods(inv).omega1 == pytest.approx(val, rel=1e-10)


def test_rational_case_exact():
    inv = Invariants(0, 0)
    z = 0.3 + 0.7j
    P, dP = wp(z, inv)
    assert P == pytest.approx(z**-2, rel=1e-15)
    assert dP == pytest.approx(-2 * z**-3, rel=1e-15)
    assert sigma(z, inv) == z
    assert zeta(z, inv) == pytest.approx(1 / z, rel=1e-15)


def test_wp_at_half_period_is_e1():
    P, dP = wp(OMEGA1_4_0, Invariants(4, 0))
    assert P == pytest.approx(1, abs=1e-10)
    assert abs(dP) <= 1e-8


def test_pole_guard():
    with pytest.raises(PoleError):
        wp(1e-9, Invariants(4, 0))
    hp = half_periods(Invariants(4, 0))
    with pytest.raises(PoleError):
        wp(2 * hp.omega1 + 2 * hp.omega3 + 1e-10, Invariants(4, 0))


@pytest.mark.parametrize("g", ALL)
def test_defining_ode(g):
    inv = Invariants(*g)
    worst = 0.0
    for z in grid_points(inv):
        P, dP = wp(z, inv)
        worst = max(worst, abs(dP * dP - inv.cubic(P)) / (1 + abs(P) ** 3))
    assert worst <= 1e-9


@pytest.mark.parametrize("g", ALL)
def test_zeta_sigma_finite_differences(g):
    inv = Invariants(*g)
    h = 1e-4
    for z in grid_points(inv, 15):
        P = wp(z, inv)[0]
        zs = [zeta(z + k * h, inv) for k in (-2, -1, 1, 2)]
        dz = (zs[0] - 8 * zs[1] + 8 * zs[2] - zs[3]) / (12 * h)
        assert abs(dz + P) <= 1e-6 * (1 + abs(P))
        ss = [sigma(z + k * h, inv) for k in (-2, -1, 1, 2)]
        ds = (ss[0] - 8 * ss[1] + 8 * ss[2] - ss[3]) / (12 * h)
        Z = zeta(z, inv)
        assert abs(ds / sigma(z, inv) - Z) <= 1e-6 * (1 + abs(Z))


@pytest.mark.parametrize("t", [2.0, 0.5])
@pytest.mark.parametrize("g", [(4, 0), (0, 4), (5, -2)])
def test_homogeneity(g, t):
    inv = Invariants(*g)
    scaled = Invariants(g[0] * t**-4, g[1] * t**-6)
    for z in grid_points(inv, 10):
        P = wp(z, inv)[0]
        assert abs(wp(t * z, scaled)[0] - P / t**2) <= 1e-9 * (1 + abs(P / t**2))


@settings(max_examples=100, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_oddness(x, y):
    z = complex(x, y)
    if abs(z) < 1e-3:
        return
    inv = Invariants(0, 4)
    try:
        Z = zeta(z, inv)
    except PoleError:
        return
    assert zeta(-z, inv) == pytest.approx(-Z, rel=1e-10, abs=1e-10)
    S = sigma(z, inv)
    assert sigma(-z, inv) == pytest.approx(-S, rel=1e-10, abs=1e-12)


def test_sigma_normalised_at_origin():
    for g in ALL:
        inv = Invariants(*g)
        z = 1e-5 + 1e-5j
        assert sigma(z, inv) / z == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize("g", NONDEGENERATE)
def test_legendre_relation(g):
    inv = Invariants(*g)
    hp = half_periods(inv)
    eta1, eta3 = quasi_periods(inv)
    assert eta1 * hp.omega3 - eta3 * hp.omega1 == pytest.approx(1j * math.pi / 2, abs=1e-10)


@pytest.mark.parametrize("g", NONDEGENERATE)
def test_periodicity(g):
    inv = Invariants(*g)
    hp = half_periods(inv)
    eta1, _ = quasi_periods(inv)
    z = 0.31 + 0.17j
    assert wp(z + 2 * hp.omega1, inv)[0] == pytest.approx(wp(z, inv)[0], rel=1e-10)
    assert zeta(z + 2 * hp.omega1, inv) == pytest.approx(zeta(z, inv) + 2 * eta1, rel=1e-10)
    ratio = sigma(z + 2 * hp.omega1, inv) / sigma(z, inv)
    assert ratio == pytest.approx(-cmath.exp(2 * eta1 * (z + hp.omega1)), rel=1e-9)


def test_degenerate_detection():
    assert is_degenerate(Invariants(12, -8))
    assert is_degenerate(Invariants(0, 0))
    assert not is_degenerate(Invariants(4, 0))


@pytest.mark.parametrize("a", [1.0, -1.0, 0.3])
def test_degenerate_closed_forms(a):
    inv = Invariants(12 * a * a, -8 * a**3)
    lam = cmath.sqrt(3 * a)
    z = 0.4 + 0.1j
    assert wp(z, inv)[0] == pytest.approx(lam**2 / cmath.sinh(lam * z) ** 2 + a, rel=1e-12)
