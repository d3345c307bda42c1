"""Weierstrass elliptic functions for real invariants.

The discriminant follows the sign convention ``27*g3**2 - g2**3``, which is the
negative of the usual ``g2**3 - 27*g3**2``.  Negative discriminant therefore
means three real roots of ``4t^3 - g2 t - g3`` and a rectangular lattice;
positive discriminant means one real root and a rhombic lattice.

Half-periods are normalized as follows:

* disc < 0:  ``omega1 > 0``, ``omega3 = i*nu*omega1``
* disc > 0:  ``omega1 > 0``, ``omega3 = (1 + i*nu)*omega1/2``
* disc = 0, g3 > 0:  ``omega1 > 0``, ``omega3 = +i*inf``
* disc = 0, g3 < 0:  ``omega1 = +inf``, ``omega3`` on the positive imaginary axis
* g2 = g3 = 0:  both infinite

Non-degenerate lattices are evaluated by reducing ``z`` to the centered
period parallelogram, summing the Laurent series at ``z / 2**n`` and doubling
back up.  Degenerate lattices use their closed trigonometric, hyperbolic or
rational forms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import elliprf

POLE_GUARD = 1e-8
DEGENERATE_RTOL = 1e-12
_N_LAURENT = 40

INF = math.inf
I_INF = complex(0.0, math.inf)


class PoleError(ValueError):
    """Evaluation point is within the guard radius of a lattice point."""


@dataclass(frozen=True)
class Invariants:
    g2: float
    g3: float

    def __post_init__(self):
        if not (math.isfinite(self.g2) and math.isfinite(self.g3)):
            raise ValueError(f"invariants must be finite, got ({self.g2}, {self.g3})")

    @property
    def discriminant(self) -> float:
        return discriminant(self)

    def cubic(self, t):
        """``P(t) = 4t^3 - g2 t - g3``."""
        return 4 * t**3 - self.g2 * t - self.g3


@dataclass(frozen=True)
class HalfPeriods:
    """Primitive half-periods; infinite ones are ``INF`` / ``I_INF`` markers."""

    omega1: float
    omega3: complex

    @property
    def finite(self) -> bool:
        return math.isfinite(self.omega1) and cmath.isfinite(self.omega3)

    @property
    def nu(self) -> float | None:
        """Shape parameter of the lattice, ``None`` when a period is infinite."""
        if not self.finite:
            return None
        if self.omega3.real == 0.0:
            return self.omega3.imag / self.omega1
        return 2 * self.omega3.imag / self.omega1


def discriminant(inv: Invariants) -> float:
    return 27.0 * inv.g3**2 - inv.g2**3


def is_degenerate(inv: Invariants, rtol: float = DEGENERATE_RTOL) -> bool:
    scale = max(abs(inv.g2) ** 3, 27.0 * inv.g3**2)
    return abs(discriminant(inv)) <= rtol * scale


def degenerate_parameter(inv: Invariants) -> float:
    """The ``a`` with ``g3 = -8a^3`` (and ``g2 = 12a^2``) for a degenerate cubic."""
    return -float(np.cbrt(inv.g3)) / 2.0


def _newton_polish(inv: Invariants, t: complex, steps: int = 2) -> complex:
    for _ in range(steps):
        d = 12 * t * t - inv.g2
        if d == 0:
            break
        t = t - inv.cubic(t) / d
    return t


def cubic_roots(inv: Invariants) -> tuple[complex, complex, complex]:
    """Roots ``e1, e2, e3`` of ``4t^3 - g2 t - g3``.

    Real roots come first in descending order; a complex pair follows with the
    positive-imaginary root first.
    """
    g2, g3 = inv.g2, inv.g3
    if is_degenerate(inv):
        a = degenerate_parameter(inv)
        r = sorted([a, a, -2 * a], reverse=True)
        return complex(r[0]), complex(r[1]), complex(r[2])
    disc = discriminant(inv)
    if disc < 0:
        # three distinct real roots, trigonometric form
        rho = math.sqrt(g2 / 3.0)
        arg = max(-1.0, min(1.0, 3.0 * g3 / (g2 * rho)))
        theta = math.acos(arg) / 3.0
        roots = [rho * math.cos(theta - 2 * math.pi * k / 3) for k in range(3)]
        roots = [_newton_polish(inv, r).real for r in roots]
        roots.sort(reverse=True)
        return complex(roots[0]), complex(roots[1]), complex(roots[2])
    # one real root (Cardano), then the quadratic factor
    q = -g3 / 4.0
    D = disc / 1728.0
    sq = math.sqrt(D)
    er = float(np.cbrt(-q / 2 + sq) + np.cbrt(-q / 2 - sq))
    er = _newton_polish(inv, complex(er)).real
    c = er * er - g2 / 4.0
    im = math.sqrt(max(c - er * er / 4.0, 0.0))
    return complex(er), complex(-er / 2, im), complex(-er / 2, -im)


def _rf(x, y, z) -> complex:
    return complex(elliprf(complex(x), complex(y), complex(z)))


def half_periods(inv: Invariants) -> HalfPeriods:
    if is_degenerate(inv):
        if inv.g2 == 0 and inv.g3 == 0:
            return HalfPeriods(INF, I_INF)
        a = degenerate_parameter(inv)
        if a == 0:
            return HalfPeriods(INF, I_INF)
        if a < 0:
            return HalfPeriods(math.pi / (2 * math.sqrt(-3 * a)), I_INF)
        return HalfPeriods(INF, complex(0.0, math.pi / (2 * math.sqrt(3 * a))))
    e1, e2, e3 = cubic_roots(inv)
    if discriminant(inv) < 0:
        e1, e2, e3 = e1.real, e2.real, e3.real
        w1 = _rf(0.0, e1 - e2, e1 - e3).real
        w3 = _rf(0.0, e1 - e3, e2 - e3).real
        return HalfPeriods(w1, complex(0.0, w3))
    er, ec = e1.real, e2
    w1 = _rf(0.0, er - ec, er - ec.conjugate()).real
    wi = _rf(0.0, ec - er, ec.conjugate() - er).real
    return HalfPeriods(w1, complex(w1 / 2, wi / 2))


def laurent_coefficients(g2: float, g3: float, n: int = _N_LAURENT) -> list[float]:
    """``c[k]`` in ``wp(z) = z^-2 + sum_{k>=2} c[k] z^(2k-2)``; ``c[0] = c[1] = 0``."""
    c = [0.0] * (n + 1)
    if n >= 2:
        c[2] = g2 / 20.0
    if n >= 3:
        c[3] = g3 / 28.0
    for k in range(4, n + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3.0 * s / ((2 * k + 1) * (k - 3))
    return c


class _Lattice:
    """Cached per-invariants data for the doubling algorithm."""

    def __init__(self, g2: float, g3: float):
        self.inv = Invariants(g2, g3)
        self.periods = half_periods(self.inv)
        self.degenerate = not self.periods.finite
        if self.degenerate:
            a = degenerate_parameter(self.inv) if (g2 or g3) else 0.0
            self.a = a
            self.lam = cmath.sqrt(3 * a)
            return
        self.w1 = self.periods.omega1
        self.w3 = self.periods.omega3
        p1, p3 = 2 * self.w1, 2 * self.w3
        self.rmin = min(
            abs(m * p1 + n * p3)
            for m in range(-2, 3)
            for n in range(-2, 3)
            if (m, n) != (0, 0)
        )
        self.radius = self.rmin / 3.0
        self.c = laurent_coefficients(g2, g3)
        # quasi-periods from the unreduced core (omega1, omega3 lie on the cell boundary)
        self.eta1 = self._core(complex(self.w1))[2]
        self.eta3 = self._core(self.w3)[2]

    def reduce(self, z: complex) -> tuple[complex, int, int]:
        p1, p3 = 2 * self.w1, 2 * self.w3
        b = z.imag / p3.imag
        a = (z.real - b * p3.real) / p1
        m, n = math.floor(a + 0.5), math.floor(b + 0.5)
        return z - m * p1 - n * p3, m, n

    def _series(self, z: complex) -> tuple[complex, complex, complex, complex]:
        c = self.c
        z2 = z * z
        P = 0j
        dP = 0j
        Zs = 0j
        Ls = 0j
        zp = 1.0 + 0j  # z^(2k-4)
        for k in range(2, len(c)):
            zk = zp * z2  # z^(2k-2)
            P += c[k] * zk
            dP += (2 * k - 2) * c[k] * zk / z
            Zs += c[k] * zk * z / (2 * k - 1)
            Ls += c[k] * zk * z2 / ((2 * k - 1) * (2 * k))
            zp = zk
        P += 1 / z2
        dP += -2 / (z2 * z)
        Z = 1 / z - Zs
        S = z * cmath.exp(-Ls)
        return P, dP, Z, S

    def _core(self, z: complex) -> tuple[complex, complex, complex, complex]:
        n = 0
        r = abs(z)
        while r > self.radius:
            r /= 2
            n += 1
        P, dP, Z, S = self._series(z / 2**n)
        g2 = self.inv.g2
        for _ in range(n):
            lam = (6 * P * P - g2 / 2) / dP
            P2 = lam * lam / 4 - 2 * P
            dP2 = -(dP + lam * (P2 - P))
            Z = 2 * Z + lam / 2
            S = -dP * S**4
            P, dP = P2, dP2
        return P, dP, Z, S


@lru_cache(maxsize=128)
def _lattice(g2: float, g3: float) -> _Lattice:
    return _Lattice(g2, g3)


def lattice_of(inv: Invariants) -> _Lattice:
    return _lattice(float(inv.g2), float(inv.g3))


def _degenerate_guard(L: _Lattice, z: complex, guard: float) -> None:
    if L.lam == 0:
        if abs(z) < guard:
            raise PoleError(f"z = {z} is within {guard:g} of a pole")
        return
    if abs(cmath.sinh(L.lam * z) / L.lam) < guard:
        raise PoleError(f"z = {z} is within {guard:g} of a pole")


def wp(z: complex, inv: Invariants, guard: float = POLE_GUARD) -> tuple[complex, complex]:
    """Return ``(wp(z), wp'(z))``."""
    z = complex(z)
    L = lattice_of(inv)
    if L.degenerate:
        _degenerate_guard(L, z, guard)
        if L.lam == 0:
            return 1 / z**2, -2 / z**3
        lam = L.lam
        sh = cmath.sinh(lam * z)
        ch = cmath.cosh(lam * z)
        return lam**2 / sh**2 + L.a, -2 * lam**3 * ch / sh**3
    z0, _, _ = L.reduce(z)
    if abs(z0) < guard:
        raise PoleError(f"z = {z} is within {guard:g} of a lattice point")
    P, dP, _, _ = L._core(z0)
    return P, dP


def zeta(z: complex, inv: Invariants, guard: float = POLE_GUARD) -> complex:
    z = complex(z)
    L = lattice_of(inv)
    if L.degenerate:
        _degenerate_guard(L, z, guard)
        if L.lam == 0:
            return 1 / z
        lam = L.lam
        return lam * cmath.cosh(lam * z) / cmath.sinh(lam * z) - L.a * z
    z0, m, n = L.reduce(z)
    if abs(z0) < guard:
        raise PoleError(f"z = {z} is within {guard:g} of a lattice point")
    return L._core(z0)[2] + 2 * m * L.eta1 + 2 * n * L.eta3


def sigma(z: complex, inv: Invariants) -> complex:
    z = complex(z)
    L = lattice_of(inv)
    if L.degenerate:
        if L.lam == 0:
            return z
        lam = L.lam
        return cmath.sinh(lam * z) / lam * cmath.exp(-L.a * z * z / 2)
    z0, m, n = L.reduce(z)
    if z0 == 0:
        return 0j
    S = L._core(z0)[3]
    if m == 0 and n == 0:
        return S
    W = m * L.w1 + n * L.w3
    Hq = m * L.eta1 + n * L.eta3
    sign = -1 if (m + n + m * n) % 2 else 1
    return sign * cmath.exp(2 * Hq * (z0 + W)) * S


def quasi_periods(inv: Invariants) -> tuple[complex, complex]:
    """``(eta1, eta3) = (zeta(omega1), zeta(omega3))`` for a finite lattice."""
    L = lattice_of(inv)
    if L.degenerate:
        raise ValueError("quasi-periods are defined only for finite lattices")
    return L.eta1, L.eta3


def reduce_to_cell(z: complex, inv: Invariants) -> complex:
    """Representative of ``z`` in the centered period parallelogram.

    Degenerate lattices reduce modulo their single finite period, if any.
    """
    z = complex(z)
    L = lattice_of(inv)
    if not L.degenerate:
        return L.reduce(z)[0]
    hp = L.periods
    if math.isfinite(hp.omega1):
        p = 2 * hp.omega1
        return z - p * math.floor(z.real / p + 0.5)
    if cmath.isfinite(hp.omega3):
        p = 2 * hp.omega3.imag
        return z - 1j * p * math.floor(z.imag / p + 0.5)
    return z
