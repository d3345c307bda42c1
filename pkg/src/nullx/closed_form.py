"""Closed-form canonical frames of extremal null curves.

With ``e = eps (m/3 + i)`` and ``nu = sqrt(P(e))`` (principal root), the
frames are

Case I (``det U != 0``)::

    M = (4 eps nu)^(-1/2) diag(exp(phi/2), exp(-phi/2))
        [[i (h' + nu)/r,  2 i eps r],
         [i (nu - h')/r, -2 i eps r]]

Case II (``det U = 0``)::

    M = (-2 i eps)^(-1/2) [[1/r, -phi/(2i)], [0, 1]] [[1, 0], [-i h'/r, -2 i eps r]]

where ``r = sqrt(h - e)`` and ``phi`` is the elliptic integral of the third
kind ``int nu/(h - e) ds`` (Case I) or ``int ds/(h - e)`` (Case II).  The
momentum ``U`` has eigenvalues ``+-i nu``, which is why the Case I diagonal
carries ``phi/2``.  Each frame satisfies ``M^-1 M' = H(h)`` and ``det M = 1``.

Because ``Im(h - e) = -eps`` is constant for real ``h``, the principal branch
of ``r`` is continuous along the real line.  ``phi`` in Case I contains a
logarithm; its branch is pinned to be continuous from ``Potential.anchor``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .dynamics import hamiltonian_H
from .params import ModelParams
from .potentials import CaseTag, Potential, eval_potential
from .sl2c import ComplexMat2, project_to_ds
from .weierstrass import PoleError, cubic_roots, reduce_to_cell, sigma, wp, zeta, _rf

W_TOL_VALUE = 1e-9
W_TOL_DERIV = 1e-8


class FrameCase(str, Enum):
    CASE_I = "CASE_I"
    CASE_II = "CASE_II"
    CASE_III_FORMAL = "CASE_III_FORMAL"
    HELIX = "HELIX"


@dataclass(frozen=True)
class ClosedFormCase:
    tag: FrameCase
    nu: complex
    w: complex | None = None
    e3: complex | None = None


class InversionError(RuntimeError):
    """Newton inversion of the potential did not converge."""


def nu(inv, params: ModelParams) -> complex:
    """Principal square root of ``P(eps (m/3 + i))``; ``U`` has eigenvalues ``+-i nu``."""
    return cmath.sqrt(inv.cubic(params.e))


def case2_threshold(params: ModelParams) -> float:
    return 1e-9 * (1 + abs(params.m) ** 3)


def _newton_invert(p: Potential, target: complex, z: complex, iters: int = 40) -> complex:
    for _ in range(iters):
        P, dP = p.h_complex(z)
        step = (P - target) / dP
        z = z - step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return z


def find_w(p: Potential, params: ModelParams) -> complex:
    """Point ``w`` of the period parallelogram with ``h(w) = e`` and ``h'(w) = nu``.

    ``w`` is expressed in the coordinate of ``p`` (not of the underlying
    ``wp``) and reduced to the centered parallelogram.
    """
    if p.tag is CaseTag.CONSTANT:
        raise ValueError("a constant potential has no inversion point")
    e = params.e
    n = nu(p.inv, params)
    shift = p.shift
    if abs(n) ** 2 <= case2_threshold(params):
        hp = p.periods
        if not hp.finite:
            raise ValueError("det U = 0 requires a finite lattice")
        candidates = [complex(hp.omega1), hp.omega3, hp.omega1 + hp.omega3]
        # half-periods are exact zeros of wp'; Newton would only degrade them
        zw = min(candidates, key=lambda c: abs(wp(c, p.inv)[0] - e))
    else:
        e1, e2, e3 = cubic_roots(p.inv)
        z = _rf(e - e1, e - e2, e - e3)
        z = _newton_invert(p, e, z - shift) + shift
        dP = wp(z, p.inv)[1]
        if abs(dP + n) < abs(dP - n):
            z = -z
        zw = z
    w = reduce_to_cell(zw - shift, p.inv)
    hw, dhw = p.h_complex(w)
    if abs(hw - e) > W_TOL_VALUE or abs(dhw - n) > W_TOL_DERIV * max(1.0, abs(n)):
        raise InversionError(
            f"inversion failed: |h(w) - e| = {abs(hw - e):.2e}, |h'(w) - nu| = {abs(dhw - n):.2e}"
        )
    return w


@lru_cache(maxsize=256)
def classify_extremal(p: Potential, params: ModelParams) -> ClosedFormCase:
    n = nu(p.inv, params)
    if p.tag is CaseTag.CONSTANT:
        return ClosedFormCase(FrameCase.HELIX, n)
    if abs(n) ** 2 <= case2_threshold(params):
        if p.inv.g2 == 0 and p.inv.g3 == 0:
            return ClosedFormCase(FrameCase.CASE_III_FORMAL, 0j)
        return ClosedFormCase(FrameCase.CASE_II, n, find_w(p, params), params.e)
    return ClosedFormCase(FrameCase.CASE_I, n, find_w(p, params))


def _phi_case1_principal(p: Potential, s: float, cf: ClosedFormCase) -> complex:
    u = s + p.shift
    wz = cf.w + p.shift
    ratio = sigma(u - wz, p.inv) / sigma(u + wz, p.inv)
    return cmath.log(ratio) + 2 * u * zeta(wz, p.inv)


def _integrand(p: Potential, params: ModelParams, numerator: complex):
    e = params.e

    def f(t: float) -> complex:
        return numerator / (eval_potential(p, t).h - e)

    return f


def _quad_complex(f, a: float, b: float) -> complex:
    if a == b:
        return 0j
    re = quad(lambda t: f(t).real, a, b, limit=200, epsabs=1e-10)[0]
    im = quad(lambda t: f(t).imag, a, b, limit=200, epsabs=1e-10)[0]
    return complex(re, im)


def phi_by_quadrature(p: Potential, s: float, params: ModelParams, s_ref: float | None = None) -> complex:
    """Numerical antiderivative of the third-kind integrand, zero at ``s_ref``."""
    cf = classify_extremal(p, params)
    numerator = cf.nu if cf.tag is FrameCase.CASE_I else 1.0
    s_ref = p.anchor if s_ref is None else s_ref
    return _quad_complex(_integrand(p, params, numerator), s_ref, s)


def phi(
    p: Potential,
    s: float,
    params: ModelParams,
    *,
    formal_case3: bool = False,
) -> complex:
    """Third-kind elliptic integral along the potential.

    Case I returns ``log(sigma(u - w)/sigma(u + w)) + 2 u zeta(w)`` with
    ``u = s + shift``, its logarithm continued from ``p.anchor``.  Case II
    returns ``(zeta(u + w) + e u) / (g2/4 - 3 (m/3 + i)^2)``.  With
    ``formal_case3`` and ``g2 = g3 = 0`` the formal cubic ``s^3/3`` is returned.
    """
    if formal_case3:
        if p.inv.g2 != 0 or p.inv.g3 != 0:
            raise ValueError("the formal third case needs g2 = g3 = 0")
        return complex(s**3 / 3)
    cf = classify_extremal(p, params)
    if cf.tag is FrameCase.CASE_I:
        val = _phi_case1_principal(p, s, cf)
        a = p.anchor
        if s == a:
            return val
        base = _phi_case1_principal(p, a, cf)
        approx = base + _quad_rough(p, params, cf.nu, a, s)
        k = round((approx - val).imag / (2 * math.pi))
        return val + 2j * math.pi * k
    if cf.tag is FrameCase.CASE_II:
        u = s + p.shift
        wz = cf.w + p.shift
        c = complex(params.m / 3, 1.0)
        return (zeta(u + wz, p.inv) + params.e * u) / (p.inv.g2 / 4 - 3 * c * c)
    raise ValueError(f"phi is not defined for {cf.tag.value}")


def _quad_rough(p: Potential, params: ModelParams, numerator: complex, a: float, b: float) -> complex:
    # Gauss-Legendre on subintervals; only needs to resolve multiples of 2*pi
    n_sub = max(1, int(math.ceil(abs(b - a) / 0.25)))
    x, wts = np.polynomial.legendre.leggauss(8)
    f = _integrand(p, params, numerator)
    total = 0j
    edges = np.linspace(a, b, n_sub + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        total += half * sum(wt * f(mid + half * xi) for xi, wt in zip(x, wts))
    return total


def frame_case1(p: Potential, s: float, params: ModelParams, *, _phi_sign: float = 1.0) -> ComplexMat2:
    cf = classify_extremal(p, params)
    if cf.tag is not FrameCase.CASE_I:
        raise ValueError(f"frame_case1 called for {cf.tag.value}")
    j = eval_potential(p, s)
    eps, n = params.eps, cf.nu
    r = cmath.sqrt(j.h - params.e)
    f = _phi_sign * phi(p, s, params)
    B = np.array(
        [[1j * (j.h1 + n) / r, 2j * eps * r], [1j * (n - j.h1) / r, -2j * eps * r]],
        dtype=complex,
    )
    D = np.diag([cmath.exp(f / 2), cmath.exp(-f / 2)])
    return D @ B / cmath.sqrt(4 * eps * n)


def frame_case2(p: Potential, s: float, params: ModelParams, *, _phi_sign: float = 1.0) -> ComplexMat2:
    cf = classify_extremal(p, params)
    if cf.tag is not FrameCase.CASE_II:
        raise ValueError(f"frame_case2 called for {cf.tag.value}")
    j = eval_potential(p, s)
    eps = params.eps
    r = cmath.sqrt(j.h - params.e)
    f = _phi_sign * phi(p, s, params)
    left = np.array([[1 / r, -f / 2j], [0, 1]], dtype=complex)
    right = np.array([[1, 0], [-1j * j.h1 / r, -2j * eps * r]], dtype=complex)
    return left @ right / cmath.sqrt(-2j * eps)


def helix_frame(k0: float, s: float, params: ModelParams) -> ComplexMat2:
    """``exp(s H(k0))`` via ``H(k0)^2 = eps (k0 + i) I``."""
    lam = cmath.sqrt(params.eps * (k0 + 1j))
    H = np.array([[0, params.eps], [k0 + 1j, 0]], dtype=complex)
    return cmath.cosh(s * lam) * np.eye(2, dtype=complex) + (cmath.sinh(s * lam) / lam) * H


def extremal_frame(
    p: Potential, s: float, params: ModelParams, *, _phi_sign: float = 1.0
) -> tuple[ClosedFormCase, ComplexMat2]:
    """Dispatch to the Case I, Case II or helix frame for ``p``."""
    cf = classify_extremal(p, params)
    if cf.tag is FrameCase.HELIX:
        eval_potential(p, s)
        k0 = 2 * params.eps * p.case.a + params.m / 3
        return cf, helix_frame(k0, s, params)
    if cf.tag is FrameCase.CASE_I:
        return cf, frame_case1(p, s, params, _phi_sign=_phi_sign)
    if cf.tag is FrameCase.CASE_II:
        return cf, frame_case2(p, s, params, _phi_sign=_phi_sign)
    raise ValueError("the formal third case has no frame (unreachable for real m)")


def structure_residual(
    p: Potential, s: float, params: ModelParams, *, step: float = 1e-4, _phi_sign: float = 1.0
) -> float:
    """``|M^-1 M' - H(h)|`` at ``s`` with a five-point derivative of the frame."""
    def M(t):
        return extremal_frame(p, t, params, _phi_sign=_phi_sign)[1]

    dM = (-M(s + 2 * step) + 8 * M(s + step) - 8 * M(s - step) + M(s - 2 * step)) / (12 * step)
    H = hamiltonian_H(eval_potential(p, s).h, params)
    return float(np.linalg.norm(np.linalg.solve(M(s), dM) - H))


def curve_point(M: ComplexMat2) -> ComplexMat2:
    """The de Sitter point ``M J M*`` framed by ``M``."""
    return project_to_ds(M, tol=1e-6)


__all__ = [
    "ClosedFormCase",
    "FrameCase",
    "InversionError",
    "PoleError",
    "classify_extremal",
    "curve_point",
    "extremal_frame",
    "find_w",
    "frame_case1",
    "frame_case2",
    "helix_frame",
    "nu",
    "phi",
    "phi_by_quadrature",
    "structure_residual",
]
