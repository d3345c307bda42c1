"""Hamiltonian matrix, momentum matrix and the Lax form of the extremal equations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ModelParams
from .potentials import Jet3, Potential, eval_potential
from .sl2c import DEFAULT_TOL, ComplexMat2, _require_unimodular, commutator, frob, inv2

__all__ = [
    "ModelParams",
    "MomentumLift",
    "hamiltonian_H",
    "hamiltonian_k",
    "momentum_U",
    "momentum_U_prime",
    "lax_residual",
    "momentum_map",
    "lift_to_momentum_space",
    "expected_det_U",
]


@dataclass(frozen=True)
class MomentumLift:
    x1: float
    x2: float
    x3: float
    x4: float = 0.0
    x5: float = 1.0


def hamiltonian_k(k: float, params: ModelParams) -> ComplexMat2:
    """``H(k) = [[0, eps], [k + i, 0]]``."""
    return np.array([[0, params.eps], [k + 1j, 0]], dtype=complex)


def hamiltonian_H(h: float, params: ModelParams) -> ComplexMat2:
    """``H`` written in the reduced curvature, ``k = 2 eps h + m/3``."""
    return hamiltonian_k(2 * params.eps * h + params.m / 3, params)


def momentum_U(j: Jet3, params: ModelParams) -> ComplexMat2:
    m, eps = params.m, params.eps
    h, h1, h2 = j.h, j.h1, j.h2
    u12 = 2j * eps * (h - params.e)
    u21 = 2 * (h + 2 * eps * m / 3) - 1j * eps * (
        h2 - 4 * h * h + 2 * eps * m * h / 3 + 2 * m * m / 9 - 2
    )
    return np.array([[1j * h1, u12], [u21, -1j * h1]], dtype=complex)


def momentum_U_prime(j: Jet3, params: ModelParams) -> ComplexMat2:
    """Exact s-derivative of ``U`` along a solution, using ``h''' = 12 h h'``."""
    m, eps = params.m, params.eps
    h, h1, h2 = j.h, j.h1, j.h2
    h3 = 12 * h * h1
    d12 = 2j * eps * h1
    d21 = 2 * h1 - 1j * eps * (h3 - 8 * h * h1 + 2 * eps * m * h1 / 3)
    return np.array([[1j * h2, d12], [d21, -1j * h2]], dtype=complex)


def expected_det_U(inv, params: ModelParams) -> complex:
    """``P(eps (m/3 + i); g2, g3)``, which ``det U`` equals on every solution."""
    return inv.cubic(params.e)


def lax_residual(p: Potential, s: float, params: ModelParams) -> float:
    """Frobenius norm of ``U' - [U, H]`` at ``s``."""
    j = eval_potential(p, s)
    U = momentum_U(j, params)
    H = hamiltonian_H(j.h, params)
    return frob(momentum_U_prime(j, params) - commutator(U, H))


def momentum_map(A: ComplexMat2, U: ComplexMat2, tol: float = DEFAULT_TOL) -> ComplexMat2:
    """``A U A^-1``; constant along integral curves of the extremal system."""
    _require_unimodular(A, tol)
    return A @ U @ inv2(A)


def lift_to_momentum_space(k: float, k1: float, k2: float, params: ModelParams) -> MomentumLift:
    eps, m = params.eps, params.m
    x1 = -eps / 2 * k1
    x2 = k2 / 4 - eps / 2 * (k * k - m * k + 2)
    x3 = eps / 2 * (m + k)
    return MomentumLift(x1, x2, x3)
