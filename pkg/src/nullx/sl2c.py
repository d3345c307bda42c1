"""Complex 2x2 matrix algebra and the Hermitian model of de Sitter 3-space.

Matrices are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype
``complex128``.  A point of de Sitter space is a Hermitian matrix ``X`` with
``det X = -1``; the Lorentz quadratic form is ``<X, X> = -det X``.

Coordinates use the chart

    X = [[x0 + x3, x1 + i x2],
         [x1 - i x2, x0 - x3]]

so that ``<X, X> = -x0**2 + x1**2 + x2**2 + x3**2``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

DEFAULT_TOL = 1e-9

ComplexMat2 = np.ndarray

IDENTITY = np.eye(2, dtype=complex)
J = np.array([[0, -1j], [1j, 0]], dtype=complex)


class MinkowskiVec(NamedTuple):
    x0: float
    x1: float
    x2: float
    x3: float


def mat2(a11, a12, a21, a22) -> ComplexMat2:
    return np.array([[a11, a12], [a21, a22]], dtype=complex)


def det2(M: ComplexMat2) -> complex:
    return complex(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])


def trace2(M: ComplexMat2) -> complex:
    return complex(M[0, 0] + M[1, 1])


def inv2(M: ComplexMat2) -> ComplexMat2:
    """Closed-form inverse; raises ``ZeroDivisionError`` for singular input."""
    d = det2(M)
    if d == 0:
        raise ZeroDivisionError("singular 2x2 matrix")
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=complex) / d


def adjoint(M: ComplexMat2) -> ComplexMat2:
    return np.conj(M).T


def frob(M: ComplexMat2) -> float:
    return float(np.sqrt(np.sum(np.abs(M) ** 2)))


def is_unimodular(M: ComplexMat2, tol: float = DEFAULT_TOL) -> bool:
    return abs(det2(M) - 1) <= tol


def is_hermitian(M: ComplexMat2, tol: float = DEFAULT_TOL) -> bool:
    return frob(M - adjoint(M)) <= tol


def is_traceless(M: ComplexMat2, tol: float = DEFAULT_TOL) -> bool:
    return abs(trace2(M)) <= tol


def _require_hermitian(X: ComplexMat2, tol: float, name: str = "X") -> None:
    res = frob(X - adjoint(X))
    if res > tol:
        raise ValueError(f"{name} is not Hermitian (residual {res:.3e} > {tol:.1e})")


def _require_unimodular(A: ComplexMat2, tol: float, name: str = "A") -> None:
    res = abs(det2(A) - 1)
    if res > tol:
        raise ValueError(f"{name} is not in SL(2,C) (|det - 1| = {res:.3e} > {tol:.1e})")


def lorentz_inner(X: ComplexMat2, Y: ComplexMat2, tol: float = DEFAULT_TOL) -> float:
    """Polarized Lorentz product ``-(det(X+Y) - det X - det Y) / 2``."""
    _require_hermitian(X, tol, "X")
    _require_hermitian(Y, tol, "Y")
    val = -(det2(X + Y) - det2(X) - det2(Y)) / 2
    return float(val.real)


def project_to_ds(A: ComplexMat2, tol: float = DEFAULT_TOL) -> ComplexMat2:
    """Bundle projection ``A -> A J A*`` onto de Sitter space."""
    _require_unimodular(A, tol)
    return A @ J @ adjoint(A)


def commutator(A: ComplexMat2, B: ComplexMat2) -> ComplexMat2:
    return A @ B - B @ A


def minkowski_coords(X: ComplexMat2, tol: float = DEFAULT_TOL) -> MinkowskiVec:
    _require_hermitian(X, tol)
    # average with the adjoint so round-off asymmetry does not bias the chart
    Xh = (X + adjoint(X)) / 2
    p = Xh[0, 0].real
    q = Xh[1, 1].real
    return MinkowskiVec((p + q) / 2, Xh[0, 1].real, Xh[0, 1].imag, (p - q) / 2)


def hermitian_from_coords(v: MinkowskiVec | tuple) -> ComplexMat2:
    x0, x1, x2, x3 = v
    return np.array([[x0 + x3, x1 + 1j * x2], [x1 - 1j * x2, x0 - x3]], dtype=complex)


def minkowski_inner(u: MinkowskiVec | tuple, v: MinkowskiVec | tuple) -> float:
    """Signature (-,+,+,+) product in the coordinate chart."""
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
