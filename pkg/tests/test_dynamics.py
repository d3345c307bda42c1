import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullx.dynamics import (
    MomentumLift,
    expected_det_U,
    hamiltonian_H,
    hamiltonian_k,
    lax_residual,
    lift_to_momentum_space,
    momentum_map,
    momentum_U,
    momentum_U_prime,
)
from nullx.params import ModelParams
from nullx.potentials import Jet3, constant_potential, eval_potential, invariants_from_jet, make_potential
from nullx.sl2c import det2, frob
from nullx.weierstrass import Invariants

PARAMS = [ModelParams(m, eps) for m in (0, 1, -1, 3) for eps in (1, -1)]
POTENTIALS = [((4, 0), "wp"), ((4, 0), "auto"), ((0, 4), "auto"), ((12, 8), "auto"), ((12, -8), "auto"), ((0, 0), "auto")]

jets = st.builds(Jet3, st.floats(-20, 20), st.floats(-20, 20), st.floats(-20, 20))
param_st = st.builds(ModelParams, st.floats(-5, 5), st.sampled_from([1, -1]))


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(0, 2)
    assert ModelParams(3, -1).e == -(1 + 1j)


def test_hamiltonian_examples():
    np.testing.assert_array_equal(hamiltonian_H(0, ModelParams(0, 1)), [[0, 1], [1j, 0]])
    np.testing.assert_array_equal(hamiltonian_H(1, ModelParams(3, 1)), [[0, 1], [3 + 1j, 0]])


@settings(max_examples=200, deadline=None)
@given(st.floats(-50, 50), st.sampled_from([1, -1]))
def test_hamiltonian_square(k, eps):
    H = hamiltonian_k(k, ModelParams(0, eps))
    np.testing.assert_allclose(H @ H, eps * (k + 1j) * np.eye(2), atol=1e-12)


def test_momentum_example():
    U = momentum_U(Jet3(1, -2, 6), ModelParams(0, 1))
    np.testing.assert_allclose(U, [[-2j, 2 + 2j], [2, 2j]], atol=1e-15)
    assert det2(U) == pytest.approx(-4j)
    assert expected_det_U(Invariants(0, 0), ModelParams(0, 1)) == pytest.approx(-4j)


@settings(max_examples=500, deadline=None)
@given(jets, param_st)
def test_det_U_is_cubic_at_e(j, params):
    U = momentum_U(j, params)
    assert abs(np.trace(U)) == 0
    inv = invariants_from_jet(j)
    expected = expected_det_U(inv, params)
    scale = 1 + abs(j.h) ** 3 + j.h1**2 + abs(j.h2) ** 1.5 + abs(params.m) ** 3
    assert abs(det2(U) - expected) <= 1e-10 * scale


@settings(max_examples=300, deadline=None)
@given(jets, param_st)
def test_eigenvalues_are_plus_minus_i_nu(j, params):
    # U is traceless with det U = nu^2, so its spectrum is {+i nu, -i nu}
    U = momentum_U(j, params)
    nu = np.sqrt(complex(expected_det_U(invariants_from_jet(j), params)))
    ev = np.linalg.eigvals(U)
    scale = 1 + np.abs(U).max()
    for target in (1j * nu, -1j * nu):
        assert min(abs(ev - target)) <= 1e-6 * scale


@pytest.mark.parametrize("g,branch", POTENTIALS)
@pytest.mark.parametrize("params", PARAMS)
def test_lax_residual(g, branch, params):
    p = make_potential(Invariants(*g), branch)
    lo, hi = p.default_interval()
    for s in np.linspace(lo, hi, 1000):
        scale = 1 + abs(eval_potential(p, s).h) ** 2
        assert lax_residual(p, s, params) <= 1e-10 * scale


def test_lax_examples():
    assert lax_residual(make_potential(Invariants(0, 0)), 1.0, ModelParams(0, 1)) <= 1e-10
    assert lax_residual(make_potential(Invariants(12, -8)), 0.5, ModelParams(1, -1)) <= 1e-10


@pytest.mark.parametrize("h0", [0.0, 1.0, -0.7])
def test_stationary_jet_commutes(h0):
    p = constant_potential(h0)
    params = ModelParams(1.5, -1)
    j = eval_potential(p, 0.3)
    U, H = momentum_U(j, params), hamiltonian_H(j.h, params)
    assert frob(U @ H - H @ U) <= 1e-12
    assert frob(momentum_U_prime(j, params)) == 0


def test_trace_U_squared_is_conserved():
    p = make_potential(Invariants(5, -2))
    params = ModelParams(2, 1)
    h = 1e-4
    for s in np.linspace(0, 2, 21):
        Us = [momentum_U(eval_potential(p, s + d), params) for d in (-h, h)]
        t = [np.trace(U @ U) for U in Us]
        # two-point difference of an O(10) constant: roundoff floor is ~1e-11
        assert abs(t[1] - t[0]) / (2 * h) <= 1e-8 * (1 + abs(t[0]))


@settings(max_examples=100, deadline=None)
@given(jets, st.lists(st.floats(-3, 3), min_size=8, max_size=8))
def test_momentum_map_similarity(j, v):
    A = np.array(v[:4], dtype=complex).reshape(2, 2) + 1j * np.array(v[4:]).reshape(2, 2)
    d = np.linalg.det(A)
    if abs(d) < 1e-2:
        return
    A = A / np.sqrt(d)
    U = momentum_U(j, ModelParams(0.5, 1))
    Phi = momentum_map(A, U, tol=1e-9)
    scale = (1 + np.abs(A).max()) ** 4 * (1 + np.abs(U).max()) ** 2
    assert abs(det2(Phi) - det2(U)) <= 1e-12 * scale
    assert abs(np.trace(Phi)) <= 1e-12 * scale


def test_momentum_map_identity_and_rejection():
    U = momentum_U(Jet3(1, -2, 6), ModelParams())
    np.testing.assert_array_equal(momentum_map(np.eye(2, dtype=complex), U), U)
    with pytest.raises(ValueError):
        momentum_map(2 * np.eye(2, dtype=complex), U)


def test_lift_examples():
    m = 1.2
    x = lift_to_momentum_space(m / 3, 0, 0, ModelParams(m, 1))
    assert (x.x1, x.x2, x.x3) == pytest.approx((0, -0.5 * (2 - 2 * m * m / 9), 2 * m / 3))
    x = lift_to_momentum_space(2, -4, 12, ModelParams(0, 1))
    assert x == MomentumLift(2, 0, 1, 0, 1)
    assert (x.x4, x.x5) == (0, 1)
