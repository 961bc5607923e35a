import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poincare_reps import minkowski as mk

finite = st.floats(-3, 3, allow_nan=False)


def test_pauli_basis_frozen():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    expected = np.array([[5, 2 - 3j], [2 + 3j, -3]])
    assert np.array_equal(mk.to_hermitian(x), expected)
    assert np.allclose(mk.from_hermitian(expected), x)


def test_from_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        mk.from_hermitian(np.array([[1, 1j], [1j, 1]]))


def test_boost_z_is_rapidity_boost():
    eta = 0.7
    L = mk.covering_map(mk.boost_z(eta))
    expected = np.eye(4)
    expected[0, 0] = expected[3, 3] = np.cosh(eta)
    expected[0, 3] = expected[3, 0] = np.sinh(eta)
    assert np.allclose(L, expected, atol=1e-14)


def test_rotation_by_2pi_is_minus_one():
    R = mk.rotation([0.3, -0.2, 0.9], 2 * np.pi)
    assert np.allclose(R, -np.eye(2), atol=1e-14)
    assert np.allclose(mk.covering_map(R), np.eye(4), atol=1e-14)


def test_rotation_quarter_turn_about_z():
    L = mk.covering_map(mk.rotation([0, 0, 1], np.pi / 2))
    assert np.allclose(L @ [0, 1, 0, 0], [0, 0, 1, 0], atol=1e-15)


def test_hat_of_su2_is_itself(rng):
    U = mk.random_su2(rng, 20)
    assert np.max(np.abs(mk.hat(U) - U)) < 1e-14


def test_hat_is_inverse_adjoint(rng):
    A = mk.random_sl2c(rng, 50)
    assert np.max(np.abs(mk.hat(A) - np.linalg.inv(mk.dagger(A)))) < 1e-12


def test_covering_map_is_lorentz(rng):
    for A in mk.random_sl2c(rng, 20):
        assert mk.is_lorentz(mk.covering_map(A), 1e-11)


@settings(max_examples=200, deadline=None)
@given(st.lists(finite, min_size=4, max_size=4), st.lists(finite, min_size=4, max_size=4))
def test_det_and_polarization(x, y):
    x, y = np.array(x), np.array(y)
    assert abs(np.linalg.det(mk.to_hermitian(x)).real - mk.minkowski_dot(x, x)) < 1e-12 * (1 + x @ x)
    X, Y = mk.to_hermitian(x), mk.to_hermitian(y)
    # <x, y> = (det(X + Y) - det X - det Y) / 2
    lhs = (np.linalg.det(X + Y) - np.linalg.det(X) - np.linalg.det(Y)).real / 2
    assert abs(lhs - mk.minkowski_dot(x, y)) < 1e-11 * (1 + x @ x + y @ y)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_action_preserves_interval(seed):
    r = np.random.default_rng(seed)
    A = mk.random_sl2c(r)
    x = r.normal(size=4)
    y = mk.act(A, x)
    assert abs(mk.minkowski_dot(y, y) - mk.minkowski_dot(x, x)) < 1e-10 * (1 + np.abs(y).max() ** 2)


def test_random_on_shell(rng):
    p = mk.random_on_shell(rng, 1.3, 100)
    assert np.allclose(mk.minkowski_dot(p, p), 1.3**2)
    assert np.all(p[:, 0] > 0)
