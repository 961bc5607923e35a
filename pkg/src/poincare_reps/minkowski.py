"""Minkowski geometry and the two-fold covering SL(2,C) -> restricted Lorentz group.

Four-vectors are plain ``float`` arrays of shape ``(..., 4)`` with contravariant
components ``(x0, x1, x2, x3)``; group elements are complex arrays of shape
``(..., 2, 2)``.  Every function broadcasts over leading axes.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import expm

ETA = np.diag([1.0, -1.0, -1.0, -1.0])

# sigma_mu = (1, sigma_1, sigma_2, sigma_3), lower index: x = x^mu sigma_mu
PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# read at call time by hat(); tests swap it to check negative controls
EPSILON = np.array([[0.0, 1.0], [-1.0, 0.0]])

HERMITIAN_TOL = 1e-10


def minkowski_dot(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x[..., 0] * y[..., 0] - x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2] - x[..., 3] * y[..., 3]


def lower(x):
    """Covariant components x_mu = eta_{mu nu} x^nu."""
    x = np.asarray(x)
    return x * np.array([1.0, -1.0, -1.0, -1.0])


def to_hermitian(x):
    """The 2x2 matrix x0 + x.sigma; complex input gives the complex-linear extension."""
    x = np.asarray(x)
    out = np.empty(x.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = x[..., 0] + x[..., 3]
    out[..., 0, 1] = x[..., 1] - 1j * x[..., 2]
    out[..., 1, 0] = x[..., 1] + 1j * x[..., 2]
    out[..., 1, 1] = x[..., 0] - x[..., 3]
    return out


def from_hermitian_complex(X):
    """Inverse of the complex-linear extension of :func:`to_hermitian`."""
    X = np.asarray(X, dtype=complex)
    out = np.empty(X.shape[:-2] + (4,), dtype=complex)
    out[..., 0] = 0.5 * (X[..., 0, 0] + X[..., 1, 1])
    out[..., 3] = 0.5 * (X[..., 0, 0] - X[..., 1, 1])
    out[..., 1] = 0.5 * (X[..., 0, 1] + X[..., 1, 0])
    out[..., 2] = 0.5j * (X[..., 0, 1] - X[..., 1, 0])
    return out


def from_hermitian(X, tol: float = HERMITIAN_TOL):
    X = np.asarray(X, dtype=complex)
    if X.shape[-2:] != (2, 2):
        raise ValueError(f"expected 2x2 matrices, got shape {X.shape}")
    dev = np.max(np.abs(X - np.conj(np.swapaxes(X, -1, -2))), initial=0.0)
    if dev > tol:
        raise ValueError(f"matrix is not hermitian (deviation {dev:.3e})")
    return from_hermitian_complex(X).real


def dagger(A):
    return np.conj(np.swapaxes(A, -1, -2))


def covering_map(A):
    """Lorentz matrix lambda(A) defined by  lambda(A)x  <->  A x A^dagger."""
    A = np.asarray(A, dtype=complex)
    images = A[..., None, :, :] @ PAULI @ dagger(A)[..., None, :, :]
    # column nu of Lambda is the image of the basis vector e_nu
    cols = from_hermitian_complex(images).real
    return np.swapaxes(cols, -1, -2)


def act(A, x):
    """Lambda_A x for a group element A and four-vector(s) x."""
    return np.einsum("...ij,...j->...i", covering_map(A), np.asarray(x, dtype=float))


def hat(A):
    """eps conj(A) eps^{-1}; equals (A^dagger)^{-1} on SL(2,C)."""
    eps = EPSILON
    return eps @ np.conj(np.asarray(A, dtype=complex)) @ np.linalg.inv(eps)


def is_lorentz(L, tol: float = 1e-12) -> bool:
    L = np.asarray(L, dtype=float)
    ok_metric = np.max(np.abs(np.swapaxes(L, -1, -2) @ ETA @ L - ETA)) < tol
    ok_det = np.all(np.abs(np.linalg.det(L) - 1.0) < tol * 10)
    ok_time = np.all(L[..., 0, 0] >= 1.0 - tol)
    return bool(ok_metric and ok_det and ok_time)


def boost_z(rapidity: float) -> np.ndarray:
    """SL(2,C) element diag(e^{t/2}, e^{-t/2}): boost along z with rapidity t."""
    return np.diag([np.exp(rapidity / 2), np.exp(-rapidity / 2)]).astype(complex)


def rotation(axis, angle: float) -> np.ndarray:
    """SU(2) element exp(-i angle n.sigma/2)."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    ns = n[0] * PAULI[1] + n[1] * PAULI[2] + n[2] * PAULI[3]
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * ns


def random_sl2c(rng: np.random.Generator, size: int | None = None, scale: float = 1.0):
    """exp of a random traceless complex matrix with entries of modulus <= scale."""
    shape = () if size is None else (size,)
    z = rng.uniform(0, scale, shape + (3,)) * np.exp(2j * np.pi * rng.uniform(size=shape + (3,)))
    X = np.empty(shape + (2, 2), dtype=complex)
    X[..., 0, 0] = z[..., 0]
    X[..., 1, 1] = -z[..., 0]
    X[..., 0, 1] = z[..., 1]
    X[..., 1, 0] = z[..., 2]
    if size is None:
        return expm(X)
    return np.array([expm(x) for x in X])


def random_su2(rng: np.random.Generator, size: int | None = None):
    shape = () if size is None else (size,)
    q = rng.normal(size=shape + (4,))
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    U = np.empty(shape + (2, 2), dtype=complex)
    U[..., 0, 0] = q[..., 0] + 1j * q[..., 3]
    U[..., 0, 1] = q[..., 2] + 1j * q[..., 1]
    U[..., 1, 0] = -q[..., 2] + 1j * q[..., 1]
    U[..., 1, 1] = q[..., 0] - 1j * q[..., 3]
    return U


def random_on_shell(rng: np.random.Generator, mass: float, size: int | None = None, spread: float = 2.0):
    """Momenta on H_m^+ (or the forward light cone for mass 0) with Gaussian 3-momenta."""
    shape = () if size is None else (size,)
    p3 = rng.normal(scale=spread * max(mass, 1.0), size=shape + (3,))
    p0 = np.sqrt(np.sum(p3**2, axis=-1) + mass**2)
    return np.concatenate([p0[..., None], p3], axis=-1)
