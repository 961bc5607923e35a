"""Mass-shell orbits, boost sections L(p), little groups and Wigner rotations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .irreps import spin_generators
from .minkowski import act, dagger, minkowski_dot, to_hermitian

ON_SHELL_RTOL = 1e-9
MASSLESS_FLOOR = 1e-9
STABILIZER_TOL = 1e-10

CANONICAL = "canonical"
HELICITY = "helicity"
BOOST_CHOICES = (CANONICAL, HELICITY)


@dataclass(frozen=True)
class MassShell:
    mass: float

    def __post_init__(self):
        if self.mass < 0:
            raise ValueError("mass must be >= 0")

    @property
    def massive(self) -> bool:
        return self.mass > 0

    @property
    def standard_momentum(self) -> np.ndarray:
        if self.massive:
            return np.array([self.mass, 0.0, 0.0, 0.0])
        return np.array([0.5, 0.0, 0.0, 0.5])

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        scale = max(self.mass**2, np.max(p[..., 0] ** 2))
        shell = np.abs(minkowski_dot(p, p) - self.mass**2) <= ON_SHELL_RTOL * scale
        return bool(np.all(shell & (p[..., 0] > 0)))


def _check_massive(m: float, p) -> np.ndarray:
    if m <= 0:
        raise ValueError("massive boost needs m > 0")
    p = np.asarray(p, dtype=float)
    if not MassShell(m).contains(p):
        raise ValueError("momentum is not on the mass shell H_m^+")
    return p


def canonical_boost(m: float, p) -> np.ndarray:
    """Positive hermitian L(p) = (m + p)/sqrt(2m(m + p0))."""
    p = _check_massive(m, p)
    num = m * np.eye(2) + to_hermitian(p)
    return num / np.sqrt(2 * m * (m + p[..., 0]))[..., None, None]


def polar_angles(p3):
    """(theta, phi) of 3-vectors, phi in [0, 2pi); the zero vector maps to (0, 0)."""
    p3 = np.asarray(p3, dtype=float)
    r = np.linalg.norm(p3, axis=-1)
    safe = np.where(r > 0, r, 1.0)
    theta = np.where(r > 0, np.arccos(np.clip(p3[..., 2] / safe, -1.0, 1.0)), 0.0)
    phi = np.mod(np.arctan2(p3[..., 1], p3[..., 0]), 2 * np.pi)
    phi = np.where(np.hypot(p3[..., 0], p3[..., 1]) > 0, phi, 0.0)
    return theta, phi


def direction_rotation(p3) -> np.ndarray:
    """R = exp(-i phi sigma_3/2) exp(-i theta sigma_2/2), rotating z-hat into p-hat."""
    theta, phi = polar_angles(p3)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    em, ep = np.exp(-0.5j * phi), np.exp(0.5j * phi)
    R = np.empty(np.shape(theta) + (2, 2), dtype=complex)
    R[..., 0, 0] = em * c
    R[..., 0, 1] = -em * s
    R[..., 1, 0] = ep * s
    R[..., 1, 1] = ep * c
    return R


def helicity_boost(m: float, p):
    """Polar decomposition pieces (R, H) with L(p) = R H."""
    p = _check_massive(m, p)
    r = np.linalg.norm(p[..., 1:], axis=-1)
    H = np.zeros(np.shape(r) + (2, 2), dtype=complex)
    H[..., 0, 0] = np.sqrt((p[..., 0] + r) / m)
    H[..., 1, 1] = np.sqrt(np.maximum(p[..., 0] - r, 0.0) / m)
    return direction_rotation(p[..., 1:]), H


def boost(m: float, p, choice: str = CANONICAL) -> np.ndarray:
    """The section L(p) for the requested choice (massless orbit when m == 0)."""
    if m == 0:
        return massless_boost(p)
    if choice == CANONICAL:
        return canonical_boost(m, p)
    if choice == HELICITY:
        R, H = helicity_boost(m, p)
        return R @ H
    raise ValueError(f"unknown boost choice {choice!r}")


def massless_boost(p, floor: float = MASSLESS_FLOOR) -> np.ndarray:
    """L(p) = R(p-hat) diag(sqrt(p0/pi0), sqrt(pi0/p0)), pi = (1/2, 0, 0, 1/2)."""
    p = np.asarray(p, dtype=float)
    if np.any(p[..., 0] < floor):
        raise ValueError("lightlike momentum too close to the origin")
    if not MassShell(0.0).contains(p):
        raise ValueError("momentum is not on the forward light cone")
    pi0 = 0.5
    D = np.zeros(p.shape[:-1] + (2, 2), dtype=complex)
    D[..., 0, 0] = np.sqrt(p[..., 0] / pi0)
    D[..., 1, 1] = np.sqrt(pi0 / p[..., 0])
    return direction_rotation(p[..., 1:]) @ D


def wigner_rotation(choice: str, m: float, p, A) -> np.ndarray:
    """W(p, A) = L(Lambda_A p)^{-1} A L(p), an element of the little group of pi."""
    p = np.asarray(p, dtype=float)
    A = np.asarray(A, dtype=complex)
    q = act(A, p)
    if m > 0:
        q[..., 0] = np.sqrt(np.sum(q[..., 1:] ** 2, axis=-1) + m * m)
    else:
        q[..., 0] = np.linalg.norm(q[..., 1:], axis=-1)
    return np.linalg.inv(boost(m, q, choice)) @ A @ boost(m, p, choice)


def pullback_wigner(choice: str, m: float, p, A) -> np.ndarray:
    """R(p, A) = L(p)^{-1} A L(Lambda_A^{-1} p) = W(Lambda_A^{-1} p, A)."""
    q = act(np.linalg.inv(A), p)
    return wigner_rotation(choice, m, q, A)


PI_MASSLESS = to_hermitian(np.array([0.5, 0.0, 0.0, 0.5]))


def stabilizes_massless(A, tol: float = STABILIZER_TOL) -> bool:
    A = np.asarray(A, dtype=complex)
    return bool(np.max(np.abs(A @ PI_MASSLESS @ dagger(A) - PI_MASSLESS)) <= tol)


def massless_little_group_decompose(A, tol: float = STABILIZER_TOL):
    """(a, phi) with A = [[e^{i phi/2}, a e^{-i phi/2}], [0, e^{-i phi/2}]], phi in [0, 4 pi)."""
    A = np.asarray(A, dtype=complex)
    if not stabilizes_massless(A, tol):
        raise ValueError("matrix does not stabilize the standard lightlike momentum")
    z = A[..., 0, 0] / np.abs(A[..., 0, 0])
    phi = np.mod(2 * np.angle(z), 4 * np.pi)
    a = A[..., 0, 1] * z
    return a, phi


def massless_little_group_element(a: complex, phi: float) -> np.ndarray:
    z = np.exp(0.5j * phi)
    return np.array([[z, a / z], [0.0, 1 / z]], dtype=complex)


def euclidean_motion(a: complex, phi: float):
    """Image (Re a, Im a; R_phi) in E(2), the rotation angle reduced mod 2 pi."""
    return np.array([a.real, a.imag]), float(np.mod(phi, 2 * np.pi))


def compose_euclidean(m1, m2):
    (t1, f1), (t2, f2) = m1, m2
    c, s = np.cos(f1), np.sin(f1)
    t = t1 + np.array([c * t2[0] - s * t2[1], s * t2[0] + c * t2[1]])
    return t, float(np.mod(f1 + f2, 2 * np.pi))


def helicity_operator(twice_s: int, direction) -> np.ndarray:
    """J . n-hat in the spin-s representation."""
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    return np.tensordot(n, spin_generators(twice_s), axes=1)


def su2_residual(W) -> float:
    W = np.asarray(W, dtype=complex)
    unit = np.max(np.abs(dagger(W) @ W - np.eye(2)))
    det = np.max(np.abs(np.linalg.det(W) - 1.0))
    return float(max(unit, det))

