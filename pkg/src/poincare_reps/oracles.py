"""One-dimensional radial reference values for the scalar two-point kernels.

For xi = (t, r e_z) the angular integral of exp(i p.xi) is done analytically,
leaving single integrals in |p| (or p0).  They are evaluated with QUADPACK's
oscillatory rules on Gaussian-damped integrands and extrapolated in the
damping strength, independently of the 3-D pipeline in :mod:`spinstat`.
"""
from __future__ import annotations

import numpy as np
from scipy import integrate, special

DAMPING_CUTOFF = 40.0  # exp(-40) ~ 4e-18


def richardson_weights(eps) -> np.ndarray:
    """Lagrange weights extrapolating samples at ``eps`` to eps = 0."""
    eps = np.asarray(eps, dtype=float)
    w = np.ones(len(eps))
    for j in range(len(eps)):
        for k in range(len(eps)):
            if k != j:
                w[j] *= eps[k] / (eps[k] - eps[j])
    return w


def extrapolate(eps, values):
    values = np.asarray(values)
    return np.tensordot(richardson_weights(eps), values, axes=1)


def _quad_sin(fn, omega, a, b):
    val, err = integrate.quad(fn, a, b, weight="sin", wvar=omega, limit=2000)
    return val


def _quad_cos(fn, omega, a, b):
    val, err = integrate.quad(fn, a, b, weight="cos", wvar=omega, limit=2000)
    return val


def delta1_equal_time_damped(m: float, r: float, eps: float) -> float:
    """(2 pi)^{-3} (4 pi / r) int_0^inf p sin(p r) e^{-eps p^2} / p0 dp."""
    pmax = np.sqrt(DAMPING_CUTOFF / eps)
    val = _quad_sin(lambda p: p * np.exp(-eps * p * p) / np.sqrt(p * p + m * m), r, 0.0, pmax)
    return 4 * np.pi * val / (r * (2 * np.pi) ** 3)


def delta1_equal_time(m: float, r: float, eps_seq) -> float:
    """Damped-extrapolated equal-time s = 0 anticommutator kernel; equals m K_1(m r) / (2 pi^2 r)."""
    return float(extrapolate(eps_seq, [delta1_equal_time_damped(m, r, e) for e in eps_seq]))


def delta1_equal_time_closed(m: float, r: float) -> float:
    """m K_1(m r) / (2 pi^2 r)."""
    return float(m * special.k1(m * r) / (2 * np.pi**2 * r))


def jordan_pauli_rest_damped(m: float, t: float, eps: float) -> float:
    """Delta(t, 0) = -(2 pi)^{-3} 4 pi int p^2 sin(p0 t)/p0 e^{-eps p^2} dp, in the energy variable."""
    pmax = np.sqrt(DAMPING_CUTOFF / eps)
    emax = np.sqrt(pmax**2 + m * m)
    val = _quad_sin(lambda e: np.sqrt(max(e * e - m * m, 0.0)) * np.exp(-eps * (e * e - m * m)), t, m, emax)
    return -4 * np.pi * val / (2 * np.pi) ** 3


def jordan_pauli_rest(m: float, t: float, eps_seq) -> float:
    return float(extrapolate(eps_seq, [jordan_pauli_rest_damped(m, t, e) for e in eps_seq]))


def jordan_pauli_rest_closed(m: float, t: float) -> float:
    """m J_1(m t) / (4 pi t) for t > 0."""
    return float(m * special.j1(m * t) / (4 * np.pi * t))


def scalar_kernel_damped(m: float, t: float, r: float, eps: float, sign: int) -> complex:
    """(2 pi)^{-3} int d^3p/(2p0) e^{-eps p^2} [e^{-ip.xi} + sign e^{ip.xi}] for xi = (t, r e_z), r > 0.

    After the angular integral: (2 pi)^{-3} (2 pi / r) int p sin(p r)/p0 e^{-eps p^2} g(p0 t) dp,
    g = 2 cos for sign = +1 and -2i sin for sign = -1.
    """
    pmax = np.sqrt(DAMPING_CUTOFF / eps)
    pref = 2 * np.pi / (r * (2 * np.pi) ** 3)

    def amp(p, trig):
        p0 = np.sqrt(p * p + m * m)
        return p * np.exp(-eps * p * p) / p0 * trig(p0 * t)

    if sign > 0:
        val = 2 * _quad_sin(lambda p: amp(p, np.cos), r, 0.0, pmax)
        return complex(pref * val)
    val = -2 * _quad_sin(lambda p: amp(p, np.sin), r, 0.0, pmax)
    return complex(0.0, pref * val)


def scalar_kernel(m: float, t: float, r: float, sign: int, eps_seq) -> complex:
    return complex(extrapolate(eps_seq, [scalar_kernel_damped(m, t, r, e, sign) for e in eps_seq]))
