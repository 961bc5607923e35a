"""Truncated Fock space over (m, s), mode-sum quantum fields and the spin-statistics test.

Statistics are encoded by ``sigma``: +1 for anticommutators (Fermi), -1 for
commutators (Bose).  The bracket of the field with its adjoint is

    [phi(x), phi^dag(y)]_sigma = (2 pi)^{-3} int dOmega_m D(p/m) [e^{-ip.xi} + sigma e^{ip.xi}],

xi = x - y, and it is local exactly when sigma = -(-1)^{2s}.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, schur

from .irreps import check_twice_s, gamma_matrices, spin_rep
from .minkowski import EPSILON, act, lower, minkowski_dot, to_hermitian
from .oracles import delta1_equal_time, extrapolate
from .orbits import CANONICAL, boost, direction_rotation
from .wigner_rep import MomentumGrid, WaveFunction, rep_apply

FERMI, BOSE = "fermi", "bose"
ANTICOMMUTATOR, COMMUTATOR = +1, -1
DEFAULT_EPS = (0.01, 0.005, 0.0025, 0.00125)  # in units of 1/m^2
ROUNDOFF_FACTOR = 64 * np.finfo(float).eps
DEFAULT_DIM_BOUND = 4096
LIGHT_CONE_FLOOR = 1e-6
RATIO_FLOOR = 1e-30
DAMPING_CUTOFF = 40.0


class LightConeWarning(UserWarning):
    pass


def local_sign(twice_s: int) -> int:
    """The bracket sign that makes the field local: commutator for integer s."""
    return ANTICOMMUTATOR if check_twice_s(twice_s) % 2 else COMMUTATOR


def sign_of(statistics: str) -> int:
    if statistics == FERMI:
        return ANTICOMMUTATOR
    if statistics == BOSE:
        return COMMUTATOR
    raise ValueError(f"statistics must be {FERMI!r} or {BOSE!r}")


# ---- Fock space --------------------------------------------------------------


@dataclass
class ModeSet:
    """Modes (node index, lambda index) on a grid; mode k is delta_{node} delta_lambda / sqrt(w)."""

    grid: MomentumGrid
    twice_s: int
    modes: list
    statistics: str = FERMI
    n_max: int = 3

    def __post_init__(self):
        check_twice_s(self.twice_s)
        sign_of(self.statistics)
        self.modes = [(int(i), int(l)) for i, l in self.modes]
        if len(set(self.modes)) != len(self.modes):
            raise ValueError("modes must be distinct")
        if self.n_max < 1:
            raise ValueError("boson cutoff must be >= 1")
        for i, l in self.modes:
            if not (0 <= i < len(self.grid) and 0 <= l <= self.twice_s):
                raise ValueError(f"mode {(i, l)} out of range")

    @classmethod
    def from_nodes(cls, grid, twice_s, nodes, statistics=FERMI, n_max=3):
        """All 2s+1 spin states at each listed node."""
        return cls(grid, twice_s, [(i, l) for i in nodes for l in range(twice_s + 1)], statistics, n_max)

    def __len__(self):
        return len(self.modes)

    def basis_function(self, k: int) -> WaveFunction:
        i, l = self.modes[k]
        amp = np.zeros((len(self.grid), self.twice_s + 1), dtype=complex)
        amp[i, l] = 1 / np.sqrt(self.grid.weights[i])
        return WaveFunction(self.grid, self.twice_s, amp)


@dataclass
class FockSpace:
    modes: ModeSet
    annihilators: list
    dim: int
    below_cutoff: np.ndarray = field(repr=False)  # diagonal mask of states with every occupation < n_max

    @property
    def sigma(self) -> int:
        return sign_of(self.modes.statistics)

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    def creators(self):
        return [a.conj().T for a in self.annihilators]


def _bracket(X, Y, sigma):
    return X @ Y + sigma * (Y @ X)


def fock_build(modes: ModeSet, dim_bound: int = DEFAULT_DIM_BOUND) -> FockSpace:
    """Explicit a_k matrices: Jordan-Wigner strings for fermions, truncated oscillators for bosons."""
    k = len(modes)
    if modes.statistics == FERMI:
        local = 2
        a1 = np.array([[0.0, 1.0], [0.0, 0.0]])
        string = np.diag([1.0, -1.0])
    else:
        local = modes.n_max + 1
        a1 = np.diag(np.sqrt(np.arange(1, local)), 1)
        string = np.eye(local)
    total = local**k
    if total > dim_bound:
        raise ValueError(f"Fock dimension {total} exceeds the bound {dim_bound}")
    ops = []
    for j in range(k):
        factors = [string] * j + [a1] + [np.eye(local)] * (k - j - 1)
        op = np.ones((1, 1))
        for f in factors:
            op = np.kron(op, f)
        ops.append(op.astype(complex))
    occ = np.array(np.unravel_index(np.arange(total), (local,) * k)).T if k else np.zeros((1, 0), int)
    below = np.all(occ < local - 1, axis=1) if modes.statistics == BOSE else np.ones(total, bool)
    return FockSpace(modes, ops, total, below)


def algebra_residuals(fock: FockSpace) -> dict:
    """Max deviations of the canonical (anti)commutation relations.

    For bosons the [a, a^dag] = delta check is restricted to states below the cutoff.
    """
    sigma = fock.sigma
    a = fock.annihilators
    ad = fock.creators()
    I = np.eye(fock.dim)
    mask = fock.below_cutoff
    mixed = same = 0.0
    for i in range(len(a)):
        for j in range(len(a)):
            c = _bracket(a[i], ad[j], sigma) - (I if i == j else 0.0)
            same = max(same, float(np.max(np.abs(c[np.ix_(mask, mask)]))))
            mixed = max(mixed, float(np.max(np.abs(_bracket(a[i], a[j], sigma)))))
    nil = max((float(np.max(np.abs(x @ x))) for x in a), default=0.0) if sigma > 0 else 0.0
    return {"a_adag": same, "a_a": mixed, "nilpotent": nil}


# ---- fields on Fock space ----------------------------------------------------


def mode_coefficients(modes: ModeSet, x, boost_choice: str = CANONICAL):
    """u[alpha, k], v[alpha, k] at spacetime point x.

    u = (2 pi)^{-3/2} sqrt(w) D(L(p))_{alpha lambda} e^{-ip.x}
    v = (2 pi)^{-3/2} sqrt(w) D(L(p) eps)_{alpha lambda} e^{+ip.x}
    """
    g = modes.grid
    idx = np.array([i for i, _ in modes.modes])
    lam = np.array([l for _, l in modes.modes])
    p = g.nodes[idx]
    L = boost(g.mass, p, boost_choice)
    DL = spin_rep(modes.twice_s, L)
    DLe = spin_rep(modes.twice_s, L @ EPSILON)
    c = np.sqrt(g.weights[idx]) / (2 * np.pi) ** 1.5
    ph = np.exp(-1j * minkowski_dot(p, np.asarray(x, dtype=float)))
    k = np.arange(len(idx))
    u = (DL[k, :, lam] * (c * ph)[:, None]).T
    v = (DLe[k, :, lam] * (c * np.conj(ph))[:, None]).T
    return u, v


def field_operator(fock: FockSpace, x, boost_choice: str = CANONICAL) -> np.ndarray:
    """phi_alpha(x) = sum_k [u_alpha^k(x) a_k + v_alpha^k(x) a_k^dag], shape (2s+1, dim, dim)."""
    u, v = mode_coefficients(fock.modes, x, boost_choice)
    a = np.array(fock.annihilators)
    ad = np.conj(np.swapaxes(a, 1, 2))
    return np.einsum("ak,kij->aij", u, a) + np.einsum("ak,kij->aij", v, ad)


def one_particle_matrix(modes: ModeSet, element, boost_choice: str = CANONICAL) -> np.ndarray:
    """Matrix of U_1(a, A) on the span of the modes; raises if the span is not invariant."""
    n = len(modes)
    u = np.zeros((n, n), dtype=complex)
    w = modes.grid.weights
    for k in range(n):
        img = rep_apply(element, modes.basis_function(k), boost_choice).amplitudes
        for kp, (j, l) in enumerate(modes.modes):
            u[kp, k] = np.sqrt(w[j]) * img[j, l]
    leak = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if leak > 1e-10:
        raise ValueError("element does not preserve the mode span (not grid-preserving for these modes)")
    return u


def second_quantize(fock: FockSpace, u) -> np.ndarray:
    """Gamma(u) = exp(i dGamma(h)), u = exp(i h); satisfies Gamma a^dag_l Gamma^{-1} = sum_k u_{kl} a^dag_k."""
    T, Z = schur(np.asarray(u, dtype=complex), output="complex")
    h = Z @ np.diag(np.angle(np.diag(T))) @ Z.conj().T
    a = fock.annihilators
    ad = fock.creators()
    dG = sum(h[k, l] * ad[k] @ a[l] for k in range(len(a)) for l in range(len(a)))
    return expm(1j * dG)


def covariance_check(fock: FockSpace, element, points, boost_choice: str = CANONICAL) -> float:
    """max over x of |U phi_alpha(x) U^{-1} - sum_beta D(A^{-1})_{alpha beta} phi_beta(Lambda_A x + a)|.

    Reported relative to the largest matrix entry of the transformed field.
    """
    a, A = element
    A = np.asarray(A, dtype=complex)
    u = one_particle_matrix(fock.modes, (np.asarray(a, dtype=float), A), boost_choice)
    G = second_quantize(fock, u)
    Ginv = G.conj().T
    DAinv = spin_rep(fock.modes.twice_s, np.linalg.inv(A))
    worst = 0.0
    for x in np.atleast_2d(points):
        lhs = np.einsum("ij,ajk,kl->ail", G, field_operator(fock, x, boost_choice), Ginv)
        rhs = np.einsum("ab,bij->aij", DAinv, field_operator(fock, act(A, x) + a, boost_choice))
        worst = max(worst, float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), 1e-300)))
    return worst


def discrete_kernel(modes: ModeSet, xi, sign: int, boost_choice: str = CANONICAL) -> np.ndarray:
    """sum_k [u^k(xi) u^k(0)^* + sign v^k(xi) v^k(0)^*]: the bracket predicted by the mode sum."""
    u, v = mode_coefficients(modes, xi, boost_choice)
    u0, v0 = mode_coefficients(modes, np.zeros(4), boost_choice)
    return u @ u0.conj().T + sign * (v @ v0.conj().T)


def smeared_bracket_check(fock: FockSpace, F, G, boost_choice: str = CANONICAL) -> dict:
    """[phi(F), phi(G)^dag]_sigma for point smearings F, G = [(x, coefficient vector), ...].

    With the statistics-matched sign this must be c * identity (below the boson cutoff)
    with c = sum F^dag-weighted discrete kernel values.
    """
    sigma = fock.sigma

    def smeared(S):
        return sum(np.einsum("a,aij->ij", coef, field_operator(fock, x, boost_choice)) for x, coef in S)

    PF, PG = smeared(F), smeared(G)
    B = _bracket(PF, PG.conj().T, sigma)
    c = 0j
    for x, f in F:
        for y, g in G:
            K = discrete_kernel(fock.modes, np.asarray(x, float) - np.asarray(y, float), sigma, boost_choice)
            c += f @ K @ np.conj(g)
    mask = fock.below_cutoff
    dev = B[np.ix_(mask, mask)] - c * np.eye(int(mask.sum()))
    return {"scalar": complex(c), "deviation": float(np.max(np.abs(dev)))}


# ---- damped three-dimensional kernel quadrature ------------------------------


@dataclass
class QuadratureConfig:
    """Node counts scale with the number of oscillations across the damped support."""

    oversample: float = 0.75
    radial_extra: int = 120
    angular_extra: int = 40
    chunk: int = 64


def _legendre(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _positive_cos_nodes(n_full: int):
    n_full += n_full % 2
    x, w = np.polynomial.legendre.leggauss(n_full)
    half = x > 0
    return x[half], w[half]


def _damped_pairs(m, t, r, eps, cfg: QuadratureConfig, n_phi: int):
    """Aligned-frame (xi along z) nodes and weights, yielded in chunks of p / -p pairs."""
    pmax = np.sqrt(DAMPING_CUTOFF / eps)
    n_r = int(np.ceil(cfg.oversample * pmax * (r + abs(t)) / 2)) + cfg.radial_extra
    n_c = int(np.ceil(cfg.oversample * pmax * r)) + cfg.angular_extra
    pr, wr = _legendre(n_r, 0.0, pmax)
    ct, wt = _positive_cos_nodes(n_c)
    st = np.sqrt(1 - ct**2)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    cphi, sphi = np.cos(phi), np.sin(phi)
    ang = np.stack(
        [np.outer(st, cphi).ravel(), np.outer(st, sphi).ravel(), np.repeat(ct, n_phi)], axis=-1
    )  # (n_c * n_phi, 3)
    wang = np.repeat(wt, n_phi) * (2 * np.pi / n_phi)
    for start in range(0, n_r, cfg.chunk):
        p = pr[start : start + cfg.chunk]
        p0 = np.sqrt(p * p + m * m)
        wrad = wr[start : start + cfg.chunk] * p * p / (2 * p0) * np.exp(-eps * p * p)
        p3 = p[:, None, None] * ang[None]
        w = wrad[:, None] * wang[None]
        yield p0, p3.reshape(-1, 3), np.repeat(p0, len(ang)), w.ravel()


def _aligned(xi):
    xi = np.asarray(xi, dtype=float)
    r = float(np.linalg.norm(xi[1:]))
    R = direction_rotation(xi[1:]) if r > 0 else np.eye(2, dtype=complex)
    return float(xi[0]), r, R


def _kernel_pair_sum(weight_fn, m, xi, eps, cfg, n_phi):
    """Sum over p / -p pairs of w * [M(p) e^{-ip.xi}, M(p) e^{+ip.xi}] in the frame with xi along z.

    ``weight_fn(p4)`` returns the matrix weights M at four-momenta p4.
    Returns the two sums (positive- and negative-frequency parts) for p and -p combined.
    """
    t, r, R = _aligned(xi)
    neg = pos = 0.0
    abs_total = 0.0
    for _, p3, p0, w in _damped_pairs(m, t, r, eps, cfg, n_phi):
        alpha = p0 * t
        beta = p3[:, 2] * r
        ca, sa, cb, sb = np.cos(alpha), np.sin(alpha), np.cos(beta), np.sin(beta)
        e_a = ca - 1j * sa  # e^{-i alpha}
        e_bp = cb + 1j * sb  # e^{+i beta}
        e_bm = cb - 1j * sb
        Mp = weight_fn(np.concatenate([p0[:, None], p3], axis=1))
        Mm = weight_fn(np.concatenate([p0[:, None], -p3], axis=1))
        # e^{-ip.xi} = e^{-i alpha} e^{+i beta}; at -p the beta phase flips
        neg = neg + np.einsum("n,n...->...", w * e_a * e_bp, Mp) + np.einsum("n,n...->...", w * e_a * e_bm, Mm)
        pos = pos + np.einsum("n,n...->...", w * np.conj(e_a) * e_bm, Mp) + np.einsum(
            "n,n...->...", w * np.conj(e_a) * e_bp, Mm
        )
        size = np.abs(Mp).reshape(len(w), -1).max(axis=1) + np.abs(Mm).reshape(len(w), -1).max(axis=1)
        abs_total += float(np.sum(w * size))
    return neg, pos, R, abs_total


def _n_phi(degree: int) -> int:
    n = max(2, degree + 1)
    return n + n % 2


@dataclass
class BracketKernel:
    twice_s: int
    mass: float
    xi: np.ndarray
    sign: int
    eps: tuple
    samples: np.ndarray  # (len(eps), d, d)
    value: np.ndarray  # extrapolated
    roundoff: np.ndarray  # per-sample floating-point floor, 64 u sum |terms|

    @property
    def magnitudes(self) -> np.ndarray:
        return np.max(np.abs(self.samples), axis=(1, 2))

    @property
    def magnitude(self) -> float:
        return float(np.max(np.abs(self.value)))

    def monotone(self) -> bool:
        """|K(eps)| non-increasing along the sequence, ignoring changes below the roundoff floor."""
        mags = self.magnitudes
        return bool(all(mags[k + 1] <= max(mags[k], self.roundoff[k + 1]) for k in range(len(mags) - 1)))


def _check_light_cone(xi, floor):
    xi = np.asarray(xi, dtype=float)
    if abs(minkowski_dot(xi, xi)) < floor:
        warnings.warn(f"separation {xi.tolist()} is within {floor} of the light cone", LightConeWarning, stacklevel=3)
        return True
    return False


def _eps_values(m, eps_seq):
    return tuple(float(e) / m**2 for e in (DEFAULT_EPS if eps_seq is None else eps_seq))


def bracket_kernels(twice_s, m, xi, eps_seq=None, cfg: QuadratureConfig | None = None):
    """Both sign choices at once: {sign: BracketKernel}."""
    n = check_twice_s(twice_s)
    cfg = cfg or QuadratureConfig()
    eps = _eps_values(m, eps_seq)

    def weight(p4):
        return spin_rep(n, to_hermitian(p4) / m)

    out = {ANTICOMMUTATOR: [], COMMUTATOR: []}
    floors = []
    for e in eps:
        neg, pos, R, total = _kernel_pair_sum(weight, m, xi, e, cfg, _n_phi(n))
        floors.append(ROUNDOFF_FACTOR * total / (2 * np.pi) ** 3)
        DR = spin_rep(n, R)
        for sgn in out:
            K = (neg + sgn * pos) / (2 * np.pi) ** 3
            out[sgn].append(DR @ K @ DR.conj().T)
    res = {}
    for sgn, samples in out.items():
        samples = np.array(samples)
        res[sgn] = BracketKernel(
            n, m, np.asarray(xi, float), sgn, eps, samples, extrapolate(eps, samples), np.array(floors)
        )
    return res


def bracket_kernel(twice_s, m, xi, sign, eps_seq=None, cfg=None, light_cone_floor=LIGHT_CONE_FLOOR) -> BracketKernel:
    """(2 pi)^{-3} int dOmega_m D(p/m) [e^{-ip.xi} + sign e^{ip.xi}], damped and extrapolated in eps."""
    _check_light_cone(xi, light_cone_floor)
    return bracket_kernels(twice_s, m, xi, eps_seq, cfg)[sign]


def jordan_pauli_delta(m, xi, eps_seq=None, cfg=None, light_cone_floor=LIGHT_CONE_FLOOR) -> float:
    """Delta(xi) defined by i Delta = the s = 0 commutator kernel."""
    _check_light_cone(xi, light_cone_floor)
    K = bracket_kernels(0, m, xi, eps_seq, cfg)[COMMUTATOR].value[0, 0]
    return float((K / 1j).real)


def delta1(m, xi, eps_seq=None, cfg=None, light_cone_floor=LIGHT_CONE_FLOOR) -> float:
    """The s = 0 anticommutator kernel (the symmetric, non-causal function)."""
    _check_light_cone(xi, light_cone_floor)
    return float(bracket_kernels(0, m, xi, eps_seq, cfg)[ANTICOMMUTATOR].value[0, 0].real)


def bw_bracket(twice_s, m, xi, sign, eps_seq=None, cfg=None) -> BracketKernel:
    """(2pi)^{-3} int dOmega [(x)_j (gamma.p + m) e^{-ip.xi} + sign (x)_j (gamma.p - m) e^{ip.xi}] / m^{2s}."""
    n = check_twice_s(twice_s)
    if n not in (1, 2):
        raise ValueError("bw_bracket is implemented for s = 1/2 and s = 1")
    cfg = cfg or QuadratureConfig()
    eps = _eps_values(m, eps_seq)
    g = gamma_matrices(1)
    I4 = np.eye(4)

    def tensor(p4, mass_sign):
        gp = g.contract_batch(lower(p4)) + mass_sign * m * I4
        out = gp
        for _ in range(n - 1):
            out = np.einsum("nij,nkl->nikjl", out, gp).reshape(len(p4), out.shape[1] * 4, -1)
        return out / m**n

    samples, floors = [], []
    for e in eps:
        neg, _, R, t1 = _kernel_pair_sum(lambda p4: tensor(p4, +1), m, xi, e, cfg, _n_phi(n))
        _, pos, _, t2 = _kernel_pair_sum(lambda p4: tensor(p4, -1), m, xi, e, cfg, _n_phi(n))
        floors.append(ROUNDOFF_FACTOR * (t1 + t2) / (2 * np.pi) ** 3)
        K = (neg + sign * pos) / (2 * np.pi) ** 3
        SR = np.zeros((4, 4), dtype=complex)
        SR[:2, :2] = R
        SR[2:, 2:] = np.conj(np.linalg.inv(R).T)
        Sn = SR
        for _ in range(n - 1):
            Sn = np.kron(Sn, SR)
        samples.append(Sn @ K @ np.linalg.inv(Sn))
    samples = np.array(samples)
    return BracketKernel(n, m, np.asarray(xi, float), sign, eps, samples, extrapolate(eps, samples), np.array(floors))


# ---- the verdict -------------------------------------------------------------


def default_test_points(m: float = 1.0, distances=(1.0, 2.0, 4.0), direction=(1.0, 0.0, 0.0)):
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return [np.concatenate([[0.0], (k / m) * d]) for k in distances]


def spin_statistics_verdict(
    twice_spins=(0, 1, 2),
    m: float = 1.0,
    points=None,
    eps_seq=None,
    ratio_required: float = 1e3,
    threshold_rel: float = 1e-3,
    cfg: QuadratureConfig | None = None,
    light_cone_floor: float = LIGHT_CONE_FLOOR,
) -> dict:
    """Compare both bracket signs at spacelike points for each spin.

    PASS needs, at every point: |right| < threshold < |wrong| and |wrong|/|right| > ratio_required,
    with threshold = threshold_rel * |Delta_1| from the 1-D radial oracle at the same proper distance.
    """
    points = default_test_points(m) if points is None else [np.asarray(p, float) for p in points]
    eps = _eps_values(m, eps_seq)
    rows, ok, conclusive = [], True, True
    for pt in points:
        ss = minkowski_dot(pt, pt)
        if abs(ss) < light_cone_floor or ss >= 0:
            warnings.warn(f"test point {pt.tolist()} is not safely spacelike; skipped", LightConeWarning, stacklevel=2)
            conclusive = False
            rows.append({"xi": pt.tolist(), "skipped": "not spacelike or too close to the light cone"})
            continue
        d = float(np.sqrt(-ss))
        scale = abs(delta1_equal_time(m, d, eps))
        threshold = threshold_rel * scale
        for n in twice_spins:
            ks = bracket_kernels(n, m, pt, eps_seq, cfg)
            right, wrong = ks[local_sign(n)], ks[-local_sign(n)]
            mags = right.magnitudes
            ratio = wrong.magnitude / max(right.magnitude, RATIO_FLOOR)
            row = {
                "twice_spin": int(n),
                "xi": pt.tolist(),
                "proper_distance": d,
                "local_sign": "commutator" if local_sign(n) == COMMUTATOR else "anticommutator",
                "right_magnitude": right.magnitude,
                "wrong_magnitude": wrong.magnitude,
                "ratio": float(ratio),
                "threshold": threshold,
                "right_by_eps": [float(x) for x in mags],
                "right_roundoff_floor": [float(x) for x in right.roundoff],
                "right_monotone": right.monotone(),
            }
            row["passed"] = bool(
                right.magnitude < threshold and wrong.magnitude > threshold and ratio > ratio_required
            )
            ok &= row["passed"]
            rows.append(row)
    verdict = "PASS" if ok and conclusive else ("INCONCLUSIVE" if ok else "FAIL")
    return {"schema": 1, "mass": m, "eps": list(eps), "ratio_required": ratio_required, "rows": rows, "verdict": verdict}
