"""Free classical fields of mass m > 0 and spin s built from Wigner amplitudes f.

Layouts (per momentum node):

``phi``      2s+1 undotted components, phi = D(L) f
``chi``      2s+1 dotted components,   chi = D(hat L) f
``bispinor`` (phi, chi) stacked
``bw``       2s Dirac indices, shape (4,)*2s, psi = B^{(x)2s} f with B = (L; hat L)
``pf``       n undotted then k dotted two-valued indices, shape (2,)*(n+k)
``rs``       s = 3/2 vector-spinor, shape (4 Dirac, 4 vector) with a lower vector index

Tensor amplitudes f live on the (2s+1)-dimensional symmetric subspace; they are
unfolded into (C^2)^{(x)2s} with :func:`~poincare_reps.irreps.symmetric_isometry`.
"""
from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .irreps import gamma_matrices, spin_rep, symmetric_isometry
from .minkowski import EPSILON, from_hermitian_complex, hat, lower, to_hermitian
from .orbits import CANONICAL, boost
from .wigner_rep import SCHEMA_VERSION, MomentumGrid, WaveFunction

LAYOUTS = ("phi", "chi", "bispinor", "bw", "pf", "rs")


@dataclass
class Field:
    grid: MomentumGrid
    twice_s: int
    layout: str
    values: np.ndarray  # (len(grid),) + component shape
    n_undotted: int = 0
    n_dotted: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.layout not in LAYOUTS:
            raise ValueError(f"unknown field layout {self.layout!r}")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape[0] != len(self.grid):
            raise ValueError("field values must have one entry per grid node")

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(len(self.grid), -1)

    def to_json(self) -> str:
        amps = np.stack([self.flat.real, self.flat.imag], axis=-1)
        return json.dumps(
            {
                "schema": SCHEMA_VERSION,
                "mass": self.grid.mass,
                "twice_spin": self.twice_s,
                "layout": self.layout,
                "component_shape": list(self.values.shape[1:]),
                "n_undotted": self.n_undotted,
                "n_dotted": self.n_dotted,
                "grid": self.grid.spec,
                "amplitudes": amps.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Field":
        obj = json.loads(text)
        if obj.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema {obj.get('schema')!r}")
        grid = MomentumGrid.from_spec(obj["grid"])
        amps = np.asarray(obj["amplitudes"], dtype=float)
        vals = (amps[..., 0] + 1j * amps[..., 1]).reshape((len(grid),) + tuple(obj["component_shape"]))
        return cls(grid, int(obj["twice_spin"]), obj["layout"], vals, int(obj["n_undotted"]), int(obj["n_dotted"]))


def _require_massive(f: WaveFunction):
    if f.grid.mass <= 0:
        raise ValueError("field constructions need m > 0")


def _boosts(grid: MomentumGrid, choice: str):
    L = boost(grid.mass, grid.nodes, choice)
    return L, hat(L)


def _apply(M, v):
    return np.einsum("nij,nj->ni", M, v)


def _momentum(grid: MomentumGrid):
    pl = to_hermitian(grid.nodes)
    return pl, hat(pl)


# ---- 2s+1 and 2(2s+1) component fields ---------------------------------------


def phi_from_f(f: WaveFunction, boost_choice: str = CANONICAL) -> Field:
    _require_massive(f)
    L, _ = _boosts(f.grid, boost_choice)
    return Field(f.grid, f.twice_s, "phi", _apply(spin_rep(f.twice_s, L), f.amplitudes))


def chi_from_f(f: WaveFunction, boost_choice: str = CANONICAL) -> Field:
    _require_massive(f)
    _, Lh = _boosts(f.grid, boost_choice)
    return Field(f.grid, f.twice_s, "chi", _apply(spin_rep(f.twice_s, Lh), f.amplitudes))


def bispinor_from_f(f: WaveFunction, boost_choice: str = CANONICAL) -> Field:
    phi, chi = phi_from_f(f, boost_choice), chi_from_f(f, boost_choice)
    return Field(f.grid, f.twice_s, "bispinor", np.concatenate([phi.values, chi.values], axis=1))


def field_norm(fld: Field) -> float:
    """||phi||^2 = int phi^dag D(hat p/m) phi, ||chi||^2 = int chi^dag D(p/m) chi."""
    m = fld.grid.mass
    pl, ph = _momentum(fld.grid)
    if fld.layout == "phi":
        metric = spin_rep(fld.twice_s, ph / m)
    elif fld.layout == "chi":
        metric = spin_rep(fld.twice_s, pl / m)
    else:
        raise ValueError("field_norm handles the phi and chi layouts; use bw_norm for multispinors")
    dens = np.einsum("ni,nij,nj->n", np.conj(fld.values), metric, fld.values).real
    return float(np.sum(fld.grid.weights * dens))


def duality_check(phi: Field, chi: Field) -> dict:
    """Max residuals of chi = D(hat p/m) phi and phi = D(p/m) chi."""
    m = phi.grid.mass
    pl, ph = _momentum(phi.grid)
    n = phi.twice_s
    r1 = _apply(spin_rep(n, ph / m), phi.values) - chi.values
    r2 = _apply(spin_rep(n, pl / m), chi.values) - phi.values
    scale = max(1.0, np.max(np.abs(phi.values)), np.max(np.abs(chi.values)))
    return {"chi_from_phi": float(np.max(np.abs(r1)) / scale), "phi_from_chi": float(np.max(np.abs(r2)) / scale)}


def generalized_dirac_residual(psi: Field) -> float:
    """max_p |[gamma^{mu..} p_mu.. - m^{2s}] psi(p)| relative to |psi|.

    The contraction of the generalized gamma matrices with covariant p gives
    [[0, D(p)], [D(hat p), 0]], so the overall phase is fixed by the s = 1/2
    Dirac equation (gamma.p - m) psi = 0.
    """
    if psi.layout != "bispinor":
        raise ValueError("generalized_dirac_residual expects a bispinor field")
    n, m = psi.twice_s, psi.grid.mass
    gp = gamma_matrices(n).contract_batch(lower(psi.grid.nodes))
    res = _apply(gp, psi.values) - m**n * psi.values
    return float(np.max(np.abs(res)) / (m**n * max(1.0, np.max(np.abs(psi.values)))))


def f_from_phi(phi: Field, boost_choice: str = CANONICAL) -> WaveFunction:
    L, _ = _boosts(phi.grid, boost_choice)
    return WaveFunction(phi.grid, phi.twice_s, _apply(spin_rep(phi.twice_s, np.linalg.inv(L)), phi.values))


def f_from_chi(chi: Field, boost_choice: str = CANONICAL) -> WaveFunction:
    _, Lh = _boosts(chi.grid, boost_choice)
    return WaveFunction(chi.grid, chi.twice_s, _apply(spin_rep(chi.twice_s, np.linalg.inv(Lh)), chi.values))


# ---- tensor helpers ---------------------------------------------------------


def _unfold(f: WaveFunction) -> np.ndarray:
    """Wigner amplitudes as symmetric tensors, shape (N,) + (2,)*2s."""
    n = f.twice_s
    return (f.amplitudes @ symmetric_isometry(n).T).reshape((len(f.grid),) + (2,) * n)


def _fold(tensor, twice_s: int) -> np.ndarray:
    N = tensor.shape[0]
    return tensor.reshape(N, -1) @ symmetric_isometry(twice_s)


def _apply_axis(M, T, axis: int):
    """Apply per-node matrices M (N, a, b) to tensor axis ``axis`` (0-based, after the node axis)."""
    T = np.moveaxis(T, axis + 1, -1)
    T = np.einsum("n...j,nij->n...i", T, M)
    return np.moveaxis(T, -1, axis + 1)


def _apply_axes(mats, T):
    for k, M in enumerate(mats):
        T = _apply_axis(M, T, k)
    return T


# ---- Bargmann-Wigner ---------------------------------------------------------


def _bw_b(grid, choice):
    L, Lh = _boosts(grid, choice)
    return np.concatenate([L, Lh], axis=1)  # (N, 4, 2)


def _symmetrize_exact(T):
    """Copy each entry from its sorted index so permutation symmetry holds bit-for-bit."""
    n = T.ndim - 1
    out = T.copy()
    for idx in itertools.product(range(T.shape[1]), repeat=n):
        out[(slice(None),) + idx] = T[(slice(None),) + tuple(sorted(idx))]
    return out


def bw_construct(f: WaveFunction, boost_choice: str = CANONICAL) -> Field:
    _require_massive(f)
    B = _bw_b(f.grid, boost_choice)
    T = _apply_axes([B] * f.twice_s, _unfold(f))
    return Field(f.grid, f.twice_s, "bw", _symmetrize_exact(T), meta={"boost": boost_choice})


def bw_symmetry_defect(psi: Field) -> float:
    n = psi.twice_s
    worst = 0.0
    for i, j in itertools.combinations(range(n), 2):
        perm = list(range(n + 1))
        perm[i + 1], perm[j + 1] = perm[j + 1], perm[i + 1]
        worst = max(worst, float(np.max(np.abs(psi.values - np.transpose(psi.values, perm)))))
    return worst


def bw_residual(psi: Field) -> list[float]:
    """Relative residual of (gamma^mu_(j) p_mu - m) psi = 0 for each index j."""
    m = psi.grid.mass
    gp = gamma_matrices(1).contract_batch(lower(psi.grid.nodes))
    scale = m * max(1.0, np.max(np.abs(psi.values)))
    return [
        float(np.max(np.abs(_apply_axis(gp, psi.values, j) - m * psi.values)) / scale) for j in range(psi.twice_s)
    ]


def bw_pointwise_inner(psi1: Field, psi2: Field) -> np.ndarray:
    """2^{-2s} psi1^dag (gamma^0 (x) ... (x) gamma^0) psi2 at each node."""
    g0 = gamma_matrices(1).gamma[0]
    n = psi1.twice_s
    G = np.broadcast_to(g0, (len(psi1.grid), 4, 4))
    t = _apply_axes([G] * n, psi2.values)
    return np.sum(np.conj(psi1.values) * t, axis=tuple(range(1, n + 1))) / 2**n


def bw_norm(psi: Field) -> float:
    return float(np.sum(psi.grid.weights * bw_pointwise_inner(psi, psi).real))


def f_from_bw(psi: Field) -> WaveFunction:
    """Left inverse: (1/2) B^dag gamma^0 on each index, then project to the symmetric subspace."""
    g0 = gamma_matrices(1).gamma[0]
    L = boost(psi.grid.mass, psi.grid.nodes, psi.meta.get("boost", CANONICAL))
    B = np.concatenate([L, hat(L)], axis=1)
    Binv = 0.5 * np.conj(np.swapaxes(B, 1, 2)) @ g0
    T = _apply_axes([Binv] * psi.twice_s, psi.values)
    return WaveFunction(psi.grid, psi.twice_s, _fold(T, psi.twice_s))


# ---- Pauli-Fierz -------------------------------------------------------------


def _check_split(twice_s: int, n_undotted: int, n_dotted: int):
    if n_undotted < 0 or n_dotted < 0 or n_undotted + n_dotted != twice_s:
        raise ValueError(f"need n_undotted + n_dotted = 2s = {twice_s}, got ({n_undotted}, {n_dotted})")


def pf_construct(f: WaveFunction, n_undotted: int, n_dotted: int, boost_choice: str = CANONICAL) -> Field:
    """prod L on the first n_undotted indices, prod hat L on the remaining n_dotted."""
    _require_massive(f)
    _check_split(f.twice_s, n_undotted, n_dotted)
    L, Lh = _boosts(f.grid, boost_choice)
    T = _apply_axes([L] * n_undotted + [Lh] * n_dotted, _unfold(f))
    return Field(f.grid, f.twice_s, "pf", T, n_undotted, n_dotted, {"boost": boost_choice})


def pf_residual(phi: Field) -> dict:
    """Residuals of the two first-order equations linking dotted and undotted indices.

    hat(p) on an undotted index must give m times the field with that index
    dotted; p on a dotted index must give m times the field with it undotted.
    Each comparison field is rebuilt from f with the corresponding boost swap.
    """
    grid, m = phi.grid, phi.grid.mass
    pl, ph = _momentum(grid)
    L, Lh = _boosts(grid, phi.meta.get("boost", CANONICAL))
    f = f_from_pf(phi)
    base = [L] * phi.n_undotted + [Lh] * phi.n_dotted
    T0 = _unfold(f)
    scale = m * max(1.0, np.max(np.abs(phi.values)))
    out = {"undotted": [], "dotted": []}
    for j in range(phi.twice_s):
        mats = list(base)
        if j < phi.n_undotted:
            mats[j] = Lh
            lhs = _apply_axis(ph, phi.values, j)
            key = "undotted"
        else:
            mats[j] = L
            lhs = _apply_axis(pl, phi.values, j)
            key = "dotted"
        out[key].append(float(np.max(np.abs(lhs - m * _apply_axes(mats, T0))) / scale))
    return out


def f_from_pf(phi: Field) -> WaveFunction:
    L, Lh = _boosts(phi.grid, phi.meta.get("boost", CANONICAL))
    Li, Lhi = np.linalg.inv(L), np.linalg.inv(Lh)
    T = _apply_axes([Li] * phi.n_undotted + [Lhi] * phi.n_dotted, phi.values)
    return WaveFunction(phi.grid, phi.twice_s, _fold(T, phi.twice_s))


def pf_identity_residual(m: float, p, boost_choice: str = CANONICAL) -> float:
    """max of |p hat L - m L| and |hat p L - m hat L|."""
    L = boost(m, p, boost_choice)
    Lh = hat(L)
    pl = to_hermitian(np.asarray(p, dtype=float))
    return float(max(np.max(np.abs(pl @ Lh - m * L)), np.max(np.abs(hat(pl) @ L - m * Lh))))


# ---- Rarita-Schwinger --------------------------------------------------------


def _pair_to_vector(Y):
    """(..., 2 undotted, 2 dotted) -> contravariant vector (..., 4) via Y eps."""
    return from_hermitian_complex(Y @ EPSILON)


def _rs_raw(L, Lh):
    """Per-node linear map f (4 symmetric amplitudes) -> psi_mu, shape (N, 4, 4, 4)."""
    P = symmetric_isometry(3).reshape(2, 2, 2, 4)
    upper = np.einsum("nai,nbj,nck,ijkl->nabcl", L, L, Lh, P)
    lower_half = np.einsum("nai,nbj,nck,ijkl->nabcl", Lh, L, Lh, P)
    dirac = np.concatenate([upper, lower_half], axis=1)  # (N, 4, 2, 2, 4)
    vec = lower(_pair_to_vector(np.moveaxis(dirac, -1, 2)))  # (N, 4 dirac, 4 amp, 4 mu)
    return vec.swapaxes(-1, -2)


@functools.lru_cache(maxsize=None)
def _rs_normalization() -> float:
    I = np.eye(2, dtype=complex)[None]
    M = _rs_raw(I, I)[0].reshape(16, 4)
    G = np.conj(M.T) @ M
    c = G[0, 0].real
    if np.max(np.abs(G - c * np.eye(4))) > 1e-12:
        raise RuntimeError("vector-spinor map at rest is not a multiple of an isometry")
    return 1.0 / np.sqrt(c)


def _rs_map(grid, choice):
    L, Lh = _boosts(grid, choice)
    return _rs_normalization() * _rs_raw(L, Lh)


def rarita_schwinger(f: WaveFunction, boost_choice: str = CANONICAL) -> Field:
    """Vector-spinor psi_mu (lower vector index) for s = 3/2.

    The upper Dirac half pairs the second undotted and the dotted index of the
    (2 undotted, 1 dotted) Pauli-Fierz tensor into a vector; the lower half does
    the same for the (1 undotted, 2 dotted) tensor.
    """
    if f.twice_s != 3:
        raise ValueError("the Rarita-Schwinger construction is defined for s = 3/2 only")
    _require_massive(f)
    M = _rs_map(f.grid, boost_choice)
    return Field(f.grid, 3, "rs", np.einsum("namk,nk->nam", M, f.amplitudes), meta={"boost": boost_choice})


def rs_residual(psi: Field) -> dict:
    m = psi.grid.mass
    g = gamma_matrices(1)
    gp = g.contract_batch(lower(psi.grid.nodes))
    scale = max(1.0, np.max(np.abs(psi.values)))
    dirac = np.einsum("nab,nbm->nam", gp, psi.values) - m * psi.values
    trace = np.einsum("mab,nbm->na", g.gamma, psi.values)
    return {"dirac": float(np.max(np.abs(dirac)) / (m * scale)), "gamma_trace": float(np.max(np.abs(trace)) / scale)}


def rs_rest_rank() -> int:
    I = np.eye(2, dtype=complex)[None]
    return int(np.linalg.matrix_rank(_rs_raw(I, I)[0].reshape(16, 4), tol=1e-10))


def f_from_rs(psi: Field) -> WaveFunction:
    M = _rs_map(psi.grid, psi.meta.get("boost", CANONICAL)).reshape(len(psi.grid), 16, 4)
    f = np.einsum("nki,ni->nk", np.linalg.pinv(M), psi.values.reshape(len(psi.grid), 16))
    return WaveFunction(psi.grid, 3, f)


# ---- position space ----------------------------------------------------------


def x_space_transform(fld: Field, x) -> np.ndarray:
    """phi(x) = (2 pi)^{-3/2} sum_i w_i phi(p_i) e^{-i p_i.x}; x has shape (..., 4)."""
    x = np.asarray(x, dtype=float)
    nodes = fld.grid.nodes
    phase = np.exp(-1j * (x[..., None, :1] * nodes[:, :1].T - x[..., None, 1:] @ nodes[:, 1:].T)[..., 0, :])
    kernel = phase * fld.grid.weights
    return np.tensordot(kernel, fld.flat, axes=([-1], [0])) / (2 * np.pi) ** 1.5


def klein_gordon_residual(fld: Field, x, h: float = 1e-2) -> float:
    """|(box + m^2) phi(x)| / (m^2 |phi(x)|) with fourth-order central differences."""
    x = np.asarray(x, dtype=float)
    m = fld.grid.mass
    stencil = ((-2, -1 / 12), (-1, 4 / 3), (0, -5 / 2), (1, 4 / 3), (2, -1 / 12))
    pts, coefs = [], []
    for mu in range(4):
        sign = 1.0 if mu == 0 else -1.0
        for k, c in stencil:
            y = x.copy()
            y[mu] += k * h
            pts.append(y)
            coefs.append(sign * c / h**2)
    vals = x_space_transform(fld, np.array(pts))
    box = np.tensordot(np.array(coefs), vals, axes=1)
    phi0 = x_space_transform(fld, x)
    return float(np.max(np.abs(box + m**2 * phi0)) / (m**2 * max(np.max(np.abs(phi0)), 1e-300)))
