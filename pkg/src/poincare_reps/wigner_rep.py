"""The representations (m, s) and (0, helicity) acting on sampled wavefunctions.

A :class:`MomentumGrid` is a product of a radial Gauss-Legendre rule on
[0, p_max] with an angular design.  Two designs are available:

``"octahedral"``
    the 26-point degree-7 rule (face centres, edge midpoints, vertices of the
    cube).  It is mapped onto itself by the 48-element binary octahedral group,
    so those rotations act by node permutation without interpolation.
``"product"``
    Gauss-Legendre in cos(theta) times a uniform azimuthal rule.  Values off the
    grid are obtained by trilinear interpolation in (|p|, theta, phi); this is
    what boosts use.

Weights approximate the invariant measure d^3p / (2 p0).
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .irreps import check_twice_s, spin_rep
from .minkowski import act, hat, minkowski_dot, rotation, to_hermitian
from .orbits import CANONICAL, boost, pullback_wigner, stabilizes_massless

SCHEMA_VERSION = 1
NODE_MATCH_TOL = 1e-9


def _octahedral_design():
    pts, wts = [], []
    for axis in range(3):
        for sgn in (1.0, -1.0):
            v = np.zeros(3)
            v[axis] = sgn
            pts.append(v)
            wts.append(1 / 21)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        for si in (1.0, -1.0):
            for sj in (1.0, -1.0):
                v = np.zeros(3)
                v[i], v[j] = si / np.sqrt(2), sj / np.sqrt(2)
                pts.append(v)
                wts.append(4 / 105)
    for sx in (1.0, -1.0):
        for sy in (1.0, -1.0):
            for sz in (1.0, -1.0):
                pts.append(np.array([sx, sy, sz]) / np.sqrt(3))
                wts.append(9 / 280)
    return np.array(pts), 4 * np.pi * np.array(wts)


def _mirrored_legendre(n: int):
    """Gauss-Legendre on [-1, 1] with nodes symmetric bit-for-bit."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = n // 2
    xs = np.empty(n)
    ws = np.empty(n)
    xs[:half] = -x[::-1][:half]
    xs[n - half :] = x[::-1][:half][::-1]
    ws[:half] = w[::-1][:half]
    ws[n - half :] = w[::-1][:half][::-1]
    if n % 2:
        xs[half] = 0.0
        ws[half] = w[half]
    return xs, ws


def _azimuths(n: int):
    """Uniform azimuths with phi + pi landing exactly on a node when n is even."""
    phi = 2 * np.pi * np.arange(n) / n
    c, s = np.cos(phi), np.sin(phi)
    if n % 2 == 0:
        h = n // 2
        c[h:], s[h:] = -c[:h], -s[:h]
    return phi, c, s


@dataclass
class MomentumGrid:
    mass: float
    p_max: float
    radial: int
    angular: str = "octahedral"
    n_theta: int = 0
    n_phi: int = 0
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.mass < 0 or self.p_max <= 0 or self.radial < 1:
            raise ValueError("grid needs mass >= 0, p_max > 0, radial >= 1")
        x, w = np.polynomial.legendre.leggauss(self.radial)
        self.r_nodes = 0.5 * self.p_max * (x + 1)
        r_w = 0.5 * self.p_max * w
        if self.angular == "octahedral":
            dirs, a_w = _octahedral_design()
        elif self.angular == "product":
            if self.n_theta < 2 or self.n_phi < 2:
                raise ValueError("product design needs n_theta >= 2 and n_phi >= 2")
            ct, wt = _mirrored_legendre(self.n_theta)
            self.phi_nodes, cphi, sphi = _azimuths(self.n_phi)
            self.theta_nodes = np.arccos(ct)[::-1]
            ct, wt = ct[::-1], wt[::-1]
            st = np.sqrt(1 - ct**2)
            dirs = np.stack(
                [np.outer(st, cphi).ravel(), np.outer(st, sphi).ravel(), np.repeat(ct, self.n_phi)], axis=-1
            )
            a_w = np.repeat(wt, self.n_phi) * (2 * np.pi / self.n_phi)
        else:
            raise ValueError(f"unknown angular design {self.angular!r}")
        self.directions = dirs
        p3 = self.r_nodes[:, None, None] * dirs[None, :, :]
        p3 = p3.reshape(-1, 3)
        p0 = np.sqrt(np.sum(p3**2, axis=-1) + self.mass**2)
        self.nodes = np.concatenate([p0[:, None], p3], axis=-1)
        r2 = np.repeat(self.r_nodes**2 * r_w, len(a_w)) * np.tile(a_w, self.radial)
        self.weights = r2 / (2 * p0)
        self._tree = cKDTree(p3)

    @classmethod
    def from_spec(cls, spec: dict) -> "MomentumGrid":
        return cls(
            mass=float(spec["mass"]),
            p_max=float(spec["p_max"]),
            radial=int(spec["radial"]),
            angular=spec.get("angular", "octahedral"),
            n_theta=int(spec.get("n_theta", 0)),
            n_phi=int(spec.get("n_phi", 0)),
        )

    @property
    def spec(self) -> dict:
        out = {"mass": self.mass, "p_max": self.p_max, "radial": self.radial, "angular": self.angular}
        if self.angular == "product":
            out.update(n_theta=self.n_theta, n_phi=self.n_phi)
        return out

    def __len__(self) -> int:
        return len(self.nodes)

    def same_as(self, other: "MomentumGrid") -> bool:
        return self is other or self.spec == other.spec

    def lookup(self, p3, tol: float = NODE_MATCH_TOL):
        """Indices of the nodes at spatial momenta ``p3``, or None if any is off-grid."""
        dist, idx = self._tree.query(np.asarray(p3, dtype=float))
        if np.all(dist <= tol * max(1.0, self.p_max)):
            return idx
        return None

    def permutation(self, A):
        """Index map i -> node at Lambda_A^{-1} p_i, if A maps the grid onto itself."""
        q = act(np.linalg.inv(A), self.nodes)
        return self.lookup(q[:, 1:])

    def interpolate(self, values, p3):
        """Trilinear interpolation in (|p|, theta, phi); requires the product design.

        ``values`` has shape (len(grid), k).  Below the first radial node the
        value is held constant; between the last node and p_max it falls
        linearly to zero; beyond p_max it is zero.
        """
        if self.angular != "product":
            raise ValueError("off-grid evaluation needs the product angular design")
        from .orbits import polar_angles

        p3 = np.asarray(p3, dtype=float)
        vals = np.asarray(values).reshape(self.radial, self.n_theta, self.n_phi, -1)
        r = np.linalg.norm(p3, axis=-1)
        theta, phi = polar_angles(p3)

        rn = np.append(self.r_nodes, self.p_max)
        vals = np.concatenate([vals, np.zeros((1,) + vals.shape[1:], dtype=vals.dtype)], axis=0)
        rc = np.clip(r, rn[0], rn[-1])
        ir = np.clip(np.searchsorted(rn, rc) - 1, 0, len(rn) - 2)
        tr = (rc - rn[ir]) / (rn[ir + 1] - rn[ir])

        tn = self.theta_nodes
        tc = np.clip(theta, tn[0], tn[-1])
        it = np.clip(np.searchsorted(tn, tc) - 1, 0, len(tn) - 2)
        tt = (tc - tn[it]) / (tn[it + 1] - tn[it])

        dphi = 2 * np.pi / self.n_phi
        u = np.mod(phi, 2 * np.pi) / dphi
        ip = np.floor(u).astype(int) % self.n_phi
        tp = u - np.floor(u)
        ip1 = (ip + 1) % self.n_phi

        out = 0.0
        for wr, jr in ((1 - tr, ir), (tr, ir + 1)):
            for wt, jt in ((1 - tt, it), (tt, it + 1)):
                for wp, jp in ((1 - tp, ip), (tp, ip1)):
                    out = out + (wr * wt * wp)[:, None] * vals[jr, jt, jp]
        return np.where((r > self.p_max)[:, None], 0.0, out)


def default_grid(mass: float = 1.0) -> MomentumGrid:
    return MomentumGrid(mass=mass, p_max=6 * max(mass, 1.0), radial=32, angular="octahedral")


@functools.lru_cache(maxsize=None)
def octahedral_group() -> tuple:
    """The 48 elements of the binary octahedral group inside SU(2)."""
    gens = [rotation(ax, np.pi / 2) for ax in np.eye(3)]
    found = [np.eye(2, dtype=complex)]
    keys = {_key(found[0])}
    frontier = list(found)
    while frontier:
        new = []
        for g in frontier:
            for h in gens:
                k = h @ g
                key = _key(k)
                if key not in keys:
                    keys.add(key)
                    found.append(k)
                    new.append(k)
        frontier = new
    return tuple(found)


def _key(M):
    return tuple(np.round(np.concatenate([M.real.ravel(), M.imag.ravel()]), 8))


@dataclass
class WaveFunction:
    """Amplitudes f_lambda(p) on a grid, shape (len(grid), 2s+1)."""

    grid: MomentumGrid
    twice_s: int
    amplitudes: np.ndarray
    layout: str = "wigner"

    def __post_init__(self):
        check_twice_s(self.twice_s)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 2 or self.amplitudes.shape[0] != len(self.grid):
            raise ValueError(f"amplitudes must have shape ({len(self.grid)}, k), got {self.amplitudes.shape}")
        if self.layout == "wigner" and self.amplitudes.shape[1] != self.twice_s + 1:
            raise ValueError("wigner amplitudes need 2s+1 components")

    @classmethod
    def from_function(cls, grid: MomentumGrid, twice_s: int, fn) -> "WaveFunction":
        """Sample ``fn(nodes) -> (N, 2s+1)``."""
        return cls(grid, twice_s, fn(grid.nodes))

    def with_amplitudes(self, amplitudes) -> "WaveFunction":
        return WaveFunction(self.grid, self.twice_s, amplitudes, self.layout)

    def to_json(self) -> str:
        amps = np.stack([self.amplitudes.real, self.amplitudes.imag], axis=-1)
        return json.dumps(
            {
                "schema": SCHEMA_VERSION,
                "mass": self.grid.mass,
                "twice_spin": self.twice_s,
                "layout": self.layout,
                "grid": self.grid.spec,
                "amplitudes": amps.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "WaveFunction":
        obj = json.loads(text)
        if obj.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema {obj.get('schema')!r}")
        grid = MomentumGrid.from_spec(obj["grid"])
        amps = np.asarray(obj["amplitudes"], dtype=float)
        return cls(grid, int(obj["twice_spin"]), amps[..., 0] + 1j * amps[..., 1], obj.get("layout", "wigner"))


def inner_product(f: WaveFunction, g: WaveFunction) -> complex:
    if not f.grid.same_as(g.grid):
        raise ValueError("wavefunctions live on different grids")
    if f.twice_s != g.twice_s:
        raise ValueError("wavefunctions carry different spins")
    return complex(np.sum(f.grid.weights[:, None] * np.conj(f.amplitudes) * g.amplitudes))


def norm(f: WaveFunction) -> float:
    return float(np.sqrt(inner_product(f, f).real))


def _pullback(grid: MomentumGrid, values, A):
    """Values at Lambda_A^{-1} p_i, and the pulled-back momenta."""
    perm = grid.permutation(A)
    if perm is not None:
        return values[perm], grid.nodes[perm], True
    q = act(np.linalg.inv(A), grid.nodes)
    q[:, 0] = np.sqrt(np.sum(q[:, 1:] ** 2, axis=-1) + grid.mass**2)
    return grid.interpolate(values, q[:, 1:]), q, False


def rep_apply(element, f: WaveFunction, boost_choice: str = CANONICAL) -> WaveFunction:
    """(U(a, A) f)(p) = e^{ip.a} D(R(p, A)) f(Lambda_A^{-1} p), R(p, A) = L(p)^{-1} A L(Lambda_A^{-1} p)."""
    a, A = element
    grid = f.grid
    if grid.mass <= 0:
        raise ValueError("rep_apply needs a massive grid; use massless_rep_apply")
    A = np.asarray(A, dtype=complex)
    pulled, q, _ = _pullback(grid, f.amplitudes, A)
    m = grid.mass
    R = np.linalg.inv(boost(m, grid.nodes, boost_choice)) @ A @ boost(m, q, boost_choice)
    D = spin_rep(f.twice_s, R)
    phase = np.exp(1j * minkowski_dot(grid.nodes, np.asarray(a, dtype=float)))
    return f.with_amplitudes(phase[:, None] * np.einsum("nij,nj->ni", D, pulled))


def compose(g1, g2):
    """Group law of the covering Poincare group: (a1, A1)(a2, A2) = (a1 + Lambda_{A1} a2, A1 A2)."""
    a1, A1 = g1
    a2, A2 = g2
    return np.asarray(a1, dtype=float) + act(A1, a2), np.asarray(A1) @ np.asarray(A2)


def covariant_form(f: WaveFunction, boost_choice: str = CANONICAL) -> WaveFunction:
    """psi(p) = D(L(p)) f(p)."""
    L = boost(f.grid.mass, f.grid.nodes, boost_choice)
    psi = np.einsum("nij,nj->ni", spin_rep(f.twice_s, L), f.amplitudes)
    return WaveFunction(f.grid, f.twice_s, psi, "covariant")


def from_covariant_form(psi: WaveFunction, boost_choice: str = CANONICAL) -> WaveFunction:
    Linv = np.linalg.inv(boost(psi.grid.mass, psi.grid.nodes, boost_choice))
    f = np.einsum("nij,nj->ni", spin_rep(psi.twice_s, Linv), psi.amplitudes)
    return WaveFunction(psi.grid, psi.twice_s, f)


def covariant_pointwise_inner(psi1: WaveFunction, psi2: WaveFunction) -> np.ndarray:
    """<u, v>_p = u^dag D(hat(p)/m) v at every node."""
    m = psi1.grid.mass
    metric = spin_rep(psi1.twice_s, hat(to_hermitian(psi1.grid.nodes)) / m)
    return np.einsum("ni,nij,nj->n", np.conj(psi1.amplitudes), metric, psi2.amplitudes)


def covariant_inner_product(psi1: WaveFunction, psi2: WaveFunction) -> complex:
    return complex(np.sum(psi1.grid.weights * covariant_pointwise_inner(psi1, psi2)))


def covariant_apply(element, psi: WaveFunction) -> WaveFunction:
    """(U(a, A) psi)(p) = e^{ip.a} D(A) psi(Lambda_A^{-1} p)."""
    a, A = element
    pulled, _, _ = _pullback(psi.grid, psi.amplitudes, np.asarray(A, dtype=complex))
    phase = np.exp(1j * minkowski_dot(psi.grid.nodes, np.asarray(a, dtype=float)))
    out = phase[:, None] * (pulled @ spin_rep(psi.twice_s, A).T)
    return WaveFunction(psi.grid, psi.twice_s, out, psi.layout)


def section_intertwiner(f: WaveFunction) -> np.ndarray:
    """D(L_can(p)^{-1} L_hel(p)) per node: maps helicity-section amplitudes to canonical ones."""
    m = f.grid.mass
    X = np.linalg.inv(boost(m, f.grid.nodes, "canonical")) @ boost(m, f.grid.nodes, "helicity")
    return spin_rep(f.twice_s, X)


def massless_rep_apply(twice_helicity: int, element, f: WaveFunction) -> WaveFunction:
    """(U(a, A) f)(p) = e^{ip.a} e^{i lambda phi(p, A)} f(Lambda_A^{-1} p) on the light cone.

    ``phi`` is the angle of the massless little-group element
    L(p)^{-1} A L(Lambda_A^{-1} p); the phase is z^{2 lambda} with z = e^{i phi/2}.
    """
    a, A = element
    grid = f.grid
    if grid.mass != 0:
        raise ValueError("massless_rep_apply needs a grid on the light cone (mass 0)")
    if f.amplitudes.shape[1] != 1:
        raise ValueError("massless wavefunctions are scalar")
    A = np.asarray(A, dtype=complex)
    pulled, q, _ = _pullback(grid, f.amplitudes, A)
    R = pullback_wigner(CANONICAL, 0.0, grid.nodes, A)
    for Ri in R:
        if not stabilizes_massless(Ri, 1e-8):
            raise RuntimeError("massless Wigner element left the little group")
    z = R[:, 0, 0] / np.abs(R[:, 0, 0])
    phase = np.exp(1j * minkowski_dot(grid.nodes, np.asarray(a, dtype=float))) * z ** int(twice_helicity)
    return f.with_amplitudes(phase[:, None] * pulled)
