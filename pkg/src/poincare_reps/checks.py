"""The invariant suite run by ``poincare-reps verify``.

Every check returns a :class:`Check` record: a name, the module it exercises,
the tolerance and the measured residual.  A check passes when the residual is
finite and no larger than the tolerance.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import fields, irreps, mackey_finite, minkowski, orbits, spinstat, wigner_rep
from .minkowski import act, covering_map, dagger, hat, minkowski_dot, to_hermitian


@dataclass
class Check:
    name: str
    module: str
    tolerance: float
    residual: float

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.residual) and self.residual <= self.tolerance)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["residual"] = float(self.residual) if math.isfinite(self.residual) else str(self.residual)
        d["passed"] = self.passed
        return d


@dataclass
class SuiteConfig:
    twice_s: int = 1
    mass: float = 1.0
    p_max: float | None = None
    radial: int = 32
    angular: str = "octahedral"
    eps_seq: tuple | None = None
    seed: int = 0
    n_random: int = 200
    tol_scale: float = 1.0

    def grid(self) -> wigner_rep.MomentumGrid:
        p_max = self.p_max if self.p_max is not None else 6 * self.mass
        if self.angular == "octahedral":
            return wigner_rep.MomentumGrid(self.mass, p_max, self.radial, "octahedral")
        nt, nphi = parse_product(self.angular)
        return wigner_rep.MomentumGrid(self.mass, p_max, self.radial, "product", nt, nphi)


def parse_product(spec: str):
    """'product:16x32' -> (16, 32)."""
    try:
        kind, dims = spec.split(":")
        nt, nphi = (int(v) for v in dims.lower().split("x"))
    except ValueError:
        raise ValueError(f"angular design must be 'octahedral' or 'product:NTxNP', got {spec!r}") from None
    if kind != "product" or nt < 2 or nphi < 2:
        raise ValueError(f"angular design must be 'octahedral' or 'product:NTxNP', got {spec!r}")
    return nt, nphi


def _maxabs(x) -> float:
    return float(np.max(np.abs(x)))


def minkowski_checks(cfg: SuiteConfig, rng) -> list[Check]:
    n = cfg.n_random
    A, B = minkowski.random_sl2c(rng, n), minkowski.random_sl2c(rng, n)
    x = rng.normal(size=(n, 4))
    U = minkowski.random_sl2c(rng, n)
    return [
        Check("covering map is a homomorphism", "minkowski", 1e-12,
              _maxabs(covering_map(A @ B) - covering_map(A) @ covering_map(B))),
        Check("covering map kernel {1, -1}", "minkowski", 1e-15, _maxabs(covering_map(-A) - covering_map(A))),
        Check("det of hermitian matrix is the Minkowski square", "minkowski", 1e-12,
              _maxabs(np.linalg.det(to_hermitian(x)).real - minkowski_dot(x, x))),
        Check("hat(A) = (A^dag)^{-1}", "minkowski", 1e-12, _maxabs(hat(U) @ dagger(U) - np.eye(2))),
        Check("Lambda_A x <-> A x A^dag", "minkowski", 1e-11,
              _maxabs(to_hermitian(act(U, x)) - U @ to_hermitian(x) @ dagger(U))),
    ]


def irreps_checks(cfg: SuiteConfig, rng) -> list[Check]:
    out = []
    A = minkowski.random_sl2c(rng, 50)
    B = minkowski.random_sl2c(rng, 50)
    R = minkowski.random_su2(rng, 50)
    oracle = unit = rel = sig = 0.0
    for n in (1, 2, 3, 4):
        D = irreps.spin_rep(n, A)
        oracle = max(oracle, max(_maxabs(D[k] - irreps.spin_rep_oracle(n, A[k])) for k in range(len(A))))
        DR = irreps.spin_rep(n, R)
        unit = max(unit, _maxabs(dagger(DR) @ DR - np.eye(n + 1)))
        DA, DB = D, irreps.spin_rep(n, B)
        num = np.max(np.abs(irreps.spin_rep(n, A @ B) - DA @ DB), axis=(1, 2))
        den = np.max(np.abs(DA), axis=(1, 2)) * np.max(np.abs(DB), axis=(1, 2))
        rel = max(rel, float(np.max(num / den)))
        q = minkowski.random_on_shell(rng, cfg.mass, 20)
        s = irreps.extract_sigma(n)
        for qq in q:
            ql = minkowski.lower(qq)
            sig = max(sig, _maxabs(s.contract(ql) - irreps.spin_rep(n, to_hermitian(qq))) / max(1.0, qq[0]) ** n)
            sig = max(sig, _maxabs(s.contract(ql, True) - irreps.spin_rep(n, hat(to_hermitian(qq)))) / max(1.0, qq[0]) ** n)
    g = irreps.gamma_matrices(1).gamma
    eta = minkowski.ETA
    cliff = max(_maxabs(g[m] @ g[k] + g[k] @ g[m] - 2 * eta[m, k] * np.eye(4)) for m in range(4) for k in range(4))
    out += [
        Check("D^(s) matches the symmetrized Kronecker power, s <= 2", "irreps", 1e-10, oracle),
        Check("D^(s) restricted to SU(2) is unitary", "irreps", 1e-12, unit),
        Check("D^(s)(AB) = D^(s)(A) D^(s)(B), relative", "irreps", 1e-13, rel),
        Check("sigma contraction reproduces D^(s)(p) and D^(s)(hat p)", "irreps", 1e-11, sig),
        Check("s = 1/2 gamma matrices satisfy the Clifford relation", "irreps", 1e-15, cliff),
    ]
    return out


def orbits_checks(cfg: SuiteConfig, rng) -> list[Check]:
    m = cfg.mass
    p = minkowski.random_on_shell(rng, m, cfg.n_random)
    pi = np.array([m, 0, 0, 0.0])
    out = []
    for choice in orbits.BOOST_CHOICES:
        L = orbits.boost(m, p, choice)
        out.append(Check(f"{choice} boost carries (m,0,0,0) to p", "orbits", 1e-12,
                         _maxabs(act(L, pi) - p) / max(1.0, float(np.max(p[:, 0])))))
        A = minkowski.random_sl2c(rng, cfg.n_random, scale=0.5)
        W = orbits.wigner_rotation(choice, m, p, A)
        out.append(Check(f"{choice} Wigner rotation lies in SU(2)", "orbits", 1e-12, orbits.su2_residual(W)))
        A1, A2 = minkowski.random_sl2c(rng, 50, 0.5), minkowski.random_sl2c(rng, 50, 0.5)
        q = p[:50]
        W12 = orbits.wigner_rotation(choice, m, q, A1 @ A2)
        W2 = orbits.wigner_rotation(choice, m, q, A2)
        q2 = act(A2, q)
        q2[:, 0] = np.sqrt(np.sum(q2[:, 1:] ** 2, axis=1) + m * m)
        W1 = orbits.wigner_rotation(choice, m, q2, A1)
        out.append(Check(f"{choice} Wigner cocycle", "orbits", 1e-10, _maxabs(W12 - W1 @ W2)))
    hel = 0.0
    for n in (1, 2, 3):
        J = irreps.spin_generators(n)
        for pp in p[:20]:
            R = orbits.direction_rotation(pp[1:])
            DR = irreps.spin_rep(n, R)
            hel = max(hel, _maxabs(DR @ J[2] @ dagger(DR) - orbits.helicity_operator(n, pp[1:])))
    out.append(Check("helicity conjugation D(R) J3 D(R)^-1 = J.n", "orbits", 1e-10, hel))
    k = minkowski.random_on_shell(rng, 0.0, 50) + 0.0
    k[:, 0] = np.linalg.norm(k[:, 1:], axis=1)
    Lk = orbits.massless_boost(k)
    out.append(Check("massless boost carries pi to k", "orbits", 1e-12,
                     _maxabs(act(Lk, np.array([0.5, 0, 0, 0.5])) - k) / float(np.max(k[:, 0]))))
    return out


def wigner_checks(cfg: SuiteConfig, rng) -> list[Check]:
    grid = cfg.grid()
    n = cfg.twice_s
    amp = rng.normal(size=(len(grid), n + 1)) + 1j * rng.normal(size=(len(grid), n + 1))
    amp *= np.exp(-np.sum(grid.nodes[:, 1:] ** 2, axis=1) / cfg.mass**2)[:, None]
    f = wigner_rep.WaveFunction(grid, n, amp)
    # elements of the octahedral group that permute the configured grid
    G = [A for A in wigner_rep.octahedral_group() if grid.permutation(A) is not None]
    rep = unit = cov = 0.0
    for _ in range(8):
        g1 = (rng.normal(size=4), G[rng.integers(len(G))])
        g2 = (rng.normal(size=4), G[rng.integers(len(G))])
        lhs = wigner_rep.rep_apply(g1, wigner_rep.rep_apply(g2, f))
        rhs = wigner_rep.rep_apply(wigner_rep.compose(g1, g2), f)
        rep = max(rep, _maxabs(lhs.amplitudes - rhs.amplitudes))
        u = wigner_rep.rep_apply(g1, f)
        unit = max(unit, abs(wigner_rep.inner_product(u, u) - wigner_rep.inner_product(f, f)))
        psi = wigner_rep.covariant_apply(g1, wigner_rep.covariant_form(f))
        cov = max(cov, _maxabs(wigner_rep.from_covariant_form(psi).amplitudes - u.amplitudes))
    X = wigner_rep.section_intertwiner(f)
    A = G[min(7, len(G) - 1)]
    lhs = np.einsum("nij,nj->ni", X, wigner_rep.rep_apply((np.zeros(4), A), f, "helicity").amplitudes)
    rhs = wigner_rep.rep_apply((np.zeros(4), A), f.with_amplitudes(np.einsum("nij,nj->ni", X, f.amplitudes))).amplitudes
    psi = wigner_rep.covariant_form(f)
    m18 = _maxabs(wigner_rep.covariant_pointwise_inner(psi, psi) - np.sum(np.abs(f.amplitudes) ** 2, axis=1))
    # massless: stabilizer elements acting at pi
    lc = wigner_rep.MomentumGrid(0.0, 4.0, 4, "octahedral")
    ipi = int(np.argmin(np.linalg.norm(lc.nodes[:, 1:] / lc.nodes[:, :1] - [0, 0, 1], axis=1)))
    phase = 0.0
    for tl in (-3, -1, 1, 2):
        h = wigner_rep.WaveFunction(lc, 0, np.ones((len(lc), 1)))
        for phi_ang in (np.pi / 2, np.pi, 3 * np.pi / 2):
            R = minkowski.rotation([0, 0, 1], phi_ang)
            z = R[0, 0] / abs(R[0, 0])
            out = wigner_rep.massless_rep_apply(tl, (np.zeros(4), R), h).amplitudes[ipi, 0]
            phase = max(phase, abs(out - z**tl))
    return [
        Check("representation property on translations x| octahedral group", "wigner_rep", 1e-12, rep),
        Check("unitarity on translations x| octahedral group", "wigner_rep", 1e-12, unit),
        Check("covariant form transforms consistently", "wigner_rep", 1e-10, cov),
        Check("pointwise covariant norm equals Wigner norm", "wigner_rep", 1e-10, m18),
        Check("canonical and helicity sections are intertwined", "wigner_rep", 1e-10, _maxabs(lhs - rhs)),
        Check("massless stabilizer acts by exp(i lambda phi)", "wigner_rep", 1e-12, phase),
    ]


def mackey_checks(cfg: SuiteConfig, rng) -> list[Check]:
    out = []
    for name in ("S3", "D4", "A4", "Z5:Z4", "Heis3"):
        rep = mackey_finite.verify_mackey(mackey_finite.builtin_group(name), exact=True, seed=cfg.seed)
        out.append(Check(f"Mackey classification of {name} (exact)", "mackey_finite", 0.0, 0.0 if rep["passed"] else 1.0))
        out.append(Check(f"imprimitivity covariance for {name}", "mackey_finite", 1e-12, rep["imprimitivity_residual"]))
    return out


def fields_checks(cfg: SuiteConfig, rng) -> list[Check]:
    grid = cfg.grid()
    worst = {k: 0.0 for k in ("norm", "dual", "dirac", "bw", "bwnorm", "pf", "rs", "inverse")}
    for n in sorted({0, 1, 2, 3, cfg.twice_s}):
        amp = rng.normal(size=(len(grid), n + 1)) + 1j * rng.normal(size=(len(grid), n + 1))
        amp *= np.exp(-np.sum(grid.nodes[:, 1:] ** 2, axis=1) / (2 * cfg.mass**2))[:, None]
        f = wigner_rep.WaveFunction(grid, n, amp)
        nf = wigner_rep.inner_product(f, f).real
        phi, chi = fields.phi_from_f(f), fields.chi_from_f(f)
        worst["norm"] = max(worst["norm"], abs(fields.field_norm(phi) - nf) / nf, abs(fields.field_norm(chi) - nf) / nf)
        worst["dual"] = max(worst["dual"], *fields.duality_check(phi, chi).values())
        worst["dirac"] = max(worst["dirac"], fields.generalized_dirac_residual(fields.bispinor_from_f(f)))
        worst["inverse"] = max(worst["inverse"], _maxabs(fields.f_from_phi(phi).amplitudes - f.amplitudes))
        if n == 0 or n > 4:  # multispinors grow as 4^{2s}
            continue
        bw = fields.bw_construct(f)
        worst["bw"] = max(worst["bw"], *fields.bw_residual(bw), fields.bw_symmetry_defect(bw))
        worst["bwnorm"] = max(worst["bwnorm"], abs(fields.bw_norm(bw) - nf) / nf)
        worst["inverse"] = max(worst["inverse"], _maxabs(fields.f_from_bw(bw).amplitudes - f.amplitudes))
        for k in range(n + 1):
            pf = fields.pf_construct(f, n - k, k)
            r = fields.pf_residual(pf)
            worst["pf"] = max(worst["pf"], *r["undotted"], *r["dotted"])
            worst["inverse"] = max(worst["inverse"], _maxabs(fields.f_from_pf(pf).amplitudes - f.amplitudes))
        if n == 3:
            rs = fields.rarita_schwinger(f)
            worst["rs"] = max(worst["rs"], *fields.rs_residual(rs).values())
            worst["inverse"] = max(worst["inverse"], _maxabs(fields.f_from_rs(rs).amplitudes - f.amplitudes))
    return [
        Check("phi and chi norms equal the Wigner norm", "fields", 1e-10, worst["norm"]),
        Check("phi/chi duality relations", "fields", 1e-10, worst["dual"]),
        Check("generalized Dirac equation", "fields", 1e-10, worst["dirac"]),
        Check("Bargmann-Wigner equations and index symmetry", "fields", 1e-10, worst["bw"]),
        Check("Bargmann-Wigner norm equals the Wigner norm", "fields", 1e-10, worst["bwnorm"]),
        Check("Pauli-Fierz equations, all splits", "fields", 1e-10, worst["pf"]),
        Check("Rarita-Schwinger equations and gamma-trace constraint", "fields", 1e-10, worst["rs"]),
        Check("all constructions invert back to f", "fields", 1e-10, worst["inverse"]),
        Check("vector-spinor map at rest has rank 4", "fields", 0.0, float(fields.rs_rest_rank() != 4)),
    ]


def spinstat_checks(cfg: SuiteConfig, rng) -> list[Check]:
    grid = wigner_rep.default_grid(cfg.mass)
    z = np.linalg.norm(grid.nodes[:, 1:3], axis=1) < 1e-12
    z &= grid.nodes[:, 3] > 0
    iz = int(np.nonzero(z)[0][0])
    fer = spinstat.fock_build(spinstat.ModeSet.from_nodes(grid, 1, [iz], spinstat.FERMI))
    bos = spinstat.fock_build(spinstat.ModeSet.from_nodes(grid, 0, [iz, iz + 1, iz + 2], spinstat.BOSE))
    alg_f = spinstat.algebra_residuals(fer)
    alg_b = spinstat.algebra_residuals(bos)
    pts = rng.normal(size=(3, 4))
    trans = spinstat.covariance_check(fer, (rng.normal(size=4), np.eye(2)), pts)
    rot = spinstat.covariance_check(fer, (rng.normal(size=4), minkowski.rotation([0, 0, 1], np.pi / 2)), pts)
    F = [(pts[0], np.array([1.0, 0.5j])), (pts[1], np.array([0.2, 1.0]))]
    G = [(pts[2], np.array([1.0, 1.0]))]
    sm = spinstat.smeared_bracket_check(fer, F, G)
    smb = spinstat.smeared_bracket_check(bos, [(pts[0], np.ones(1)), (pts[1], np.ones(1))], [(pts[2], np.ones(1))])
    verdict = spinstat.spin_statistics_verdict(m=cfg.mass, eps_seq=cfg.eps_seq)
    ratios = [r["ratio"] for r in verdict["rows"]]
    monotone = all(r["right_monotone"] for r in verdict["rows"])
    return [
        Check("canonical anticommutation relations", "spinstat", 0.0, max(alg_f.values())),
        Check("canonical commutation relations below the cutoff", "spinstat", 1e-15, max(alg_b.values())),
        Check("field covariance under translations", "spinstat", 1e-12, trans),
        Check("field covariance under an octahedral rotation", "spinstat", 1e-10, rot),
        Check("smeared bracket is the kernel quadrature times 1 (Fermi)", "spinstat", 1e-10,
              sm["deviation"] / max(abs(sm["scalar"]), 1e-300)),
        Check("smeared bracket is the kernel quadrature times 1 (Bose)", "spinstat", 1e-10,
              smb["deviation"] / max(abs(smb["scalar"]), 1e-300)),
        Check("spin-statistics sign separation exceeds 1e3", "spinstat", 0.0,
              0.0 if verdict["verdict"] == "PASS" and min(ratios) > 1e3 else 1.0),
        Check("local-sign kernel decreases along the eps sequence", "spinstat", 0.0, 0.0 if monotone else 1.0),
    ]


SUITES = (
    ("minkowski", minkowski_checks),
    ("irreps", irreps_checks),
    ("orbits", orbits_checks),
    ("wigner_rep", wigner_checks),
    ("mackey_finite", mackey_checks),
    ("fields", fields_checks),
    ("spinstat", spinstat_checks),
)


def run_suite(cfg: SuiteConfig) -> dict:
    checks = []
    for k, (name, fn) in enumerate(SUITES):
        rng = np.random.default_rng([cfg.seed, k])
        try:
            for c in fn(cfg, rng):
                c.tolerance *= cfg.tol_scale
                checks.append(c)
        except (ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
            checks.append(Check(f"{name} suite raised {type(exc).__name__}: {exc}", name, 0.0, float("inf")))
    return {
        "schema": 1,
        "seed": cfg.seed,
        "config": {
            "twice_spin": cfg.twice_s,
            "mass": cfg.mass,
            "angular": cfg.angular,
            "eps_seq": list(cfg.eps_seq) if cfg.eps_seq else list(spinstat.DEFAULT_EPS),
            "tol_scale": cfg.tol_scale,
        },
        "invariants": [c.as_dict() for c in checks],
        "failed": [c.name for c in checks if not c.passed],
        "passed": all(c.passed for c in checks),
    }
