"""The eight acceptance criteria, each at its stated tolerance and runtime budget.

Every criterion records one PASS/FAIL line; the lines are printed at the end of
the pytest run (see conftest.py) and when this file is executed directly.
"""
import time
import warnings

import numpy as np
import pytest

from poincare_reps import (
    fields,
    irreps,
    mackey_finite,
    minkowski as mk,
    oracles,
    orbits,
    spinstat,
    wigner_rep as wr,
)

RESULTS: dict[int, str] = {}


class Criterion:
    """Collects named residual checks and a runtime budget for one criterion."""

    def __init__(self, number: int, title: str, budget: float | None = None):
        self.number, self.title, self.budget = number, title, budget
        self.items: list[tuple[str, float, float, bool]] = []

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def check(self, name: str, value: float, tol: float, strict: bool = False):
        ok = bool(value < tol) if strict else bool(value <= tol)
        self.items.append((name, float(value), tol, ok))

    def require(self, name: str, ok: bool):
        self.items.append((name, float(not ok), 0.0, bool(ok)))

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        if self.budget is not None:
            self.items.append((f"runtime {elapsed:.1f}s", elapsed, self.budget, elapsed < self.budget))
        failed = [f"{n} ({v:.3g} vs {t:.3g})" for n, v, t, ok in self.items if not ok]
        if exc_type is not None:
            failed.append(f"raised {exc_type.__name__}: {exc}")
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {self.number} [{status}] {self.title} ({elapsed:.1f}s)"
        if failed:
            line += ": " + "; ".join(failed)
        RESULTS[self.number] = line
        print(line)
        if exc_type is None:
            assert not failed, line
        return False


def rel_boost_err(L, m, p):
    return np.max(np.abs(mk.act(L, [m, 0, 0, 0]) - p))


def test_criterion_1_covering_map():
    with Criterion(1, "covering map homomorphism, kernel, determinant", budget=5.0) as c:
        rng = np.random.default_rng(1)
        A, B = mk.random_sl2c(rng, 1000), mk.random_sl2c(rng, 1000)
        c.check("homomorphism", np.max(np.abs(mk.covering_map(A @ B) - mk.covering_map(A) @ mk.covering_map(B))), 1e-12, True)
        c.check("lambda(A) = lambda(-A)", np.max(np.abs(mk.covering_map(-A) - mk.covering_map(A))), 1e-15)
        x = rng.normal(size=(1000, 4))
        c.check("det(x) = x.x", np.max(np.abs(np.linalg.det(mk.to_hermitian(x)).real - mk.minkowski_dot(x, x))), 1e-12)


def test_criterion_2_irreps():
    with Criterion(2, "spin_rep vs Kronecker oracle, SU(2) unitarity", budget=10.0) as c:
        rng = np.random.default_rng(2)
        for n in (1, 2, 3, 4):
            A = mk.random_sl2c(rng, 50)
            err = max(np.max(np.abs(irreps.spin_rep(n, a) - irreps.spin_rep_oracle(n, a))) for a in A)
            c.check(f"oracle 2s={n}", err, 1e-10)
            D = irreps.spin_rep(n, mk.random_su2(rng, 50))
            c.check(f"unitary 2s={n}", np.max(np.abs(mk.dagger(D) @ D - np.eye(n + 1))), 1e-12)


def test_criterion_3_boosts_and_wigner_rotations():
    with Criterion(3, "boost sections, Wigner rotations, cocycle, helicity") as c:
        rng = np.random.default_rng(3)
        m = 1.0
        p = mk.random_on_shell(rng, m, 1000)
        for choice in orbits.BOOST_CHOICES:
            c.check(f"L(p) pi = p [{choice}]", rel_boost_err(orbits.boost(m, p, choice), m, p), 1e-12)
            A = mk.random_sl2c(rng, 1000, 0.5)
            c.check(f"W in SU(2) [{choice}]", orbits.su2_residual(orbits.wigner_rotation(choice, m, p, A)), 1e-12)
            q = p[:200]
            A1, A2 = mk.random_sl2c(rng, 200, 0.5), mk.random_sl2c(rng, 200, 0.5)
            q2 = mk.act(A2, q)
            q2[:, 0] = np.sqrt(np.sum(q2[:, 1:] ** 2, axis=1) + m * m)
            lhs = orbits.wigner_rotation(choice, m, q, A1 @ A2)
            rhs = orbits.wigner_rotation(choice, m, q2, A1) @ orbits.wigner_rotation(choice, m, q, A2)
            c.check(f"cocycle [{choice}]", np.max(np.abs(lhs - rhs)), 1e-10)
        err = 0.0
        for n in (1, 2, 3, 4):
            Jz = irreps.spin_generators(n)[2]
            for d in rng.normal(size=(50, 3)):
                DR = irreps.spin_rep(n, orbits.direction_rotation(d))
                err = max(err, np.max(np.abs(DR @ Jz @ mk.dagger(DR) - orbits.helicity_operator(n, d))))
        c.check("helicity conjugation", err, 1e-10)


def test_criterion_4_wigner_representation():
    with Criterion(4, "representation on translations x| octahedral group, intertwiner, massless phases") as c:
        rng = np.random.default_rng(4)
        grid = wr.MomentumGrid(1.0, 6.0, 12)
        G = wr.octahedral_group()
        rep = unit = inter = 0.0
        for n in (0, 1, 2, 3):
            amp = rng.normal(size=(len(grid), n + 1)) + 1j * rng.normal(size=(len(grid), n + 1))
            amp *= np.exp(-np.sum(grid.nodes[:, 1:] ** 2, axis=1) / 2)[:, None]
            f = wr.WaveFunction(grid, n, amp)
            X = wr.section_intertwiner(f)
            for _ in range(10):
                g1 = (rng.normal(size=4), G[rng.integers(48)])
                g2 = (rng.normal(size=4), G[rng.integers(48)])
                lhs = wr.rep_apply(g1, wr.rep_apply(g2, f))
                rep = max(rep, np.max(np.abs(lhs.amplitudes - wr.rep_apply(wr.compose(g1, g2), f).amplitudes)))
                unit = max(unit, abs(wr.norm(wr.rep_apply(g1, f)) - wr.norm(f)) / wr.norm(f))
                a = np.einsum("nij,nj->ni", X, wr.rep_apply(g1, f, "helicity").amplitudes)
                b = wr.rep_apply(g1, f.with_amplitudes(np.einsum("nij,nj->ni", X, f.amplitudes))).amplitudes
                inter = max(inter, np.max(np.abs(a - b)))
        c.check("representation property", rep, 1e-12)
        c.check("unitarity", unit, 1e-12)
        c.check("section intertwiner", inter, 1e-10)
        lc = wr.MomentumGrid(0.0, 4.0, 6)
        h = wr.WaveFunction(lc, 0, np.ones((len(lc), 1)))
        on_axis = (np.linalg.norm(lc.nodes[:, 1:3], axis=1) < 1e-12) & (lc.nodes[:, 3] > 0)
        phase = 0.0
        for twice_h in (-4, -3, -1, 1, 2, 3):
            for phi in np.arange(1, 8) * np.pi / 2:
                R = mk.rotation([0, 0, 1], phi)  # little-group element with angle -phi
                out = wr.massless_rep_apply(twice_h, (np.zeros(4), R), h).amplitudes[on_axis, 0]
                phase = max(phase, np.max(np.abs(out - np.exp(-0.5j * twice_h * phi))))
        c.check("massless stabilizer phases", phase, 1e-12)


def test_criterion_5_mackey_exact():
    with Criterion(5, "Mackey classification in exact arithmetic", budget=30.0) as c:
        for name in ("S3", "D4", "A4", "Z5:Z4", "Heis3"):
            G = mackey_finite.builtin_group(name)
            rep = mackey_finite.verify_mackey(G, exact=True)
            c.require(f"{name} norms exactly 1", all(cl["character_norm"] == "1" for cl in rep["classes"]))
            c.require(f"{name} pairwise inequivalent", rep["pairwise_inequivalent"])
            c.require(f"{name} sum dim^2 = |G|", rep["sum_dim_squared"] == G.order)
            c.check(f"{name} imprimitivity", rep["imprimitivity_residual"], 1e-12)
            c.require(f"{name} report passed", rep["passed"])


def test_criterion_6_fields():
    with Criterion(6, "Dirac, duality, BW, PF, RS equations and norm equalities") as c:
        grid = wr.MomentumGrid(1.0, 6.0, 10)
        rng = np.random.default_rng(6)
        for n in (1, 2, 3):
            amp = rng.normal(size=(len(grid), n + 1)) + 1j * rng.normal(size=(len(grid), n + 1))
            amp *= np.exp(-np.sum(grid.nodes[:, 1:] ** 2, axis=1) / 2)[:, None]
            f = wr.WaveFunction(grid, n, amp)
            nf = wr.inner_product(f, f).real
            phi, chi = fields.phi_from_f(f), fields.chi_from_f(f)
            dirac = fields.generalized_dirac_residual(fields.bispinor_from_f(f))
            if n == 1:
                c.check("Dirac s=1/2", dirac, 1e-12, True)
            c.check(f"duality 2s={n}", max(fields.duality_check(phi, chi).values()), 1e-10, True)
            c.check(f"phi norm 2s={n}", abs(fields.field_norm(phi) - nf) / nf, 1e-10, True)
            c.check(f"chi norm 2s={n}", abs(fields.field_norm(chi) - nf) / nf, 1e-10, True)
            bw = fields.bw_construct(f)
            c.check(f"BW 2s={n}", max(max(fields.bw_residual(bw)), fields.bw_symmetry_defect(bw)), 1e-10, True)
            c.check(f"BW norm 2s={n}", abs(fields.bw_norm(bw) - nf) / nf, 1e-10, True)
            for k in range(n + 1):
                r = fields.pf_residual(fields.pf_construct(f, n - k, k))
                c.check(f"PF 2s={n} split ({n - k},{k})", max(r["undotted"] + r["dotted"]), 1e-10, True)
            if n == 3:
                r = fields.rs_residual(fields.rarita_schwinger(f))
                c.check("RS Dirac", r["dirac"], 1e-10, True)
                c.check("RS gamma trace", r["gamma_trace"], 1e-10, True)


def test_criterion_7_spin_statistics():
    with Criterion(7, "spin-statistics sign separation and kernel oracles", budget=120.0) as c:
        m = 1.0
        with warnings.catch_warnings():
            warnings.simplefilter("error", spinstat.LightConeWarning)
            v = spinstat.spin_statistics_verdict((0, 1, 2), m)
        c.require("verdict PASS", v["verdict"] == "PASS")
        for row in v["rows"]:
            tag = f"2s={row['twice_spin']} d={row['proper_distance']:g}"
            c.check(f"inverse ratio {tag}", 1 / row["ratio"], 1e-3, True)
            c.require(f"monotone {tag}", row["right_monotone"])
        eps = [e / m**2 for e in spinstat.DEFAULT_EPS]
        for d in (1.0, 2.0, 4.0):
            ref = oracles.delta1_equal_time(m, d, eps)
            c.check(f"Delta_1 d={d:g}", abs(spinstat.delta1(m, [0, d, 0, 0]) / ref - 1), 1e-2, True)
        for t in (1.5, 3.0):
            ref = oracles.jordan_pauli_rest(m, t, eps)
            c.check(f"timelike Delta t={t:g}", abs(spinstat.jordan_pauli_delta(m, [t, 0, 0, 0]) / ref - 1), 5e-3, True)


def test_criterion_8_fock_algebra():
    with Criterion(8, "CAR/CCR, smeared bracket, field covariance") as c:
        grid = wr.default_grid(1.0)
        rng = np.random.default_rng(8)
        iz = int(np.nonzero((np.linalg.norm(grid.nodes[:, 1:3], axis=1) < 1e-12) & (grid.nodes[:, 3] > 0))[0][0])
        fermi = spinstat.fock_build(spinstat.ModeSet.from_nodes(grid, 1, [iz], spinstat.FERMI))
        bose = spinstat.fock_build(spinstat.ModeSet.from_nodes(grid, 0, [iz, iz + 1], spinstat.BOSE))
        c.require("2-mode Fermi space", len(fermi.modes) == 2)
        c.check("CAR", max(spinstat.algebra_residuals(fermi).values()), 0.0)
        # the only inexact entries are sqrt(n)^2 - n, a few ulp
        c.check("CCR below cutoff", max(spinstat.algebra_residuals(bose).values()), 1e-15)
        pts = rng.normal(size=(4, 4))
        F = [(pts[0], np.array([1.0, 0.5j])), (pts[1], np.array([-0.3, 1.0]))]
        G = [(pts[2], np.array([0.7, 0.2]))]
        r = spinstat.smeared_bracket_check(fermi, F, G)
        c.check("smeared bracket (Fermi)", r["deviation"] / abs(r["scalar"]), 1e-10, True)
        rb = spinstat.smeared_bracket_check(bose, [(pts[0], np.ones(1))], [(pts[3], np.ones(1))])
        c.check("smeared bracket (Bose)", rb["deviation"] / abs(rb["scalar"]), 1e-10, True)
        a = rng.normal(size=4)
        c.check("covariance, translation", spinstat.covariance_check(fermi, (a, np.eye(2)), pts), 1e-10, True)
        R = mk.rotation([0, 0, 1], np.pi / 2)
        c.check("covariance, octahedral rotation", spinstat.covariance_check(fermi, (a, R), pts), 1e-10, True)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
