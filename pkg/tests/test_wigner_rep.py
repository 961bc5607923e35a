import numpy as np
import pytest
from scipy import integrate

from poincare_reps import minkowski as mk, wigner_rep as wr


def gaussian(grid, n, rng, width=1.0):
    amp = rng.normal(size=(len(grid), n + 1)) + 1j * rng.normal(size=(len(grid), n + 1))
    amp *= np.exp(-np.sum(grid.nodes[:, 1:] ** 2, axis=1) / width**2)[:, None]
    return wr.WaveFunction(grid, n, amp)


def test_octahedral_rule_moments():
    g = wr.MomentumGrid(1.0, 1.0, 1, "octahedral")
    d, w = g.directions, g.weights / g.weights.sum() * 4 * np.pi
    assert len(d) == 26
    assert np.isclose(np.sum(w), 4 * np.pi)
    assert np.isclose(np.sum(w * d[:, 0] ** 4), 4 * np.pi / 5)
    assert np.isclose(np.sum(w * d[:, 0] ** 2 * d[:, 1] ** 2), 4 * np.pi / 15)
    assert np.isclose(np.sum(w * d[:, 0] ** 2 * d[:, 1] ** 2 * d[:, 2] ** 2), 4 * np.pi / 105)


@pytest.mark.parametrize("angular", ["octahedral", "product"])
def test_invariant_measure_quadrature(angular):
    m = 1.3
    g = wr.MomentumGrid(m, 8.0, 40, angular, 12, 16)
    val = np.sum(g.weights * np.exp(-np.sum(g.nodes[:, 1:] ** 2, axis=1)))
    ref = 4 * np.pi * integrate.quad(lambda p: p * p * np.exp(-p * p) / (2 * np.sqrt(p * p + m * m)), 0, np.inf)[0]
    assert abs(val - ref) < 1e-10


def test_octahedral_group():
    G = wr.octahedral_group()
    assert len(G) == 48
    grid = wr.default_grid(1.0)
    for A in G:
        perm = grid.permutation(A)
        assert perm is not None and sorted(perm) == list(range(len(grid)))


def test_rep_property_and_unitarity(rng):
    grid = wr.MomentumGrid(1.0, 6.0, 10)
    G = wr.octahedral_group()
    for n in (0, 1, 2, 3):
        f = gaussian(grid, n, rng)
        for k in range(5):
            g1 = (rng.normal(size=4), G[rng.integers(48)])
            g2 = (rng.normal(size=4), G[rng.integers(48)])
            lhs = wr.rep_apply(g1, wr.rep_apply(g2, f))
            rhs = wr.rep_apply(wr.compose(g1, g2), f)
            assert np.max(np.abs(lhs.amplitudes - rhs.amplitudes)) < 1e-12
            assert abs(wr.norm(wr.rep_apply(g1, f)) - wr.norm(f)) < 1e-12


def test_minus_one_acts_by_parity_of_spin(rng):
    grid = wr.MomentumGrid(1.0, 6.0, 4)
    for n in (1, 2):
        f = gaussian(grid, n, rng)
        out = wr.rep_apply((np.zeros(4), -np.eye(2)), f)
        assert np.allclose(out.amplitudes, (-1) ** n * f.amplitudes)


def test_translation_is_a_phase(rng):
    grid = wr.MomentumGrid(1.0, 6.0, 4)
    f = gaussian(grid, 1, rng)
    a = np.array([0.3, 0.1, -0.2, 0.5])
    out = wr.rep_apply((a, np.eye(2)), f)
    phase = np.exp(1j * mk.minkowski_dot(grid.nodes, a))
    assert np.allclose(out.amplitudes, phase[:, None] * f.amplitudes)


def test_boost_unitarity_converges_under_refinement(rng):
    """Off-grid boosts use interpolation; the norm defect must shrink as the grid is refined."""
    A = mk.boost_z(0.4) @ mk.rotation([1, 1, 0], 0.3)
    defects = []
    for nr, nt, nphi in ((16, 8, 16), (32, 16, 32), (64, 32, 64)):
        g = wr.MomentumGrid(1.0, 6.0, nr, "product", nt, nphi)
        f = wr.WaveFunction.from_function(
            g, 1, lambda p: np.exp(-np.sum((p[:, 1:] - [0.2, 0, 0.1]) ** 2, axis=1))[:, None] * [1.0, 0.5j]
        )
        defects.append(abs(wr.norm(wr.rep_apply((np.zeros(4), A), f)) / wr.norm(f) - 1))
    assert defects[0] > defects[1] > defects[2]
    assert defects[2] < 5e-3


def test_interpolation_reproduces_nodes(rng):
    g = wr.MomentumGrid(1.0, 5.0, 6, "product", 6, 8)
    vals = rng.normal(size=(len(g), 2))
    assert np.allclose(g.interpolate(vals, g.nodes[:, 1:]), vals, atol=1e-12)
    assert np.all(g.interpolate(vals, np.array([[0, 0, 6.0]])) == 0)


def test_interpolation_needs_product_design():
    with pytest.raises(ValueError):
        wr.default_grid().interpolate(np.zeros((832, 1)), np.zeros((1, 3)))


def test_covariant_form(rng):
    grid = wr.MomentumGrid(1.0, 6.0, 6)
    G = wr.octahedral_group()
    for n in (1, 2, 3):
        f = gaussian(grid, n, rng)
        psi = wr.covariant_form(f)
        pointwise = wr.covariant_pointwise_inner(psi, psi).real
        assert np.allclose(pointwise, np.sum(np.abs(f.amplitudes) ** 2, axis=1), atol=1e-12)
        assert np.isclose(wr.covariant_inner_product(psi, psi), wr.inner_product(f, f))
        g = (rng.normal(size=4), G[11])
        back = wr.from_covariant_form(wr.covariant_apply(g, psi))
        assert np.allclose(back.amplitudes, wr.rep_apply(g, f).amplitudes, atol=1e-12)


def test_section_intertwiner(rng):
    grid = wr.MomentumGrid(1.0, 6.0, 6)
    f = gaussian(grid, 2, rng)
    X = wr.section_intertwiner(f)
    assert np.allclose(np.conj(np.swapaxes(X, 1, 2)) @ X, np.eye(3), atol=1e-12)
    for A in wr.octahedral_group()[::7]:
        g = (rng.normal(size=4), A)
        lhs = np.einsum("nij,nj->ni", X, wr.rep_apply(g, f, "helicity").amplitudes)
        rhs = wr.rep_apply(g, f.with_amplitudes(np.einsum("nij,nj->ni", X, f.amplitudes))).amplitudes
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_massless_stabilizer_phases():
    grid = wr.MomentumGrid(0.0, 4.0, 4)
    f = wr.WaveFunction(grid, 0, np.ones((len(grid), 1)))
    ipi = [i for i, p in enumerate(grid.nodes) if np.allclose(p[1:3], 0) and p[3] > 0]
    for twice_h in (-2, -1, 1, 4):
        for phi in (np.pi / 2, np.pi, 3 * np.pi / 2, 2 * np.pi):
            R = mk.rotation([0, 0, 1], phi)  # = diag(e^{-i phi/2}, e^{i phi/2})
            out = wr.massless_rep_apply(twice_h, (np.zeros(4), R), f).amplitudes[ipi, 0]
            assert np.allclose(out, np.exp(-0.5j * twice_h * phi), atol=1e-12)


def test_json_roundtrip(rng):
    f = gaussian(wr.MomentumGrid(1.0, 6.0, 3, "product", 4, 4), 1, rng)
    g = wr.WaveFunction.from_json(f.to_json())
    assert g.grid.same_as(f.grid) and np.array_equal(g.amplitudes, f.amplitudes)


def test_grid_mismatch_rejected(rng):
    f = gaussian(wr.MomentumGrid(1.0, 6.0, 3), 0, rng)
    g = gaussian(wr.MomentumGrid(1.0, 6.0, 4), 0, rng)
    with pytest.raises(ValueError):
        wr.inner_product(f, g)
    with pytest.raises(ValueError):
        wr.WaveFunction(f.grid, 1, np.zeros((len(f.grid), 1)))
