import numpy as np
import pytest

from poincare_reps import irreps, minkowski as mk

SQ2 = np.sqrt(2.0)


def test_spin_zero_is_trivial(rng):
    A = mk.random_sl2c(rng)
    assert np.array_equal(irreps.spin_rep(0, A), np.ones((1, 1)))


def test_spin_half_is_fundamental(rng):
    A = mk.random_sl2c(rng)
    assert np.allclose(irreps.spin_rep(1, A), A, atol=1e-15)


def test_spin_one_unipotent_frozen():
    N = np.array([[1, 1], [0, 1]], dtype=complex)
    expected = np.array([[1, SQ2, 1], [0, 1, SQ2], [0, 0, 1]])
    assert np.allclose(irreps.spin_rep(2, N), expected, atol=1e-15)


def test_diagonal_element_weights():
    z = np.exp(0.3 + 0.4j)
    A = np.diag([z, 1 / z])
    for n in range(6):
        expected = np.diag([z ** (2 * lam) for lam in np.arange(n, -n - 1, -2) / 2])
        assert np.allclose(irreps.spin_rep(n, A), expected, atol=1e-12)


def test_generators_satisfy_su2_algebra():
    for n in range(1, 6):
        J = irreps.spin_generators(n)
        s = n / 2
        assert np.allclose(J[0] @ J[1] - J[1] @ J[0], 1j * J[2], atol=1e-12)
        casimir = sum(j @ j for j in J)
        assert np.allclose(casimir, s * (s + 1) * np.eye(n + 1), atol=1e-12)
        assert np.allclose(np.diag(J[2]), np.arange(n, -n - 1, -2) / 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matches_kronecker_oracle(rng, n):
    for A in mk.random_sl2c(rng, 10):
        assert np.max(np.abs(irreps.spin_rep(n, A) - irreps.spin_rep_oracle(n, A))) < 1e-10


@pytest.mark.parametrize("n", [1, 3, 5])
def test_hat_rep_is_inverse_adjoint(rng, n):
    A = mk.random_sl2c(rng)
    assert np.allclose(irreps.hat_rep(n, A) @ mk.dagger(irreps.spin_rep(n, A)), np.eye(n + 1), atol=1e-12)


def test_hat_rep_equals_rep_on_su2(rng):
    U = mk.random_su2(rng)
    assert np.allclose(irreps.hat_rep(3, U), irreps.spin_rep(3, U), atol=1e-13)


def test_invalid_spin():
    with pytest.raises(ValueError):
        irreps.spin_rep(-1, np.eye(2))
    with pytest.raises((ValueError, TypeError)):
        irreps.spin_rep(1.5, np.eye(2))


def test_sigma_spin_half_frozen():
    sig = irreps.extract_sigma(1)
    pauli = [np.eye(2), [[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]]
    for mu in range(4):
        sign = 1 if mu == 0 else -1
        # upper-index tensors: sigma^mu = (1, -sigma_k); lowered: (1, sigma_k)
        assert np.allclose(sig.sigma[mu], sign * np.asarray(pauli[mu]), atol=1e-14)
        assert np.allclose(sig.lowered()[mu], pauli[mu], atol=1e-14)
        assert np.allclose(sig.lowered(True)[mu], sign * np.asarray(pauli[mu]), atol=1e-14)


def test_sigma_spin_zero():
    sig = irreps.extract_sigma(0)
    assert np.allclose(sig.sigma, [[1.0]])


def test_sigma_count_and_symmetry():
    sig = irreps.extract_sigma(2)
    assert len(sig.independent_entries()) == 10
    assert np.allclose(sig.sigma, np.swapaxes(sig.sigma, 0, 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sigma_contraction(rng, n):
    sig = irreps.extract_sigma(n)
    for _ in range(5):
        p = rng.normal(size=4)
        pl = mk.lower(p)
        assert np.max(np.abs(sig.contract(pl) - irreps.spin_rep(n, mk.to_hermitian(p)))) < 1e-10
        assert np.max(np.abs(sig.contract(pl, True) - irreps.spin_rep(n, mk.hat(mk.to_hermitian(p))))) < 1e-10


def test_dirac_matrices(rng):
    g = irreps.gamma_matrices(1).gamma
    assert g.shape == (4, 4, 4)
    for mu in range(4):
        for nu in range(4):
            assert np.allclose(g[mu] @ g[nu] + g[nu] @ g[mu], 2 * mk.ETA[mu, nu] * np.eye(4), atol=1e-14)
    p = rng.normal(size=4)
    slash = irreps.gamma_matrices(1).contract(mk.lower(p))
    assert np.allclose(slash @ slash, mk.minkowski_dot(p, p) * np.eye(4), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gamma_diagonal_blocks_exactly_zero(n):
    g = irreps.gamma_matrices(n).gamma
    d = n + 1
    assert not np.any(g[..., :d, :d]) and not np.any(g[..., d:, d:])


def test_contract_batch_matches_single(rng):
    gs = irreps.gamma_matrices(2)
    P = rng.normal(size=(4, 4))
    batch = gs.contract_batch(P)
    for k in range(4):
        assert np.allclose(batch[k], gs.contract(P[k]), atol=1e-13)
