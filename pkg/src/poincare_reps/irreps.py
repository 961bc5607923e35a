"""Finite-dimensional representations D^(s,0), D^(0,s) of SL(2,C) and the
generalized sigma / gamma matrices.

Spin is carried as ``twice_s`` (an int, 2s).  The basis of C^{2s+1} is the
canonical one, ordered lambda = s, s-1, ..., -s; index ``i`` corresponds to
lambda = s - i.  D^(s,0) is realized on homogeneous polynomials of degree 2s
in (u, v) with orthonormal monomials u^{s+lambda} v^{s-lambda} / sqrt((s+lambda)!(s-lambda)!),
the group acting by (u, v) -> (a u + c v, b u + d v).
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import comb, factorial, sqrt

import numpy as np

from .minkowski import ETA, PAULI, hat, to_hermitian


def check_twice_s(twice_s) -> int:
    if isinstance(twice_s, bool) or int(twice_s) != twice_s or twice_s < 0:
        raise ValueError(f"twice_s must be a non-negative integer, got {twice_s!r}")
    return int(twice_s)


def dim(twice_s: int) -> int:
    return check_twice_s(twice_s) + 1


def helicities(twice_s: int) -> np.ndarray:
    """The values 2*lambda in basis order: twice_s, twice_s - 2, ..., -twice_s."""
    return np.arange(twice_s, -twice_s - 1, -2)


@functools.lru_cache(maxsize=None)
def _terms(n: int):
    # (row, col, coefficient, power of a, c, b, d)
    terms = []
    for col in range(n + 1):
        j, k = n - col, col
        for rho in range(j + 1):
            for tau in range(k + 1):
                row = n - (rho + tau)
                coef = comb(j, rho) * comb(k, tau) * sqrt(
                    factorial(rho + tau) * factorial(n - rho - tau) / (factorial(j) * factorial(k))
                )
                terms.append((row, col, coef, rho, j - rho, tau, k - tau))
    return tuple(terms)


def spin_rep(twice_s: int, A) -> np.ndarray:
    """D^(s,0)(A); defined for any 2x2 matrix (it is a polynomial map), batched over leading axes."""
    n = check_twice_s(twice_s)
    A = np.asarray(A, dtype=complex)
    batch = A.shape[:-2]
    powers = [np.stack([A[..., r, c] ** e for e in range(n + 1)], axis=-1) for r, c in ((0, 0), (1, 0), (0, 1), (1, 1))]
    pa, pc, pb, pd = powers
    D = np.zeros(batch + (n + 1, n + 1), dtype=complex)
    for row, col, coef, ea, ec, eb, ed in _terms(n):
        D[..., row, col] += coef * pa[..., ea] * pc[..., ec] * pb[..., eb] * pd[..., ed]
    return D


def hat_rep(twice_s: int, A) -> np.ndarray:
    """D^(0,s)(A) = D^(s,0)(hat A)."""
    return spin_rep(twice_s, hat(A))


def spin_algebra(twice_s: int, X) -> np.ndarray:
    """Lie-algebra representation dD(X) = d/dt D(1 + tX) at t = 0, exact."""
    n = check_twice_s(twice_s)
    X = np.asarray(X, dtype=complex)
    out = np.zeros(X.shape[:-2] + (n + 1, n + 1), dtype=complex)
    for col in range(n + 1):
        j, k = n - col, col
        out[..., col, col] = X[..., 0, 0] * j + X[..., 1, 1] * k
        if col + 1 <= n:
            out[..., col + 1, col] = X[..., 1, 0] * sqrt(j * (k + 1))
        if col - 1 >= 0:
            out[..., col - 1, col] = X[..., 0, 1] * sqrt(k * (j + 1))
    return out


def spin_generators(twice_s: int) -> np.ndarray:
    """J_1, J_2, J_3 in the spin-s representation, shape (3, 2s+1, 2s+1)."""
    return np.stack([spin_algebra(twice_s, PAULI[k] / 2) for k in (1, 2, 3)])


@functools.lru_cache(maxsize=None)
def symmetric_isometry(twice_s: int) -> np.ndarray:
    """Isometry C^{2s+1} -> (C^2)^{(x)2s} onto the symmetric tensors.

    Column i is the normalized symmetrization of e_0^{(x)(2s-i)} (x) e_1^{(x)i};
    with this choice P^dag A^{(x)2s} P = D^(s,0)(A).
    """
    n = check_twice_s(twice_s)
    P = np.zeros((2**n, n + 1))
    for flat, bits in enumerate(itertools.product((0, 1), repeat=n)):
        ones = sum(bits)
        P[flat, ones] = 1.0 / sqrt(comb(n, ones))
    P.setflags(write=False)
    return P


def kron_power(A, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, A)
    return out


def spin_rep_oracle(twice_s: int, A) -> np.ndarray:
    """Independent route to D^(s,0): restrict A^{(x)2s} to the symmetric subspace."""
    P = symmetric_isometry(twice_s)
    return P.T @ kron_power(np.asarray(A, dtype=complex), twice_s) @ P


def contract(tensor, p_cov, n: int):
    """Contract the first ``n`` Lorentz axes of ``tensor`` with the covariant vector ``p_cov``."""
    out = np.asarray(tensor)
    for _ in range(n):
        out = np.tensordot(p_cov, out, axes=([0], [0]))
    return out


def sym_index_tuples(n: int):
    return list(itertools.combinations_with_replacement(range(4), n))


@dataclass(frozen=True)
class GeneralizedSigma:
    """sigma^{mu_1..mu_2s} and its hatted partner, upper Lorentz indices.

    Contracting with covariant p_mu (n times) reproduces D^(s)(p) and D^(s)(hat p).
    Arrays have shape (4,)*2s + (2s+1, 2s+1).
    """

    twice_s: int
    sigma: np.ndarray
    sigma_hat: np.ndarray

    def contract(self, p_cov, hatted: bool = False):
        return contract(self.sigma_hat if hatted else self.sigma, p_cov, self.twice_s)

    def lowered(self, hatted: bool = False):
        """Same tensor with all Lorentz indices lowered (contract with contravariant p^mu)."""
        t = self.sigma_hat if hatted else self.sigma
        for axis in range(self.twice_s):
            t = np.moveaxis(np.tensordot(ETA, t, axes=([1], [axis])), 0, axis)
        return t

    def independent_entries(self, hatted: bool = False) -> dict:
        t = self.sigma_hat if hatted else self.sigma
        return {idx: t[idx] for idx in sym_index_tuples(self.twice_s)}


def _monomials(n: int):
    out = []
    for idx in sym_index_tuples(n):
        k = [idx.count(mu) for mu in range(4)]
        out.append((idx, tuple(k)))
    return out


def _polarization_nodes(n: int) -> np.ndarray:
    K = max(1, (n + 1) // 2)
    vals = np.arange(-K, K + 1, dtype=float)
    return np.array(list(itertools.product(vals, repeat=4)))


@functools.lru_cache(maxsize=None)
def _extract(n: int, hatted: bool):
    mons = _monomials(n)
    nodes = _polarization_nodes(n)
    V = np.ones((len(nodes), len(mons)))
    for c, (_, k) in enumerate(mons):
        for mu in range(4):
            V[:, c] *= nodes[:, mu] ** k[mu]
    rank = np.linalg.matrix_rank(V)
    if rank < len(mons):
        raise np.linalg.LinAlgError(f"polarization system singular (rank {rank} < {len(mons)})")
    # nodes are covariant p_mu; the hermitian matrix wants contravariant components
    P = to_hermitian(nodes @ ETA)
    if hatted:
        P = hat(P)
    values = spin_rep(n, P).reshape(len(nodes), -1)
    coef, *_ = np.linalg.lstsq(V, values, rcond=None)
    d = n + 1
    tensor = np.zeros((4,) * n + (d, d), dtype=complex)
    for c, (idx, k) in enumerate(mons):
        multinom = factorial(n)
        for kk in k:
            multinom //= factorial(kk)
        entry = coef[c].reshape(d, d) / multinom
        for perm in set(itertools.permutations(idx)):
            tensor[perm] = entry
    tensor.setflags(write=False)
    return tensor


def extract_sigma(twice_s: int) -> GeneralizedSigma:
    n = check_twice_s(twice_s)
    return GeneralizedSigma(n, _extract(n, False), _extract(n, True))


@dataclass(frozen=True)
class GammaSet:
    """gamma^{mu_1..mu_2s} = [[0, sigma], [sigma_hat, 0]], shape (4,)*2s + (2d, 2d)."""

    twice_s: int
    gamma: np.ndarray

    def contract(self, p_cov):
        return contract(self.gamma, p_cov, self.twice_s)

    def contract_batch(self, p_cov):
        """Contract with each row of ``p_cov`` (N, 4); returns (N, 2d, 2d)."""
        p_cov = np.asarray(p_cov)
        out = np.broadcast_to(self.gamma, (len(p_cov),) + self.gamma.shape)
        for _ in range(self.twice_s):
            out = np.einsum("nm,nm...->n...", p_cov, out)
        return np.asarray(out)


def gamma_matrices(twice_s: int) -> GammaSet:
    sig = extract_sigma(twice_s)
    d = twice_s + 1
    g = np.zeros((4,) * twice_s + (2 * d, 2 * d), dtype=complex)
    g[..., :d, d:] = sig.sigma
    g[..., d:, :d] = sig.sigma_hat
    return GammaSet(twice_s, g)
