"""Exact arithmetic in the cyclotomic field Q(zeta_M).

Elements are rational coefficient vectors reduced modulo the M-th cyclotomic
polynomial, so equality is structural.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from math import gcd

import numpy as np


def _poly_divmod(num, den):
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = Fraction(num[-1], den[-1])
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        num.pop()
    return q, num


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_poly(d))
            assert not any(rem)
    return tuple(int(c) for c in poly)


class Cyclotomic:
    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        phi = cyclotomic_poly(order)
        deg = len(phi) - 1
        c = [Fraction(x) for x in coeffs]
        if len(c) > deg:
            _, c = _poly_divmod(c, phi)
        c = c + [Fraction(0)] * (deg - len(c))
        self.order = order
        self.coeffs = tuple(c[:deg])

    @classmethod
    def root(cls, order: int, k: int) -> "Cyclotomic":
        k %= order
        return cls(order, [0] * k + [1])

    @classmethod
    def rational(cls, order: int, q) -> "Cyclotomic":
        return cls(order, [q])

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.rational(self.order, other)
        if other.order != self.order:
            raise ValueError("cyclotomic elements from different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Cyclotomic(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Cyclotomic(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        other = self._check(other)
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return Cyclotomic(self.order, prod)

    __rmul__ = __mul__

    def __truediv__(self, q):
        q = Fraction(q)
        return Cyclotomic(self.order, [a / q for a in self.coeffs])

    def conjugate(self) -> "Cyclotomic":
        out = [Fraction(0)] * self.order
        for k, a in enumerate(self.coeffs):
            out[(-k) % self.order] += a
        return Cyclotomic(self.order, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(self.order, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __complex__(self):
        z = np.exp(2j * np.pi / self.order)
        return complex(sum(float(a) * z**k for k, a in enumerate(self.coeffs)))

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = [f"{a}*z^{k}" for k, a in enumerate(self.coeffs) if a]
        return f"Q(z{self.order})[{' + '.join(terms)}]"


def lcm(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // gcd(out, n)
    return out
