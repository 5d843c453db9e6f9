"""Exact arithmetic in Q(zeta_L) for phase sums.

Elements are coefficient vectors in the power basis 1, zeta, ...,
zeta^(phi(L) - 1), reduced modulo the L-th cyclotomic polynomial.
"""
from __future__ import annotations

from functools import lru_cache

from .ntheory import divisors

__all__ = ["cyclotomic_polynomial", "CyclotomicField"]


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


class CyclotomicField:
    """Q(zeta_L) with a precomputed reduction table for the powers of zeta."""

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        phi = list(cyclotomic_polynomial(order))
        self.degree = len(phi) - 1
        table = []
        v = [1] + [0] * (self.degree - 1)
        for _ in range(order):
            table.append(tuple(v))
            # multiply by zeta and reduce
            top = v[-1]
            v = [0] + v[:-1]
            if top:
                v = [a - top * b for a, b in zip(v, phi[:-1])]
        self._powers = table

    def power(self, exponent: int) -> tuple[int, ...]:
        """zeta^exponent in the power basis."""
        return self._powers[exponent % self.order]

    def zero(self) -> list:
        return [0] * self.degree

    @staticmethod
    def is_zero(v) -> bool:
        return not any(v)

    @staticmethod
    def is_rational(v) -> bool:
        return not any(v[1:])
