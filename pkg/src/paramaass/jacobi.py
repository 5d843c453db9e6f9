"""Truncated Fourier expansions of Jacobi forms.

A Jacobi form of weight k and index M has the expansion
sum c(n, r) q^n zeta^r over 4nM - r^2 >= 0.  An expansion stores the
coefficients with n <= n_max.  For genuine Jacobi forms c(n, r) only
depends on (4nM - r^2, r mod 2M), so coefficients with n > n_max are
still available whenever their class has a representative in the box.
"""
from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .core import CheckReport, LazyCoefficients, TruncationError
from .ntheory import bernoulli_even, cohen_h, divisor_sigma, divisors, gcd_all

__all__ = [
    "JacobiExpansion",
    "validate_jacobi",
    "jacobi_eisenstein_index1",
    "index_raise",
    "zero_jacobi",
    "times_eisenstein",
    "linear_combination",
    "jacobi_cusp_10_1",
]


def _centered(r: int, modulus: int) -> int:
    # representative of r mod modulus in (-modulus/2, modulus/2]
    r0 = r % modulus
    return r0 - modulus if 2 * r0 > modulus else r0


def _class_rep(n: int, r: int, M: int) -> tuple[int, int]:
    r0 = _centered(r, 2 * M)
    return (4 * n * M - r * r + r0 * r0) // (4 * M), r0


def _lazy(weight: int, index: int, n_max: int, coeff) -> JacobiExpansion:
    # genuine Jacobi forms only: coefficients are memoized per (D, r mod 2M) class
    shape = JacobiExpansion(weight, index, n_max, None)
    if index == 0:
        return JacobiExpansion(weight, index, n_max, LazyCoefficients(coeff, shape.keys))
    by_class: dict = {}

    def classwise(key):
        rep = _class_rep(*key, index)
        try:
            return by_class[rep]
        except KeyError:
            value = by_class[rep] = Fraction(coeff(rep))
            return value

    return JacobiExpansion(weight, index, n_max, LazyCoefficients(classwise, shape.keys))


@dataclass(frozen=True, eq=False)
class JacobiExpansion:
    weight: int
    index: int
    n_max: int
    coeffs: Mapping

    def __post_init__(self):
        if self.index < 0 or self.n_max < 0:
            raise ValueError("index and n_max must be nonnegative")

    def keys(self) -> Iterator[tuple[int, int]]:
        """Every (n, r) of the truncation box, ordered by (n, r)."""
        for n in range(self.n_max + 1):
            bound = isqrt(4 * n * self.index)
            for r in range(-bound, bound + 1):
                yield n, r

    def _stored(self, n: int, r: int) -> Fraction:
        return Fraction(self.coeffs.get((n, r), 0))

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        n, r = key
        M = self.index
        if n < 0 or 4 * n * M - r * r < 0:
            return Fraction(0)
        if n <= self.n_max:
            return self._stored(n, r)
        if M == 0:
            raise TruncationError(f"c({n}, {r}) lies outside n_max = {self.n_max}")
        r0 = _centered(r, 2 * M)
        n0 = (4 * n * M - r * r + r0 * r0) // (4 * M)
        if n0 > self.n_max:
            raise TruncationError(
                f"c({n}, {r}) reduces to c({n0}, {r0}), outside n_max = {self.n_max}"
            )
        return self._stored(n0, r0)

    def determines(self, n: int, r: int) -> bool:
        try:
            self[n, r]
        except TruncationError:
            return False
        return True

    def max_determined_discriminant(self) -> int:
        """Largest D such that every class (D, r mod 2M) is readable."""
        M = self.index
        if M == 0:
            return 0
        return 4 * self.n_max * M - M * M

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        for key in self.keys():
            yield key, self[key]

    def materialize(self) -> "JacobiExpansion":
        data = {key: c for key, c in self.items() if c}
        return JacobiExpansion(self.weight, self.index, self.n_max, data)

    def truncate(self, n_max: int) -> "JacobiExpansion":
        n_max = min(n_max, self.n_max)
        return JacobiExpansion(self.weight, self.index, n_max, self.coeffs)

    def scale(self, factor) -> "JacobiExpansion":
        """factor * phi, evaluated lazily (boxes may be large)."""
        factor = Fraction(factor)
        return JacobiExpansion(
            self.weight, self.index, self.n_max,
            LazyCoefficients(lambda key: factor * self[key], self.keys),
        )

    def _combine(self, other: "JacobiExpansion", sign: int) -> "JacobiExpansion":
        if (self.weight, self.index) != (other.weight, other.index):
            raise ValueError("weight and index must agree")
        n_max = min(self.n_max, other.n_max)
        base = self.truncate(n_max)
        data = {}
        for key in base.keys():
            c = self[key] + sign * other[key]
            if c:
                data[key] = c
        return JacobiExpansion(self.weight, self.index, n_max, data)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def differences(self, other: "JacobiExpansion") -> list[tuple[int, int]]:
        """Indices of the common box where the two expansions disagree."""
        n_max = min(self.n_max, other.n_max)
        return [key for key in self.truncate(n_max).keys() if self[key] != other[key]]

    def agrees_with(self, other: "JacobiExpansion") -> bool:
        return self.index == other.index and not self.differences(other)


def zero_jacobi(weight: int, index: int, n_max: int) -> JacobiExpansion:
    return JacobiExpansion(weight, index, n_max, {})


def validate_jacobi(phi: JacobiExpansion) -> CheckReport:
    """Check the coefficient constraints of J_{k,M} on the stored box.

    Reports nonzero coefficients at indefinite indices, violations of
    c(n, r) = c(n, -r), and pairs with the same (4nM - r^2, r mod 2M)
    but different coefficients.
    """
    report = CheckReport()
    M = phi.index
    if isinstance(phi.coeffs, dict):
        for (n, r), c in sorted(phi.coeffs.items()):
            if c and (n < 0 or n > phi.n_max or 4 * n * M - r * r < 0):
                report.fail({"kind": "outside-box", "index": [n, r]})
    classes: dict[tuple[int, int], tuple[int, int]] = {}
    for n, r in phi.keys():
        c = phi[n, r]
        report.checked += 1
        if r > 0 and c != phi[n, -r]:
            report.fail({"kind": "symmetry", "index": [n, r], "partner": [n, -r]})
        if M == 0:
            continue
        cls = (4 * n * M - r * r, r % (2 * M))
        first = classes.setdefault(cls, (n, r))
        if first != (n, r) and phi[first] != c:
            report.fail({"kind": "class", "index": [n, r], "partner": list(first)})
    return report


def jacobi_eisenstein_index1(k: int, n_max: int) -> JacobiExpansion:
    """The Jacobi Eisenstein series of weight k and index 1.

    c(n, r) = H(k - 1, 4n - r^2) / H(k - 1, 0), evaluated lazily.
    """
    if k < 4 or k % 2:
        raise ValueError(f"jacobi_eisenstein_index1 needs an even k >= 4, got {k}")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    norm = cohen_h(k - 1, 0)

    def coeff(key):
        n, r = key
        disc = 4 * n - r * r
        return cohen_h(k - 1, disc) / norm if disc >= 0 else 0

    return _lazy(k, 1, n_max, coeff)


def index_raise(phi: JacobiExpansion, l: int) -> JacobiExpansion:
    """Index raising phi -> phi | V_l from index M to index M*l.

    c'(n, r) = sum over d | gcd(n, r, l) of d^(k-1) c(n l / d^2, r / d),
    with gcd(0, 0, l) = l.  The output box is n <= n_max // l.
    """
    if l < 1:
        raise ValueError(f"index_raise needs l >= 1, got {l}")
    k = phi.weight

    def coeff(key):
        n, r = key
        total = Fraction(0)
        for d in divisors(gcd_all(n, r, l)):
            total += d ** (k - 1) * phi[n * l // (d * d), r // d]
        return total

    return _lazy(k, phi.index * l, phi.n_max // l, coeff)


def times_eisenstein(phi: JacobiExpansion, k: int) -> JacobiExpansion:
    """E_k(tau) * phi, lazily: c(n, r) = sum_j a_k(j) c_phi(n - j, r)."""
    if k < 4 or k % 2:
        raise ValueError(f"times_eisenstein needs an even k >= 4, got {k}")
    factor = -Fraction(2 * k) / bernoulli_even(k)
    sigmas = [0]

    def coeff(key):
        n, r = key
        while len(sigmas) <= n:
            sigmas.append(divisor_sigma(k - 1, len(sigmas)))
        total = Fraction(0)
        for j in range(1, n + 1):
            if 4 * (n - j) * phi.index < r * r:
                break
            total += sigmas[j] * phi[n - j, r]
        return phi[n, r] + factor * total

    return _lazy(phi.weight + k, phi.index, phi.n_max, coeff)


def linear_combination(terms) -> JacobiExpansion:
    """sum c_i phi_i over a common weight and index, lazily."""
    terms = [(Fraction(c), phi) for c, phi in terms]
    if not terms:
        raise ValueError("empty combination")
    first = terms[0][1]
    if any((phi.weight, phi.index) != (first.weight, first.index) for _, phi in terms):
        raise ValueError("weight and index must agree")
    def coeff(key):
        return sum((c * phi[key] for c, phi in terms), Fraction(0))

    return _lazy(first.weight, first.index, min(phi.n_max for _, phi in terms), coeff)


def jacobi_cusp_10_1(n_max: int) -> JacobiExpansion:
    """The index 1 cusp form (E_6 e_{4,1} - E_4 e_{6,1}) / 144 of weight 10."""
    a = times_eisenstein(jacobi_eisenstein_index1(4, n_max), 6)
    b = times_eisenstein(jacobi_eisenstein_index1(6, n_max), 4)
    return linear_combination([(Fraction(1, 144), a), (Fraction(-1, 144), b)])
