"""Exact number-theoretic kernel.

Bernoulli numbers, divisor sums, Kronecker symbols, generalized Bernoulli
numbers and Cohen's function H(r, D).  Every value is an exact
``Fraction`` or ``int``; nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, isqrt

from sympy import factorint

__all__ = [
    "bernoulli_even",
    "divisor_sigma",
    "divisors",
    "kronecker_symbol",
    "fundamental_discriminant",
    "is_fundamental_discriminant",
    "is_squarefree",
    "is_prime",
    "primes_up_to",
    "mobius",
    "generalized_bernoulli",
    "cohen_h",
    "elliptic_eisenstein",
]


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # B_0..B_n with B_1 = -1/2, from sum_{j<m+1} C(m+1, j) B_j = 0
    table = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * table[j] for j in range(m))
        table.append(-s / (m + 1))
    return tuple(table)


def _bernoulli(n: int) -> Fraction:
    return _bernoulli_table(n)[n]


def bernoulli_even(k: int) -> Fraction:
    """Return the Bernoulli number B_k for even k >= 2 (B_2 = 1/6, B_4 = -1/30)."""
    if k < 2 or k % 2:
        raise ValueError(f"bernoulli_even needs an even k >= 2, got {k}")
    return _bernoulli(k)


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    if n < 1:
        raise ValueError(f"divisors needs n >= 1, got {n}")
    divs = [1]
    for p, e in _factor(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def divisor_sigma(e: int, n: int) -> int:
    """sigma_e(n) = sum of d**e over the positive divisors d of n."""
    if n < 1:
        raise ValueError(f"divisor_sigma needs n >= 1, got {n}")
    if e < 0:
        raise ValueError(f"divisor_sigma needs e >= 0, got {e}")
    total = 1
    for p, a in _factor(n):
        total *= sum(p ** (e * i) for i in range(a + 1))
    return total


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(a == 1 for _, a in _factor(n))


def is_prime(n: int) -> bool:
    return n >= 2 and _factor(n) == ((n, 1),)


def primes_up_to(bound: int) -> list[int]:
    return [p for p in range(2, bound + 1) if is_prime(p)]


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError(f"mobius needs n >= 1, got {n}")
    f = _factor(n)
    if any(a > 1 for _, a in f):
        return 0
    return -1 if len(f) % 2 else 1


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_symbol(a: int, b: int) -> int:
    """The Kronecker symbol (a|b), extended to every integer b.

    (a|0) is 1 for a = +-1 and 0 otherwise; (a|-1) is the sign of a;
    (a|2) is 0 for even a and +-1 according to a mod 8.
    """
    if b == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if b < 0:
        b = -b
        if a < 0:
            result = -result
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    return result * _jacobi(a, b)


def is_fundamental_discriminant(d: int) -> bool:
    """True for 1 and for the discriminants of quadratic fields."""
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return is_squarefree(abs(d))
    if d % 4 == 0:
        q = d // 4
        return q % 4 in (2, 3) and is_squarefree(abs(q))
    return False


def fundamental_discriminant(disc: int) -> tuple[int, int]:
    """Split disc = d0 * f**2 with d0 fundamental (or 1) and f > 0."""
    if disc == 0 or disc % 4 in (2, 3):
        raise ValueError(f"{disc} is not a nonzero discriminant (must be 0 or 1 mod 4)")
    sign = 1 if disc > 0 else -1
    core, square = sign, 1
    for p, a in _factor(abs(disc)):
        core *= p ** (a % 2)
        square *= p ** (a // 2)
    if core % 4 != 1:
        # core is 2 or 3 mod 4: absorb a factor 4 from the square part
        core *= 4
        square //= 2
    return core, square


@lru_cache(maxsize=None)
def generalized_bernoulli(r: int, d0: int) -> Fraction:
    """B_{r, chi} for the quadratic character chi = (d0|.) of conductor |d0|.

    Uses B_{r,chi} = f^(r-1) sum_{a=1}^{f} chi(a) B_r(a/f), rewritten as
    sum_j C(r,j) B_j f^(j-1) S_{r-j} with integer character power sums
    S_e = sum_a chi(a) a^e.
    """
    if r < 1:
        raise ValueError(f"generalized_bernoulli needs r >= 1, got {r}")
    if not is_fundamental_discriminant(d0):
        raise ValueError(f"{d0} is not a fundamental discriminant")
    if d0 == 1:
        if r == 1:
            raise ValueError("B_1 of the trivial character is convention dependent; refusing")
        return _bernoulli(r)
    f = abs(d0)
    sums = [0] * (r + 1)
    for a, chi in enumerate(_character_values(d0), start=1):
        if chi:
            power = chi
            for e in range(r + 1):
                sums[e] += power
                power *= a
    total = Fraction(0)
    for j in range(r + 1):
        total += comb(r, j) * _bernoulli(j) * Fraction(f) ** (j - 1) * sums[r - j]
    return total


def _character_values(d0: int) -> list[int]:
    # chi(a) for a = 1..|d0|, filled multiplicatively from prime values
    f = abs(d0)
    values = [0] * (f + 1)
    values[1] = 1
    spf = _smallest_prime_factors(f)
    for a in range(2, f + 1):
        p = spf[a]
        if p == a:
            values[a] = kronecker_symbol(d0, p)
        else:
            values[a] = values[p] * values[a // p]
    return values[1:]


_SPF: list[int] = [0, 1]


def _smallest_prime_factors(n: int) -> list[int]:
    global _SPF
    if len(_SPF) <= n:
        size = max(n + 1, 2 * len(_SPF))
        spf = list(range(size))
        for p in range(2, isqrt(size - 1) + 1):
            if spf[p] == p:
                for q in range(p * p, size, p):
                    if spf[q] == q:
                        spf[q] = p
        _SPF = spf
    return _SPF


@lru_cache(maxsize=None)
def cohen_h(r: int, disc: int) -> Fraction:
    """Cohen's function H(r, D) for r >= 1 and D >= 0.

    H(r, 0) = zeta(1 - 2r); H(r, D) = 0 unless (-1)^r D is 0 or 1 mod 4;
    otherwise, writing (-1)^r D = d0 f^2 with d0 fundamental,
    H(r, D) = L(1 - r, chi_d0) * sum_{d | f} mu(d) chi_d0(d) d^(r-1) sigma_{2r-1}(f/d).
    """
    if r < 1:
        raise ValueError(f"cohen_h needs r >= 1, got {r}")
    if disc < 0:
        raise ValueError(f"cohen_h needs D >= 0, got {disc}")
    if disc == 0:
        return -_bernoulli(2 * r) / (2 * r)
    signed = disc if r % 2 == 0 else -disc
    if signed % 4 in (2, 3):
        return Fraction(0)
    d0, f = fundamental_discriminant(signed)
    l_value = -generalized_bernoulli(r, d0) / r
    correction = 0
    for d in divisors(f):
        mu = mobius(d)
        if mu:
            correction += mu * kronecker_symbol(d0, d) * d ** (r - 1) * divisor_sigma(2 * r - 1, f // d)
    return l_value * correction


def elliptic_eisenstein(k: int, n_max: int) -> list[Fraction]:
    """Coefficients a(0..n_max) of E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    if k < 4 or k % 2:
        raise ValueError(f"elliptic_eisenstein needs an even k >= 4, got {k}")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    factor = -Fraction(2 * k) / bernoulli_even(k)
    return [Fraction(1)] + [factor * divisor_sigma(k - 1, n) for n in range(1, n_max + 1)]


def gcd_all(*values: int) -> int:
    """gcd ignoring zero entries (gcd(n, 0, 0) = n); 0 only if all are 0."""
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
