"""The Gritsenko lift and coefficient-level Maass checks."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .core import CheckReport, LazyCoefficients, TruncationError, fmt_rational
from .jacobi import JacobiExpansion
from .ntheory import bernoulli_even, divisor_sigma, divisors, gcd_all, is_prime
from .paramod import ExpansionBox, ParamodularExpansion, apply_fricke

__all__ = [
    "gritsenko_lift",
    "maass_check",
    "lemma1_check",
    "finite_prime_criterion",
    "DiscriminantProfile",
    "corollary2_profile",
    "theorem2_eigen_check",
    "symmetrize_fricke",
]


def gritsenko_lift(phi: JacobiExpansion, box: ExpansionBox) -> ParamodularExpansion:
    """Lift a Jacobi expansion of index N to a paramodular expansion of level N.

    alpha(n, r, m) = sum over d | gcd(n, r, m) of d^(k-1) c(nm/d^2, r/d) for
    (n, r, m) != 0 and alpha(0, 0, 0) = -(B_k / 2k) c(0, 0).  Coefficients
    are evaluated lazily.  phi must determine every c needed by the box:
    either n_max(phi) >= n_max * m_max, or every discriminant up to
    4 n_max m_max N is readable through the (D, r mod 2N) classes.
    """
    k, N = phi.weight, phi.index
    if k < 4 or k % 2:
        raise ValueError(f"the lift needs an even weight k >= 4, got {k}")
    if N < 1:
        raise ValueError("the lift needs a Jacobi expansion of positive index")
    need_n = box.n_max * box.m_max
    need_disc = 4 * need_n * N
    if phi.n_max < need_n and phi.max_determined_discriminant() < need_disc:
        raise ValueError(
            f"Jacobi expansion too short for box {box}: needs n_max >= {need_n} "
            f"(has {phi.n_max}, deficit {need_n - phi.n_max}) or every discriminant "
            f"<= {need_disc} (has {phi.max_determined_discriminant()})"
        )
    constant = -bernoulli_even(k) / (2 * k)

    def coeff(key):
        n, r, m = key
        if n == r == m == 0:
            return constant * phi[0, 0]
        total = Fraction(0)
        for d in divisors(gcd_all(n, r, m)):
            total += d ** (k - 1) * phi[n * m // (d * d), r // d]
        return total

    return ParamodularExpansion(k, N, box, LazyCoefficients(coeff, lambda: box.indices(N)))


def _alpha(f: ParamodularExpansion, n, r, m) -> Fraction:
    # zero for non-integral arguments
    if any(Fraction(x).denominator != 1 for x in (n, r, m)):
        return Fraction(0)
    return f[int(n), int(r), int(m)]


def maass_check(f: ParamodularExpansion) -> CheckReport:
    """Verify the Maass relations for every nonzero index of the box.

    The relations are tautological at m = 1, so the symmetry
    alpha(n, r, m) = alpha(n, -r, m) shared by all paramodular forms is
    checked alongside.  Indices whose right-hand side needs coefficients
    outside the box are skipped and counted, never guessed.
    """
    report = CheckReport()
    k = f.weight
    for n, r, m in f.keys():
        if n == r == m == 0:
            continue
        if r > 0:
            report.checked += 1
            if f[n, r, m] != f[n, -r, m]:
                report.fail({"index": [n, r, m], "kind": "symmetry",
                             "lhs": fmt_rational(f[n, r, m]), "rhs": fmt_rational(f[n, -r, m])})
        g = gcd_all(n, r, m)
        if f.box.m_max < 1 or n * m > f.box.n_max:
            report.skipped += 1
            continue
        rhs = sum(
            (d ** (k - 1) * f[n * m // (d * d), r // d, 1] for d in divisors(g)),
            Fraction(0),
        )
        report.checked += 1
        if rhs != f[n, r, m]:
            report.fail({"index": [n, r, m], "lhs": fmt_rational(f[n, r, m]), "rhs": fmt_rational(rhs)})
    return report


def _mode_ii(f: ParamodularExpansion, p: int, report: CheckReport) -> None:
    k, N = f.weight, f.level
    w = p ** (k - 1)
    a_max, m_top = f.box.n_max, f.box.m_max
    for m in range(m_top + 1):
        for n in range(a_max + 1):
            bound = isqrt(4 * p * n * m * N)
            for r in range(-bound, bound + 1):
                if p * n > a_max or p * m > m_top:
                    report.skipped += 1
                    continue
                left = f[n, r, p * m] + w * _alpha(f, n, Fraction(r, p), Fraction(m, p))
                right = f[p * n, r, m] + w * _alpha(f, Fraction(n, p), Fraction(r, p), m)
                report.checked += 1
                if left != right:
                    report.fail({"index": [n, r, m], "lhs": fmt_rational(left), "rhs": fmt_rational(right)})


def _split(x: int, p: int) -> tuple[int, int]:
    e = 0
    while x and x % p == 0:
        x //= p
        e += 1
    return e, x


def _mode_iii(f: ParamodularExpansion, p: int, report: CheckReport) -> None:
    k = f.weight
    w = p ** (k - 1)
    for n, r, m in f.keys():
        if n == r == m == 0:
            continue
        lhs = f[n, r, m]
        try:
            if m == 0:
                nu, n0 = _split(n, p)
                rhs = divisor_sigma(k - 1, p**nu) * f[n0, 0, 0]
            elif n == 0:
                mu, m0 = _split(m, p)
                rhs = divisor_sigma(k - 1, p**mu) * f[0, 0, m0]
            elif r == 0:
                nu, n0 = _split(n, p)
                mu, m0 = _split(m, p)
                rhs = sum(
                    (w**d * f[p ** (nu + mu - 2 * d) * n0, 0, m0] for d in range(min(nu, mu) + 1)),
                    Fraction(0),
                )
            else:
                nu, n0 = _split(n, p)
                rho, r0 = _split(r, p)
                mu, m0 = _split(m, p)
                rhs = sum(
                    (
                        w**d * f[p ** (nu + mu - 2 * d) * n0, p ** (rho - d) * r0, m0]
                        for d in range(min(nu, rho, mu) + 1)
                    ),
                    Fraction(0),
                )
        except TruncationError:
            report.skipped += 1
            continue
        report.checked += 1
        if lhs != rhs:
            report.fail({"index": [n, r, m], "lhs": fmt_rational(lhs), "rhs": fmt_rational(rhs)})


def lemma1_check(f: ParamodularExpansion, p: int, mode: str = "ii") -> CheckReport:
    """Check the p-local characterisation of the Maass space on the box.

    mode "ii": alpha(n, r, pm) + p^(k-1) alpha(n, r/p, m/p)
               = alpha(pn, r, m) + p^(k-1) alpha(n/p, r/p, m) for all n, r, m,
               non-integral arguments giving 0.
    mode "iii": the closed p-power recursions, each under its own
               coprimality hypothesis (generic, r = 0, m = 0, n = 0).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    report = CheckReport(extra={"p": p, "mode": mode})
    if mode in ("ii", "condition-ii"):
        _mode_ii(f, p, report)
    elif mode in ("iii", "condition-iii"):
        _mode_iii(f, p, report)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return report


def finite_prime_criterion(f: ParamodularExpansion, primes, exceptional=()) -> CheckReport:
    """Maass consistency on the box from the primes outside an exceptional set.

    For true modular forms, agreement for all but finitely many primes is
    already equivalent to lying in the Maass space; on a truncated box this
    is a consistency check only.
    """
    primes = sorted(set(primes))
    exceptional = set(exceptional)
    if not exceptional <= set(primes):
        raise ValueError("the exceptional set must be a subset of the primes")
    report = CheckReport(extra={"primes": primes, "exceptional": sorted(exceptional)})
    for p in primes:
        if p in exceptional:
            continue
        sub = lemma1_check(f, p, "ii")
        report.checked += sub.checked
        report.skipped += sub.skipped
        for w in sub.witnesses:
            report.fail({"p": p, **w})
    return report


@dataclass
class DiscriminantProfile:
    """Result of solving alpha(T) = sum d^(k-1) a*(4N det T / d^2) on the box."""

    profile: dict[int, Fraction] | None
    witness: dict | None
    checked: int

    @property
    def consistent(self) -> bool:
        return self.witness is None

    def to_report(self) -> CheckReport:
        report = CheckReport(checked=self.checked)
        if self.witness is not None:
            report.fail(self.witness)
        else:
            report.extra["profile"] = {str(D): fmt_rational(v) for D, v in sorted(self.profile.items())}
        return report


def corollary2_profile(f: ParamodularExpansion) -> DiscriminantProfile:
    """Recover a* from the coefficients by Moebius-type inversion.

    Indices are processed by increasing discriminant; each nonzero index
    yields a candidate a*(D), and two indices with the same D but
    different candidates form the failure witness.
    """
    k, N = f.weight, f.level
    profile: dict[int, Fraction] = {}
    source: dict[int, tuple] = {}
    checked = 0
    keys = sorted(
        (key for key in f.keys() if key != (0, 0, 0)),
        key=lambda t: (4 * t[0] * t[2] * N - t[1] ** 2, t[2], t[0], t[1]),
    )
    for n, r, m in keys:
        D = 4 * n * m * N - r * r
        g = gcd_all(n, r, m)
        value = f[n, r, m]
        if D == 0:
            candidate = value / divisor_sigma(k - 1, g)
        else:
            rest = sum(
                (d ** (k - 1) * profile[D // (d * d)] for d in divisors(g) if d > 1),
                Fraction(0),
            )
            candidate = value - rest
        checked += 1
        if D in profile:
            if profile[D] != candidate:
                witness = {
                    "discriminant": D,
                    "first": list(source[D]),
                    "second": [n, r, m],
                    "first_value": fmt_rational(profile[D]),
                    "second_value": fmt_rational(candidate),
                }
                return DiscriminantProfile(None, witness, checked)
        else:
            profile[D] = candidate
            source[D] = (n, r, m)
    return DiscriminantProfile(profile, None, checked)


def theorem2_eigen_check(f: ParamodularExpansion, d: int, require_maass: bool = True) -> int | None:
    """Sign eps with alpha(n, r, 1) = eps alpha(n', r', 1) on the box, or None.

    Compares all pairs of the m = 1 slice with equal discriminant,
    r = -r' mod 2d and r = r' mod 2N/d.  All-zero comparisons give None.
    """
    N = f.level
    if N % d:
        raise ValueError(f"{d} does not divide the level {N}")
    if require_maass and not maass_check(f).passed:
        raise ValueError("theorem2_eigen_check needs a form passing maass_check")
    if f.box.m_max < 1:
        return None
    by_disc: dict[int, list[tuple[int, Fraction]]] = {}
    for n, r, m in f.keys():
        if m == 1:
            by_disc.setdefault(4 * n * N - r * r, []).append((r, f[n, r, 1]))
    plus_ok = minus_ok = True
    nonzero = False
    e = N // d
    for entries in by_disc.values():
        for r, a in entries:
            for r2, b in entries:
                if (r + r2) % (2 * d) or (r - r2) % (2 * e):
                    continue
                if a or b:
                    nonzero = True
                plus_ok &= a == b
                minus_ok &= a == -b
    if not nonzero:
        return None
    if plus_ok:
        return 1
    if minus_ok:
        return -1
    return None


def symmetrize_fricke(f: ParamodularExpansion) -> ParamodularExpansion:
    """sum over d | N of f | W_d, on the common box."""
    total = None
    for d in divisors(f.level):
        g = apply_fricke(f, d)
        total = g if total is None else total + g
    return total
