"""Hecke operators from explicit right-coset representatives.

Every representative is a scaled block upper triangular symplectic
matrix  s * [[A, B], [0, D]]  stored as (s^2, A, B, D) with rational
blocks.  It sends the term alpha(T) e(tr TZ) of f to

    det(sD)^(-k) alpha(T) e(s^2 tr(T B A^tr)) e(tr(T' Z)),  T' = s^2 A^tr T A.

The engine accumulates these terms exactly.  Phases are summed in the
cyclotomic field of the common denominator; terms landing at
non-integral indices must cancel and every integral total must be
rational.  Both conditions are hard checks.
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, lcm

from .core import CheckReport, fmt_rational
from .cyclotomic import CyclotomicField
from .ntheory import divisors, is_prime, is_squarefree
from .paramod import ExpansionBox, ParamodularExpansion, is_jacobi_member, is_paramodular_member

__all__ = [
    "UpperRep",
    "DoubleCosetOp",
    "EngineStats",
    "EngineError",
    "FractionalResidueError",
    "IrrationalPhaseError",
    "EmptyOutputBoxError",
    "NotEigen",
    "LABELS",
    "REPRESENTATIVE_TABLE",
    "reps_for",
    "combine_ops",
    "expected_count",
    "apply_op",
    "output_box",
    "eigenvalue_of",
    "coset_sanity",
    "HeckeFamily",
    "t_up",
    "t_down",
]

Mat2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def _m2(rows) -> Mat2:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _mul2(X, Y) -> Mat2:
    return tuple(
        tuple(X[i][0] * Y[0][j] + X[i][1] * Y[1][j] for j in range(2)) for i in range(2)
    )


def _t2(X) -> Mat2:
    return ((X[0][0], X[1][0]), (X[0][1], X[1][1]))


def _det2(X) -> Fraction:
    return X[0][0] * X[1][1] - X[0][1] * X[1][0]


def _inv2(X) -> Mat2:
    d = _det2(X)
    return ((X[1][1] / d, -X[0][1] / d), (-X[1][0] / d, X[0][0] / d))


@dataclass(frozen=True)
class UpperRep:
    """s * [[A, B], [0, D]] with s^2 = ``s2``."""

    s2: Fraction
    A: Mat2
    B: Mat2
    D: Mat2

    @classmethod
    def from_rows(cls, s2, rows) -> "UpperRep":
        rows = [[Fraction(x) for x in row] for row in rows]
        if any(rows[i][j] for i in (2, 3) for j in (0, 1)):
            raise ValueError("representative is not block upper triangular")
        A = _m2([r[:2] for r in rows[:2]])
        B = _m2([r[2:] for r in rows[:2]])
        D = _m2([r[2:] for r in rows[2:]])
        return cls(Fraction(s2), A, B, D)

    def rows(self) -> list[list[Fraction]]:
        """The unscaled 4x4 matrix [[A, B], [0, D]]."""
        z = Fraction(0)
        return [
            [*self.A[0], *self.B[0]],
            [*self.A[1], *self.B[1]],
            [z, z, *self.D[0]],
            [z, z, *self.D[1]],
        ]

    def invariant_violations(self) -> list[str]:
        out = []
        if self.s2 <= 0:
            out.append("s2 must be positive")
        AtD = _mul2(_t2(self.A), self.D)
        if AtD != _m2([[1 / self.s2, 0], [0, 1 / self.s2]]):
            out.append("s^2 A^tr D != I")
        DtB = _mul2(_t2(self.D), self.B)
        if DtB[0][1] != DtB[1][0]:
            out.append("D^tr B not symmetric")
        return out

    def weight_factor(self, k: int) -> Fraction:
        """det(sD)^(-k) = (s^2 det D)^(-k), rational for every integer k."""
        return (self.s2 * _det2(self.D)) ** (-k)

    def index_map(self, N: int) -> tuple[tuple[Fraction, ...], ...]:
        """3x3 matrix sending (n, r, m) to the index (n', r', m') of s^2 A^tr T A."""
        (a, b), (c, d) = self.A
        s = self.s2
        return (
            (s * a * a, s * a * c, s * c * c * N),
            (s * 2 * a * b, s * (a * d + b * c), s * 2 * c * d * N),
            (s * b * b / N, s * b * d / N, s * d * d),
        )

    def phase_form(self, N: int) -> tuple[Fraction, Fraction, Fraction]:
        """Coefficients (u, v, w) with phase exponent u n + v r + w m."""
        X = _mul2(self.B, _t2(self.A))
        s = self.s2
        return (s * X[0][0], s * (X[0][1] + X[1][0]) / 2, s * X[1][1] * N)

    def family_key(self):
        return (self.s2, self.A, self.D)

    def to_json(self) -> dict:
        def m(X):
            return [[fmt_rational(x) for x in row] for row in X]

        return {"s2": fmt_rational(self.s2), "A": m(self.A), "B": m(self.B), "D": m(self.D)}


@dataclass(frozen=True)
class DoubleCosetOp:
    label: str
    q: int
    level: int
    reps: tuple[UpperRep, ...]
    parts: tuple[str, ...] = ()

    def __len__(self):
        return len(self.reps)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "q": self.q,
            "level": self.level,
            "count": len(self.reps),
            "reps": [r.to_json() for r in self.reps],
        }


# -- the representative table ------------------------------------------------
#
# Each entry: (label, part, s2(q), rows(q, N, **params), parameter grid, when)
# where the grid maps a name to a modulus ("q" or "q2") and an optional
# exclusion predicate, and ``when`` is "all", "q!|N" or "q|N".


@dataclass(frozen=True)
class _Template:
    label: str
    part: str
    s2: Callable[[int], Fraction]
    rows: Callable[..., list]
    grid: tuple[tuple[str, str], ...] = ()
    keep: Callable[..., bool] | None = None
    when: str = "all"

    def expand(self, q: int, N: int) -> list[UpperRep]:
        names = [name for name, _ in self.grid]
        ranges = [range(q * q if mod == "q2" else q) for _, mod in self.grid]
        out = []
        for values in itertools.product(*ranges):
            params = dict(zip(names, values))
            if self.keep is not None and not self.keep(q=q, **params):
                continue
            out.append(UpperRep.from_rows(self.s2(q), self.rows(q, Fraction(N), **params)))
        return out


def _inv(x):
    return lambda q: Fraction(1, q**x)


REPRESENTATIVE_TABLE: tuple[_Template, ...] = (
    # T_N(q) = Sigma 1/sqrt(q) diag(1,1,q,q) Sigma
    _Template("tnq", "diag(q,q,1,1)", _inv(1),
              lambda q, N: [[q, 0, 0, 0], [0, q, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
    _Template("tnq", "a", _inv(1),
              lambda q, N, a: [[1, 0, a, 0], [0, q, 0, 0], [0, 0, q, 0], [0, 0, 0, 1]],
              (("a", "q"),)),
    _Template("tnq", "a,b,c", _inv(1),
              lambda q, N, a, b, c: [[1, 0, a, b], [0, 1, b, c / N], [0, 0, q, 0], [0, 0, 0, q]],
              (("a", "q"), ("b", "q"), ("c", "q"))),
    _Template("tnq", "c,d", _inv(1),
              lambda q, N, c, d: [[q, 0, 0, 0], [-d, 1, 0, c / N], [0, 0, 1, d], [0, 0, 0, q]],
              (("c", "q"), ("d", "q"))),
    _Template("tnq", "extra b,d", _inv(2),
              lambda q, N, b, d: [[q, 0, 0, b], [-d, q, b, 0], [0, 0, q, d], [0, 0, 0, q]],
              (("b", "q"), ("d", "q")), lambda q, b, d: (b, d) != (0, 0), "q|N"),
    # T*_N(q) = Sigma 1/q diag(1,q,q^2,q) Sigma
    _Template("tstarq", "diag(q,q^2,q,1)", _inv(2),
              lambda q, N: [[q, 0, 0, 0], [0, q * q, 0, 0], [0, 0, q, 0], [0, 0, 0, 1]]),
    _Template("tstarq", "d", _inv(2),
              lambda q, N, d: [[q * q, 0, 0, 0], [-q * d, q, 0, 0], [0, 0, 1, d], [0, 0, 0, q]],
              (("d", "q"),)),
    _Template("tstarq", "a,b", _inv(2),
              lambda q, N, a, b: [[1, 0, a, b], [0, q, q * b, 0], [0, 0, q * q, 0], [0, 0, 0, q]],
              (("a", "q2"), ("b", "q"))),
    _Template("tstarq", "u,b", _inv(2),
              lambda q, N, u, b: [[q, 0, u, u * b], [0, q, u * b, u * b * b], [0, 0, q, 0], [0, 0, 0, q]],
              (("u", "q"), ("b", "q")), lambda q, u, b: u % q != 0),
    _Template("tstarq", "b,c,d", _inv(2),
              lambda q, N, b, c, d: [[q, 0, 0, q * b], [-d, 1, b, c / N], [0, 0, q, q * d], [0, 0, 0, q * q]],
              (("b", "q"), ("c", "q2"), ("d", "q"))),
    _Template("tstarq", "u", _inv(2),
              lambda q, N, u: [[q, 0, 0, 0], [0, q, 0, u / N], [0, 0, q, 0], [0, 0, 0, q]],
              (("u", "q"),), lambda q, u: u % q != 0),
    _Template("tstarq", "extra b,c", _inv(2),
              lambda q, N, b, c: [[q, 0, 0, b], [0, q, b, c / N], [0, 0, q, 0], [0, 0, 0, q]],
              (("b", "q"), ("c", "q")), lambda q, b, c: b % q != 0 and c % q != 0, "q|N"),
    _Template("tstarq", "extra b,c,d", _inv(2),
              lambda q, N, b, c, d: [[q, 0, 0, b], [-d, q, b, c / N], [0, 0, q, d], [0, 0, 0, q]],
              (("b", "q"), ("c", "q"), ("d", "q")), lambda q, b, c, d: (c * d) % q != 0, "q|N"),
    _Template("tstarq", "extra d", _inv(3),
              lambda q, N, d: [[q * q, 0, 0, 0], [-q * d, q * q, 0, 0], [0, 0, q, d], [0, 0, 0, q]],
              (("d", "q"),), lambda q, d: d % q != 0, "q|N"),
    _Template("tstarq", "extra a,b", _inv(3),
              lambda q, N, a, b: [[q, 0, q * a, b], [0, q * q, q * b, 0], [0, 0, q * q, 0], [0, 0, 0, q]],
              (("a", "q"), ("b", "q")), lambda q, a, b: b % q != 0, "q|N"),
    _Template("tstarq", "extra b,c,d (b != 0)", _inv(3),
              lambda q, N, b, c, d: [[q * q, 0, 0, q * b], [-q * d, q, b, b * d + q * c / N],
                                     [0, 0, q, q * d], [0, 0, 0, q * q]],
              (("b", "q"), ("c", "q"), ("d", "q")), lambda q, b, c, d: b % q != 0, "q|N"),
    _Template("tstarq", "extra a,b,c,d", _inv(3),
              lambda q, N, a, b, c, d: [[q, 0, q * a, q * b], [-d, q, -a * d + q * b, b * d + q * c / N],
                                        [0, 0, q * q, q * d], [0, 0, 0, q * q]],
              (("a", "q"), ("b", "q"), ("c", "q"), ("d", "q")), lambda q, a, b, c, d: d % q != 0, "q|N"),
    # Jacobi double cosets
    _Template("jdiag_p2", "diag(q,q^2,q,1)", _inv(2),
              lambda q, N: [[q, 0, 0, 0], [0, q * q, 0, 0], [0, 0, q, 0], [0, 0, 0, 1]]),
    _Template("jtrans", "u", lambda q: Fraction(1),
              lambda q, N, u: [[1, 0, 0, 0], [0, 1, 0, Fraction(u) / (q * N)], [0, 0, 1, 0], [0, 0, 0, 1]],
              (("u", "q"),)),
)

# the Jacobi operator diag(1,q,q^2,q) uses three families of the T*_N(q) list
_JDIAG_PARTS = ("d", "a,b", "u,b")

LABELS = ("tnq", "tstarq", "fjraise", "jdiag", "jdiag_p2", "jtrans", "lemma1_rhs")


def _fjraise_reps(l: int) -> list[UpperRep]:
    # l^(-1/2) [[a,0,b,0],[0,l,0,0],[0,0,d,0],[0,0,0,1]], ad = l, b mod d
    reps = []
    for a in divisors(l):
        d = l // a
        for b in range(d):
            reps.append(UpperRep.from_rows(Fraction(1, l), [[a, 0, b, 0], [0, l, 0, 0], [0, 0, d, 0], [0, 0, 0, 1]]))
    return reps


def _from_table(label: str, q: int, N: int, parts: Iterable[str] | None = None) -> list[UpperRep]:
    reps = []
    divides = N % q == 0
    for t in REPRESENTATIVE_TABLE:
        if t.label != label or (parts is not None and t.part not in parts):
            continue
        if t.when == "q|N" and not divides:
            continue
        reps.extend(t.expand(q, N))
    return reps


def reps_for(label: str, q: int, N: int) -> DoubleCosetOp:
    """Right-coset representatives of the named operator at prime q, level N.

    ``fjraise`` also accepts a squarefree composite q (all l^(-1/2) diag(a, l, d, 1)
    type cosets with ad = l).  ``jdiag`` is only available for q not dividing N.
    """
    if not is_squarefree(N):
        raise ValueError(f"level {N} is not squarefree")
    if label == "fjraise":
        if not is_squarefree(q):
            raise ValueError(f"fjraise needs a squarefree q, got {q}")
        return DoubleCosetOp(label, q, N, tuple(_fjraise_reps(q)), ("a,b",))
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if label in ("tnq", "tstarq", "jdiag_p2", "jtrans"):
        reps = _from_table(label, q, N)
    elif label == "jdiag":
        if N % q == 0:
            raise ValueError("jdiag is only tabulated for q not dividing N")
        reps = _from_table("tstarq", q, N, _JDIAG_PARTS)
    elif label == "lemma1_rhs":
        reps = _from_table("jdiag_p2", q, N) + _from_table("jtrans", q, N)
    else:
        raise ValueError(f"unsupported operator label {label!r}")
    return DoubleCosetOp(label, q, N, tuple(reps))


def combine_ops(label: str, *ops: DoubleCosetOp) -> DoubleCosetOp:
    """Formal sum of operators (concatenated representative lists)."""
    level = {op.level for op in ops}
    if len(level) != 1:
        raise ValueError("operators must share the level")
    reps = tuple(r for op in ops for r in op.reps)
    return DoubleCosetOp(label, ops[0].q, level.pop(), reps)


def expected_count(label: str, q: int, N: int) -> int:
    """Number of representatives read off the parameter ranges."""
    if label == "tnq":
        base = 1 + q + q**2 + q**3
        return base + (q * q - 1 if N % q == 0 else 0)
    if label == "tstarq":
        base = q**4 + q**3 + q**2 + q
        if N % q:
            return base
        extra = (q - 1) ** 2 + q * (q - 1) ** 2 + (q - 1) + q * (q - 1) + q * q * (q - 1) + q**3 * (q - 1)
        return base + extra
    if label == "fjraise":
        return sum(divisors(q))
    if label == "jdiag":
        return q**3 + q**2
    if label == "jdiag_p2":
        return 1
    if label == "jtrans":
        return q
    if label == "lemma1_rhs":
        return 1 + q
    raise ValueError(f"unsupported operator label {label!r}")


# -- the engine ----------------------------------------------------------------


class EngineError(ArithmeticError):
    """The representative list produced an inconsistent expansion."""


class FractionalResidueError(EngineError):
    pass


class IrrationalPhaseError(EngineError):
    pass


class EmptyOutputBoxError(EngineError):
    pass


@dataclass
class EngineStats:
    applications: int = 0
    contributions: int = 0
    fractional_indices: int = 0
    fractional_residue: int = 0
    irrational_totals: int = 0

    def merge(self, other: "EngineStats") -> None:
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + getattr(other, name))


def _hnf_lower(H: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Column-style lower triangular form H U = L with U unimodular."""
    n = len(H)
    H = [row[:] for row in H]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for M in (H, U):
            for row in M:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + d * y

    for i in range(n):
        for j in range(i + 1, n):
            x, y = H[i][i], H[i][j]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            colop(i, j, s, t, -y // g, x // g)
        if H[i][i] < 0:
            for M in (H, U):
                for row in M:
                    row[i] = -row[i]
        if H[i][i] == 0:
            raise EngineError("degenerate index map")
    return H, U


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        qt, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class _Family:
    """Representatives sharing (s2, A, D): same index map and weight factor."""

    def __init__(self, reps: list[UpperRep], N: int, k: int, field_order: int):
        self.reps = reps
        self.rep0 = reps[0]
        self.N = N
        self.weight = reps[0].weight_factor(k)
        self.map = reps[0].index_map(N)
        self.phases = [r.phase_form(N) for r in reps]
        self.modulus = lcm(*(x.denominator for ph in self.phases for x in ph))
        self.field_order = field_order
        # exponents of zeta_order, integral because order is a common denominator
        self.int_phases = [tuple(int(x * field_order) for x in ph) for ph in self.phases]
        self._cache: dict = {}
        self.inverse_A = _inv2(self.rep0.A)

    def phase_sum(self, field: CyclotomicField, n: int, r: int, m: int):
        L = self.modulus
        key = (n % L, r % L, m % L)
        try:
            return self._cache[key]
        except KeyError:
            pass
        acc = field.zero()
        n0, r0, m0 = key
        for u, v, w in self.int_phases:
            vec = field.power(u * n0 + v * r0 + w * m0)
            for i, x in enumerate(vec):
                if x:
                    acc[i] += x
        value = None if not any(acc) else tuple(acc)
        self._cache[key] = value
        return value

    def lattice(self):
        """Lower triangular basis of the image lattice, coordinates (m', n', r')."""
        den = lcm(*(x.denominator for row in self.map for x in row))
        order = (2, 0, 1)  # rows m', n', r'
        H = [[int(self.map[i][j] * den) for j in range(3)] for i in order]
        Hl, U = _hnf_lower(H)
        return den, Hl, U

    def preimage_bound_ok(self, box: ExpansionBox, in_box: ExpansionBox) -> bool:
        # sup over the output region of n and m of the preimage, compared exactly
        P = self.inverse_A
        s2, N = self.rep0.s2, self.N
        for col, limit in ((0, s2 * in_box.n_max), (1, s2 * in_box.m_max * N)):
            x1, x2 = P[0][col], P[1][col]
            a2 = box.n_max * x1 * x1
            b2 = box.m_max * N * x2 * x2
            slack = limit - a2 - b2
            if slack < 0 or 4 * a2 * b2 > slack * slack:
                return False
        return True


def _families(op: DoubleCosetOp, k: int) -> tuple[list[_Family], CyclotomicField]:
    N = op.level
    groups: dict = {}
    for rep in op.reps:
        groups.setdefault(rep.family_key(), []).append(rep)
    dens = [x.denominator for rep in op.reps for x in rep.phase_form(N)]
    order = lcm(*dens) if dens else 1
    field = CyclotomicField(order)
    return [_Family(reps, N, k, order) for reps in groups.values()], field


def output_box(f: ParamodularExpansion, op: DoubleCosetOp) -> ExpansionBox:
    """Largest box whose coefficients are all determined by f's box.

    Grows a square box, then the n and m bounds separately, while every
    family's preimage of the box stays inside f's box.
    """
    families, _ = _families(op, f.weight)
    return _output_box(families, f.box)


def _output_box(families: list[_Family], in_box: ExpansionBox) -> ExpansionBox:
    def ok(box):
        return all(fam.preimage_bound_ok(box, in_box) for fam in families)

    if not ok(ExpansionBox(0, 0)):
        raise EmptyOutputBoxError("no output coefficient is determined by the input box")
    s = 0
    while ok(ExpansionBox(s + 1, s + 1)):
        s += 1
    a = b = s
    while ok(ExpansionBox(a + 1, b)):
        a += 1
    while ok(ExpansionBox(a, b + 1)):
        b += 1
    return ExpansionBox(a, b)


def apply_op(
    f: ParamodularExpansion,
    op: DoubleCosetOp,
    box: ExpansionBox | None = None,
    stats: EngineStats | None = None,
    strict: bool = True,
) -> ParamodularExpansion:
    """f |_k op, summed over the representatives, on a fully determined box."""
    if f.level != op.level:
        raise ValueError(f"operator level {op.level} does not match form level {f.level}")
    k, N = f.weight, f.level
    families, field = _families(op, k)
    best = _output_box(families, f.box)
    if box is None:
        box = best
    elif not all(fam.preimage_bound_ok(box, f.box) for fam in families):
        raise EmptyOutputBoxError(f"box {box} is not determined by the input box {f.box}")
    local = EngineStats(applications=1)
    acc: dict[tuple[Fraction, Fraction, Fraction], list] = {}
    for fam in families:
        den, H, U = fam.lattice()
        _accumulate(f, fam, field, den, H, U, box, acc, local)
    data = {}
    for (n2, r2, m2), vec in acc.items():
        integral = n2.denominator == 1 and r2.denominator == 1 and m2.denominator == 1
        if not integral:
            local.fractional_indices += 1
            if any(vec):
                local.fractional_residue += 1
            continue
        if not CyclotomicField.is_rational(vec):
            local.irrational_totals += 1
            continue
        if vec[0]:
            data[int(n2), int(r2), int(m2)] = vec[0]
    if stats is not None:
        stats.merge(local)
    if strict and local.fractional_residue:
        raise FractionalResidueError(f"{local.fractional_residue} non-integral indices did not cancel")
    if strict and local.irrational_totals:
        raise IrrationalPhaseError(f"{local.irrational_totals} coefficient totals are not rational")
    return ParamodularExpansion(k, N, box, data)


def _accumulate(f, fam: _Family, field, den, H, U, box, acc, stats) -> None:
    N = f.level
    (h00, _, _), (h10, h11, _), (h20, h21, h22) = H
    weight = fam.weight
    Bm, Bn = box.m_max * den, box.n_max * den
    for x1 in range(0, Bm // h00 + 1):
        mm = x1 * h00  # den * m'
        lo = _ceil_div(-x1 * h10, h11)
        hi = (Bn - x1 * h10) // h11
        for x2 in range(lo, hi + 1):
            nn = x1 * h10 + x2 * h11  # den * n'
            R = isqrt(4 * nn * mm * N)
            base = x1 * h20 + x2 * h21
            for x3 in range(_ceil_div(-R - base, h22), (R - base) // h22 + 1):
                n = U[0][0] * x1 + U[0][1] * x2 + U[0][2] * x3
                r = U[1][0] * x1 + U[1][1] * x2 + U[1][2] * x3
                m = U[2][0] * x1 + U[2][1] * x2 + U[2][2] * x3
                phase = fam.phase_sum(field, n, r, m)
                if phase is None:
                    continue
                c = f[n, r, m]
                if not c:
                    continue
                stats.contributions += 1
                rr = base + x3 * h22
                key = (Fraction(nn, den), Fraction(rr, den), Fraction(mm, den))
                slot = acc.get(key)
                if slot is None:
                    slot = acc[key] = [Fraction(0)] * field.degree
                cw = c * weight
                for i, x in enumerate(phase):
                    if x:
                        slot[i] += cw * x


@dataclass
class NotEigen:
    witness: tuple[int, int, int]
    image: Fraction
    expected: Fraction

    def __bool__(self):
        return False


def eigenvalue_of(
    f: ParamodularExpansion, op: DoubleCosetOp, stats: EngineStats | None = None
) -> Fraction | NotEigen:
    """lambda with f | op = lambda f on the whole output box, or a witness."""
    g = apply_op(f, op, stats=stats)
    lam = None
    for key in g.keys():
        c = f[key]
        if c:
            lam = g[key] / c
            break
    if lam is None:
        raise EmptyOutputBoxError("f vanishes on the output box; no eigenvalue can be read off")
    for key in g.keys():
        if g[key] != lam * f[key]:
            return NotEigen(key, g[key], lam * f[key])
    return lam


def _equivalent(r1: UpperRep, r2: UpperRep, N: int) -> tuple[bool, bool]:
    """(Jacobi-equivalent, paramodular-equivalent) for R1 R2^-1."""
    ratio = r1.s2 / r2.s2
    num, den = ratio.numerator, ratio.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return False, False
    t = Fraction(rn, rd)
    A2i, D2i = _inv2(r2.A), _inv2(r2.D)
    A = _mul2(r1.A, A2i)
    # quick reject on the A block before forming the full product
    if any((t * x).denominator != 1 for row in A for x in row):
        return False, False
    Bpart = _mul2(_mul2(r1.A, A2i), _mul2(r2.B, D2i))
    B = tuple(tuple(_mul2(r1.B, D2i)[i][j] - Bpart[i][j] for j in range(2)) for i in range(2))
    D = _mul2(r1.D, D2i)
    z = Fraction(0)
    M = [
        [t * A[0][0], t * A[0][1], t * B[0][0], t * B[0][1]],
        [t * A[1][0], t * A[1][1], t * B[1][0], t * B[1][1]],
        [z, z, t * D[0][0], t * D[0][1]],
        [z, z, t * D[1][0], t * D[1][1]],
    ]
    return is_jacobi_member(M, N), is_paramodular_member(M, N)


def coset_sanity(op: DoubleCosetOp, pairwise: bool = True) -> CheckReport:
    """Representative invariants, pairwise inequivalence and cardinality."""
    report = CheckReport(extra={"label": op.label, "q": op.q, "level": op.level, "count": len(op.reps)})
    for i, rep in enumerate(op.reps):
        report.checked += 1
        for problem in rep.invariant_violations():
            report.fail({"kind": "invariant", "rep": i, "problem": problem})
    paramodular_pairs = 0
    if pairwise:
        for i in range(len(op.reps)):
            for j in range(i + 1, len(op.reps)):
                jac, para = _equivalent(op.reps[i], op.reps[j], op.level)
                report.checked += 1
                if jac:
                    report.fail({"kind": "jacobi-equivalent", "pair": [i, j]})
                if para:
                    paramodular_pairs += 1
        report.extra["paramodular_equivalent_pairs"] = paramodular_pairs
    try:
        expected = expected_count(op.label, op.q, op.level)
    except ValueError:
        expected = None
    if expected is not None:
        report.extra["expected_count"] = expected
        if expected != len(op.reps):
            report.fail({"kind": "count", "count": len(op.reps), "expected": expected})
    return report


# -- T_p up / down ------------------------------------------------------------


@dataclass(frozen=True)
class HeckeFamily:
    """Coefficient family of f | T_p^up or f | T_p^down on the rescaled lattice.

    Indices (n, r, m) with r^2 <= 4 p n m N; the common prefactor
    p^(-1 + k/2) of both families is dropped and recorded in ``prefactor``.
    """

    weight: int
    level: int
    p: int
    box: ExpansionBox
    coeffs: dict
    prefactor: str = field(default="p^(-1+k/2)")

    def keys(self):
        for m in range(self.box.m_max + 1):
            for n in range(self.box.n_max + 1):
                bound = isqrt(4 * self.p * n * m * self.level)
                for r in range(-bound, bound + 1):
                    yield n, r, m

    def __getitem__(self, key):
        return self.coeffs.get(key, Fraction(0))

    def differences(self, other: "HeckeFamily") -> list:
        box = self.box.meet(other.box)
        sub = HeckeFamily(self.weight, self.level, self.p, box, {})
        return [key for key in sub.keys() if self[key] != other[key]]


def _frac_alpha(f, n, r, m) -> Fraction:
    if any(Fraction(x).denominator != 1 for x in (n, r, m)):
        return Fraction(0)
    return f[int(n), int(r), int(m)]


def t_up(f: ParamodularExpansion, p: int) -> HeckeFamily:
    """alpha(pn, r, m) + p^(k-1) alpha(n/p, r/p, m)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    w = p ** (f.weight - 1)
    box = ExpansionBox(f.box.n_max // p, f.box.m_max)
    fam = HeckeFamily(f.weight, f.level, p, box, {})
    for n, r, m in fam.keys():
        c = f[p * n, r, m] + w * _frac_alpha(f, Fraction(n, p), Fraction(r, p), m)
        if c:
            fam.coeffs[n, r, m] = c
    return fam


def t_down(f: ParamodularExpansion, p: int) -> HeckeFamily:
    """alpha(n, r, pm) + p^(k-1) alpha(n, r/p, m/p)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    w = p ** (f.weight - 1)
    box = ExpansionBox(f.box.n_max, f.box.m_max // p)
    fam = HeckeFamily(f.weight, f.level, p, box, {})
    for n, r, m in fam.keys():
        c = f[n, r, p * m] + w * _frac_alpha(f, n, Fraction(r, p), Fraction(m, p))
        if c:
            fam.coeffs[n, r, m] = c
    return fam
