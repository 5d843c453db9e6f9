"""Truncated Fourier expansions of paramodular forms of degree 2.

An index (n, r, m) stands for T = [[n, r/2], [r/2, m N]] at the level N
carried by the expansion.  Coefficients live in a box n <= n_max,
m <= m_max intersected with 4nmN - r^2 >= 0.
"""
from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .core import CheckReport, TruncationError
from .jacobi import JacobiExpansion
from .ntheory import is_squarefree

__all__ = [
    "ExpansionBox",
    "ParamodularExpansion",
    "FrickeMatrix",
    "fj_slice",
    "embed_jacobi",
    "fricke_matrix",
    "fricke_index_map",
    "fricke_index_map_closed_form",
    "fricke_square",
    "apply_fricke",
    "phi_operator",
    "is_cusp",
    "is_symplectic",
    "is_paramodular_member",
    "is_jacobi_member",
    "J4",
]

Index = tuple[int, int, int]


@dataclass(frozen=True)
class ExpansionBox:
    n_max: int
    m_max: int

    def __post_init__(self):
        if self.n_max < 0 or self.m_max < 0:
            raise ValueError("box bounds must be nonnegative")

    def contains(self, n: int, m: int) -> bool:
        return 0 <= n <= self.n_max and 0 <= m <= self.m_max

    def meet(self, other: "ExpansionBox") -> "ExpansionBox":
        return ExpansionBox(min(self.n_max, other.n_max), min(self.m_max, other.m_max))

    def indices(self, level: int) -> Iterator[Index]:
        """Semidefinite indices of the box ordered by (m, n, r)."""
        for m in range(self.m_max + 1):
            for n in range(self.n_max + 1):
                bound = isqrt(4 * n * m * level)
                for r in range(-bound, bound + 1):
                    yield n, r, m


@dataclass(frozen=True, eq=False)
class ParamodularExpansion:
    weight: int
    level: int
    box: ExpansionBox
    coeffs: Mapping

    def keys(self) -> Iterator[Index]:
        return self.box.indices(self.level)

    def __getitem__(self, key: Index) -> Fraction:
        n, r, m = key
        if n < 0 or m < 0 or 4 * n * m * self.level - r * r < 0:
            return Fraction(0)
        if not self.box.contains(n, m):
            raise TruncationError(f"index {key} lies outside the box {self.box}")
        return Fraction(self.coeffs.get(key, 0))

    def in_box(self, n: int, r: int, m: int) -> bool:
        return self.box.contains(n, m)

    def items(self) -> Iterator[tuple[Index, Fraction]]:
        for key in self.keys():
            yield key, self[key]

    def nonzero_items(self) -> list[tuple[Index, Fraction]]:
        return [(key, c) for key, c in self.items() if c]

    def materialize(self) -> "ParamodularExpansion":
        return ParamodularExpansion(self.weight, self.level, self.box, dict(self.nonzero_items()))

    def restrict(self, box: ExpansionBox) -> "ParamodularExpansion":
        return ParamodularExpansion(self.weight, self.level, self.box.meet(box), self.coeffs)

    def scale(self, factor) -> "ParamodularExpansion":
        factor = Fraction(factor)
        data = {key: factor * c for key, c in self.nonzero_items()}
        return ParamodularExpansion(self.weight, self.level, self.box, data)

    def with_coefficient(self, key: Index, value) -> "ParamodularExpansion":
        """Copy with one coefficient replaced (and its r -> -r partner untouched)."""
        data = dict(self.nonzero_items())
        data[key] = Fraction(value)
        return ParamodularExpansion(self.weight, self.level, self.box, data)

    def _combine(self, other: "ParamodularExpansion", sign: int) -> "ParamodularExpansion":
        if (self.weight, self.level) != (other.weight, other.level):
            raise ValueError("weight and level must agree")
        box = self.box.meet(other.box)
        data = {}
        for key in box.indices(self.level):
            c = self[key] + sign * other[key]
            if c:
                data[key] = c
        return ParamodularExpansion(self.weight, self.level, box, data)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def differences(self, other: "ParamodularExpansion") -> list[Index]:
        box = self.box.meet(other.box)
        return [key for key in box.indices(self.level) if self[key] != other[key]]

    def agrees_with(self, other: "ParamodularExpansion") -> bool:
        return self.level == other.level and not self.differences(other)

    def is_zero(self) -> bool:
        return not any(c for _, c in self.items())


def fj_slice(f: ParamodularExpansion, m: int) -> JacobiExpansion:
    """The m-th Fourier-Jacobi coefficient as a Jacobi expansion of index mN."""
    if not 0 <= m <= f.box.m_max:
        raise ValueError(f"slice m = {m} outside the box m_max = {f.box.m_max}")
    index = m * f.level
    data = {}
    for n in range(f.box.n_max + 1):
        bound = isqrt(4 * n * index)
        for r in range(-bound, bound + 1):
            c = f[n, r, m]
            if c:
                data[n, r] = c
    return JacobiExpansion(f.weight, index, f.box.n_max, data)


def embed_jacobi(phi: JacobiExpansion, level: int, n_max: int | None = None) -> ParamodularExpansion:
    """phi(tau, z) e(N tau') as a paramodular expansion supported on m = 1.

    ``phi`` must have index N = ``level``.  A larger ``n_max`` than the one
    stored in ``phi`` is allowed when phi determines those coefficients.
    """
    if phi.index != level:
        raise ValueError(f"index {phi.index} does not match level {level}")
    n_max = phi.n_max if n_max is None else n_max
    data = {}
    for n in range(n_max + 1):
        bound = isqrt(4 * n * level)
        for r in range(-bound, bound + 1):
            c = phi[n, r]
            if c:
                data[n, r, 1] = c
    return ParamodularExpansion(phi.weight, level, ExpansionBox(n_max, 1), data)


@dataclass(frozen=True)
class FrickeMatrix:
    """V_d = d^(-1/2) [[alpha d, beta N], [gamma, delta d]] with determinant 1."""

    level: int
    d: int
    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        N, d = self.level, self.d
        if N % d:
            raise ValueError(f"{d} does not divide {N}")
        if self.alpha * self.delta * d - self.beta * self.gamma * (N // d) != 1:
            raise ValueError("alpha delta d - beta gamma N/d must equal 1")

    def integer_matrix(self) -> list[list[int]]:
        """sqrt(d) * V_d."""
        N, d = self.level, self.d
        return [[self.alpha * d, self.beta * N], [self.gamma, self.delta * d]]


def fricke_matrix(N: int, d: int) -> FrickeMatrix:
    """Canonical V_d for d | N (N squarefree).

    d = 1 gives the identity; otherwise alpha is the inverse of d mod N/d
    of least absolute value (keeps T[V_d^-1] small), gamma = -1 and
    delta = 1.  For d = N this is N^(-1/2) [[0, N], [-1, 0]].
    """
    if not is_squarefree(N):
        raise ValueError(f"level {N} is not squarefree")
    if d < 1 or N % d:
        raise ValueError(f"{d} does not divide {N}")
    if d == 1:
        return FrickeMatrix(N, 1, 1, 0, 0, 1)
    e = N // d
    if e == 1:
        return FrickeMatrix(N, d, 0, 1, -1, 0)
    alpha = pow(d, -1, e)
    if 2 * alpha > e:
        alpha -= e
    beta = (1 - alpha * d) // e
    return FrickeMatrix(N, d, alpha, beta, -1, 1)


def fricke_index_map(T: Index, V: FrickeMatrix) -> Index:
    """The index of T[V_d^(-1)], evaluated from the matrices themselves."""
    n, r, m = T
    N, d = V.level, V.d
    (a, b), (c, e) = V.integer_matrix()
    # sqrt(d) V^-1 = [[e, -b], [-c, a]]
    P = [[Fraction(e), Fraction(-b)], [Fraction(-c), Fraction(a)]]
    Tm = [[Fraction(n), Fraction(r, 2)], [Fraction(r, 2), Fraction(m * N)]]
    TP = [[sum(Tm[i][k] * P[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    out = [[sum(P[k][i] * TP[k][j] for k in range(2)) / d for j in range(2)] for i in range(2)]
    n2, r2, m2 = out[0][0], 2 * out[0][1], out[1][1] / N
    if any(x.denominator != 1 for x in (n2, r2, m2)):
        raise AssertionError(f"non-integral image {out} of {T} under V_{d}")
    return int(n2), int(r2), int(m2)


def fricke_index_map_closed_form(T: Index, V: FrickeMatrix) -> Index:
    """The same map written out as an integer 3x3 matrix.

    With beta = delta = 1 (so alpha d - gamma N/d = 1) the matrix reduces to
    [[d, -gamma, gamma^2 N/d], [-2N, alpha d + gamma N/d, -2 alpha gamma N],
    [N/d, -alpha, alpha^2 d]].
    """
    n, r, m = T
    N, d = V.level, V.d
    al, be, ga, de = V.alpha, V.beta, V.gamma, V.delta
    e = N // d
    return (
        de * de * d * n - de * ga * r + ga * ga * e * m,
        -2 * de * be * N * n + (al * de * d + be * ga * e) * r - 2 * al * ga * N * m,
        be * be * e * n - al * be * r + al * al * d * m,
    )


def fricke_square(N: int, d: int) -> list[list[Fraction]]:
    """F_d^2 = diag(V_d^-2, (V_d^tr)^2) as an exact rational 4x4 matrix."""
    V = fricke_matrix(N, d)
    (a, b), (c, e) = V.integer_matrix()
    W = [[Fraction(a, 1), Fraction(b)], [Fraction(c), Fraction(e)]]
    Winv = [[Fraction(e), Fraction(-b)], [Fraction(-c), Fraction(a)]]  # det(W) = d
    sq = _mat_mul(W, W)
    inv_sq = _mat_mul(Winv, Winv)
    upper = [[x / d for x in row] for row in inv_sq]
    lower_t = [[sq[j][i] / d for j in range(2)] for i in range(2)]
    out = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            out[i][j] = upper[i][j]
            out[i + 2][j + 2] = lower_t[i][j]
    return out


def _max_square_box(f: ParamodularExpansion, image) -> ExpansionBox:
    s = min(f.box.n_max, f.box.m_max)
    candidates = [f.box] + [ExpansionBox(t, t) for t in range(s, -1, -1)]
    for box in candidates:
        if all(f.box.contains(*_nm(image(key))) for key in box.indices(f.level)):
            return box
    raise AssertionError("the zero box always works")


def _nm(key: Index) -> tuple[int, int]:
    return key[0], key[2]


def apply_fricke(f: ParamodularExpansion, d: int) -> ParamodularExpansion:
    """f | F_d^(-1): the coefficient at T becomes that of f at T[V_d^(-1)].

    The output box is the largest box (tried: f's own box, then squares)
    whose images all lie in f's box.
    """
    V = fricke_matrix(f.level, d)
    if d == 1:
        return f
    box = _max_square_box(f, lambda key: fricke_index_map(key, V))
    data = {}
    for key in box.indices(f.level):
        c = f[fricke_index_map(key, V)]
        if c:
            data[key] = c
    return ParamodularExpansion(f.weight, f.level, box, data)


def phi_operator(f: ParamodularExpansion) -> list[Fraction]:
    """Siegel phi-operator: the elliptic expansion n -> alpha(n, 0, 0)."""
    return [f[n, 0, 0] for n in range(f.box.n_max + 1)]


def is_cusp(f: ParamodularExpansion, assume_extended_invariance: bool = False) -> CheckReport:
    """Cusp test on the box; ``passed`` means every singular coefficient vanishes.

    With ``assume_extended_invariance`` the caller asserts f is invariant
    under all Fricke involutions, in which case alpha(n, 0, 0) = 0 already
    decides the question; the verdict of that shortcut is reported in
    ``extra['phi_vanishes']`` while all singular indices are still scanned.
    """
    report = CheckReport()
    for n, r, m in f.keys():
        if 4 * n * m * f.level != r * r:
            continue
        report.checked += 1
        c = f[n, r, m]
        if c:
            report.fail({"index": [n, r, m], "c": f"{c.numerator}/{c.denominator}"})
    if assume_extended_invariance:
        report.extra["phi_vanishes"] = not any(phi_operator(f))
    return report


# -- group membership --------------------------------------------------------

J4 = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]


def _mat_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _transpose(A):
    return [list(row) for row in zip(*A)]


def is_symplectic(M: Sequence[Sequence]) -> bool:
    M = [[Fraction(x) for x in row] for row in M]
    if len(M) != 4 or any(len(row) != 4 for row in M):
        return False
    return _mat_mul(_mat_mul(_transpose(M), J4), M) == [[Fraction(x) for x in row] for row in J4]


# entry (i, j) must be an integer multiple of this factor
_SIGMA_PATTERN = [
    ["1", "N", "1", "1"],
    ["1", "1", "1", "1/N"],
    ["1", "N", "1", "1"],
    ["N", "N", "N", "1"],
]


def _pattern_ok(M, N: int) -> bool:
    for i in range(4):
        for j in range(4):
            x = Fraction(M[i][j])
            kind = _SIGMA_PATTERN[i][j]
            scaled = x / N if kind == "N" else (x * N if kind == "1/N" else x)
            if scaled.denominator != 1:
                return False
    return True


def is_paramodular_member(M: Sequence[Sequence], N: int) -> bool:
    """True iff M lies in the paramodular group of level N."""
    return is_symplectic(M) and _pattern_ok(M, N)


def is_jacobi_member(M: Sequence[Sequence], N: int) -> bool:
    """True iff M lies in the Jacobi subgroup of the paramodular group of level N."""
    if not is_paramodular_member(M, N):
        return False
    M = [[Fraction(x) for x in row] for row in M]
    if M[0][1] or M[2][1] or M[3][0] or M[3][1] or M[3][2]:
        return False
    return abs(M[1][1]) == 1 and abs(M[3][3]) == 1

