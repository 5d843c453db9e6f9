import random
from fractions import Fraction
from math import gcd, isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paramaass.core import TruncationError
from paramaass.eisenstein import siegel_eisenstein
from paramaass.jacobi import jacobi_eisenstein_index1
from paramaass.ntheory import divisors
from paramaass.paramod import (
    J4,
    ExpansionBox,
    ParamodularExpansion,
    apply_fricke,
    embed_jacobi,
    fj_slice,
    fricke_index_map,
    fricke_index_map_closed_form,
    fricke_matrix,
    fricke_square,
    is_cusp,
    is_jacobi_member,
    is_paramodular_member,
    is_symplectic,
    phi_operator,
)

LEVELS = [1, 2, 3, 5, 6, 10, 30]


def test_box_indices_order_and_count():
    keys = list(ExpansionBox(1, 1).indices(1))
    assert keys == [(0, 0, 0), (1, 0, 0), (0, 0, 1), (1, -2, 1), (1, -1, 1), (1, 0, 1), (1, 1, 1), (1, 2, 1)]


def test_box_rejects_negative():
    with pytest.raises(ValueError):
        ExpansionBox(-1, 2)


def test_getitem_contract():
    f = ParamodularExpansion(4, 2, ExpansionBox(2, 2), {(1, 1, 1): Fraction(3)})
    assert f[1, 1, 1] == 3
    assert f[1, 5, 1] == 0
    with pytest.raises(TruncationError):
        f[3, 0, 1]


def test_fricke_matrix_identity_and_atkin_lehner():
    assert fricke_matrix(6, 1).integer_matrix() == [[1, 0], [0, 1]]
    assert fricke_matrix(5, 5).integer_matrix() == [[0, 5], [-1, 0]]
    with pytest.raises(ValueError):
        fricke_matrix(6, 4)
    with pytest.raises(ValueError):
        fricke_matrix(12, 2)


@pytest.mark.parametrize("N", LEVELS)
def test_fricke_map_preserves_gcd_and_discriminant(N):
    for d in divisors(N):
        V = fricke_matrix(N, d)
        for n, r, m in ExpansionBox(6, 6).indices(N):
            n2, r2, m2 = fricke_index_map((n, r, m), V)
            assert 4 * n2 * m2 * N - r2 * r2 == 4 * n * m * N - r * r
            assert gcd(gcd(n2, r2), m2) == gcd(gcd(n, r), m)
            assert n2 >= 0 and m2 >= 0


@pytest.mark.parametrize("N", LEVELS)
def test_fricke_closed_form_agrees(N):
    for d in divisors(N):
        V = fricke_matrix(N, d)
        for T in ExpansionBox(4, 4).indices(N):
            assert fricke_index_map_closed_form(T, V) == fricke_index_map(T, V)


def test_fricke_full_level_swaps_n_and_m():
    V = fricke_matrix(7, 7)
    assert fricke_index_map((2, 3, 5), V) == (5, -3, 2)


@pytest.mark.parametrize("N", [2, 6, 30])
def test_fricke_square_is_in_the_group(N):
    for d in divisors(N):
        S = fricke_square(N, d)
        assert is_symplectic(S)
        assert is_paramodular_member(S, N)


def test_symplectic_examples():
    assert is_symplectic(J4)
    assert not is_symplectic([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def _random_symplectic(rng):
    # product of elementary symplectic generators
    M = [[int(i == j) for j in range(4)] for i in range(4)]

    def mul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(4)) for j in range(4)] for i in range(4)]

    for _ in range(6):
        s = rng.randint(-3, 3)
        kind = rng.randrange(3)
        if kind == 0:
            i, j = rng.sample(range(2), 2) if rng.random() < 0.5 else (0, 0)
            E = [[int(a == b) for b in range(4)] for a in range(4)]
            E[i][2 + j] += s
            if i != j:
                E[j][2 + i] += s
        elif kind == 1:
            E = [row[:] for row in J4]
        else:
            E = [[int(a == b) for b in range(4)] for a in range(4)]
            E[0][1] = s
            E[3][2] = -s
        M = mul(M, E)
    return M


def test_membership_fuzz():
    rng = random.Random(5)
    rejected = 0
    for _ in range(300):
        M = _random_symplectic(rng)
        assert is_symplectic(M)
        if any(M[i][1] % 2 for i in (0, 2)) or any(M[3][j] % 2 for j in (0, 1, 2)):
            assert not is_paramodular_member(M, 2)
            rejected += 1
    assert rejected > 50


def test_jacobi_membership_examples():
    heis = [[1, 0, 0, 1], [1, 1, 1, Fraction(1, 3)], [0, 0, 1, -1], [0, 0, 0, 1]]
    assert is_symplectic(heis)
    assert is_jacobi_member(heis, 3)
    assert not is_jacobi_member(heis, 2)
    assert is_paramodular_member(J4, 1) and not is_jacobi_member(J4, 1)
    assert not is_paramodular_member(J4, 5)


def test_embed_and_slice_roundtrip():
    e = jacobi_eisenstein_index1(4, 6).materialize()
    f = embed_jacobi(e, 1)
    assert f.box == ExpansionBox(6, 1)
    assert not fj_slice(f, 1).differences(e)
    assert fj_slice(f, 0).index == 0
    with pytest.raises(ValueError):
        embed_jacobi(e, 2)


def test_fricke_invariance_of_eisenstein():
    f = siegel_eisenstein(4, 6, ExpansionBox(14, 14))
    for d in divisors(6):
        g = apply_fricke(f, d)
        assert g.box.n_max >= 1
        assert not g.differences(f)


def test_fricke_output_box_is_conservative():
    # V_2 at level 6 sends (1, 2, 1) to (7, -34, 7): nothing beyond the origin fits a 5x5 box
    V = fricke_matrix(6, 2)
    assert fricke_index_map((1, 2, 1), V) == (7, -34, 7)
    assert apply_fricke(siegel_eisenstein(4, 6, ExpansionBox(5, 5)), 2).box == ExpansionBox(0, 0)


def test_apply_fricke_detects_asymmetry():
    f = ParamodularExpansion(4, 1, ExpansionBox(2, 2), {(1, 0, 2): Fraction(1)})
    assert apply_fricke(f, 1) is f
    h = apply_fricke(ParamodularExpansion(4, 2, f.box, {(1, 0, 2): Fraction(1)}), 2)
    assert h[2, 0, 1] == 1 and h[1, 0, 2] == 0


def test_phi_operator_and_cusp():
    f = siegel_eisenstein(4, 2, ExpansionBox(4, 2))
    assert phi_operator(f) == [1, 240, 2160, 6720, 17520]
    report = is_cusp(f)
    assert not report.passed
    assert report.witnesses[0]["index"] == [0, 0, 0]
    zero = ParamodularExpansion(4, 2, ExpansionBox(3, 3), {(1, 1, 1): Fraction(1)})
    assert is_cusp(zero, assume_extended_invariance=True).extra["phi_vanishes"]
