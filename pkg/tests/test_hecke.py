import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paramaass.eisenstein import siegel_eisenstein
from paramaass.hecke import (
    DoubleCosetOp,
    EmptyOutputBoxError,
    EngineStats,
    FractionalResidueError,
    NotEigen,
    REPRESENTATIVE_TABLE,
    UpperRep,
    apply_op,
    combine_ops,
    coset_sanity,
    eigenvalue_of,
    expected_count,
    output_box,
    reps_for,
    t_down,
    t_up,
)
from paramaass.maass import maass_check
from paramaass.paramod import ExpansionBox, ParamodularExpansion, apply_fricke

from conftest import cusp_lift, formal_lift

IDENTITY = UpperRep.from_rows(1, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_tnq_count(q):
    assert len(reps_for("tnq", q, 1)) == 1 + q + q**2 + q**3


@pytest.mark.parametrize("q", [2, 3, 5])
def test_tstar_count(q):
    assert len(reps_for("tstarq", q, 1)) == q**4 + q**3 + q**2 + q


@pytest.mark.parametrize("label,q,N", [
    ("tnq", 2, 1), ("tnq", 3, 2), ("tnq", 2, 6), ("tnq", 3, 3), ("tnq", 5, 5),
    ("tstarq", 2, 1), ("tstarq", 3, 1), ("tstarq", 2, 2), ("tstarq", 3, 6),
    ("jdiag", 2, 3), ("jdiag", 3, 1), ("fjraise", 6, 1), ("fjraise", 5, 2),
    ("jdiag_p2", 2, 1), ("jtrans", 3, 2), ("lemma1_rhs", 2, 6),
])
def test_coset_sanity(label, q, N):
    op = reps_for(label, q, N)
    report = coset_sanity(op)
    assert report.passed, report.witnesses[:3]
    assert report.extra["count"] == expected_count(label, q, N)


def test_duplicate_representative_is_caught():
    op = reps_for("tnq", 2, 1)
    dup = DoubleCosetOp("dup", 2, 1, op.reps + op.reps[3:4])
    report = coset_sanity(dup)
    assert {"kind": "jacobi-equivalent", "pair": [3, 15]} in report.witnesses


def test_equivalent_but_different_representative_is_caught():
    # translating by an integral Jacobi element gives the same right coset
    rep = reps_for("tnq", 2, 1).reps[2]
    rows = rep.rows()
    rows[0][2] += rows[2][2]  # left-multiply by the translation with S = diag(1, 0)
    other = UpperRep.from_rows(rep.s2, rows)
    report = coset_sanity(DoubleCosetOp("x", 2, 1, (rep, other)), pairwise=True)
    assert not report.passed


def test_broken_representative_invariant():
    bad = UpperRep.from_rows(Fraction(1, 2), [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    report = coset_sanity(DoubleCosetOp("bad", 2, 1, (bad,)))
    assert report.witnesses[0]["kind"] == "invariant"


def test_every_table_rep_is_scaled_symplectic():
    for label in ("tnq", "tstarq"):
        for q, N in ((2, 2), (3, 3), (3, 6)):
            for rep in reps_for(label, q, N).reps:
                assert rep.invariant_violations() == []


def test_table_is_single_source():
    labels = {t.label for t in REPRESENTATIVE_TABLE}
    assert labels == {"tnq", "tstarq", "jdiag_p2", "jtrans"}


def test_reps_for_rejections():
    with pytest.raises(ValueError):
        reps_for("tnq", 4, 1)
    with pytest.raises(ValueError):
        reps_for("tnq", 2, 4)
    with pytest.raises(ValueError):
        reps_for("jdiag", 2, 2)
    with pytest.raises(ValueError):
        reps_for("bogus", 2, 1)


def test_table_dump_is_json():
    dumped = json.dumps(reps_for("tnq", 2, 2).to_json())
    back = json.loads(dumped)
    assert back["count"] == 18
    assert back["reps"][0]["s2"] == "1/2"


def test_single_rep_index_map():
    q, N, d = 3, 2, 1
    rep = reps_for("tstarq", q, N).reps[1 + d]
    (a, b), (c, e) = rep.A
    assert (a, b, c, e) == (q * q, 0, -q * d, q)
    n, r, m = 5, 3, 2
    M = rep.index_map(N)
    image = [sum(M[i][j] * x for j, x in enumerate((n, r, m))) for i in range(3)]
    assert image == [n * q * q - r * q * d + m * N * d * d, q * r - 2 * m * N * d, m]
    assert rep.weight_factor(4) == (Fraction(1, 9) * 3) ** -4


def test_identity_operator():
    f = formal_lift(3, 4, 2, 4)
    g = apply_op(f, DoubleCosetOp("id", 1, 2, (IDENTITY,)))
    assert g.box == f.box and not g.differences(f)


def test_eisenstein_eigenvalue():
    f = siegel_eisenstein(4, 1, ExpansionBox(8, 8))
    stats = EngineStats()
    assert eigenvalue_of(f, reps_for("tnq", 2, 1), stats) == Fraction(45, 2)
    assert stats.fractional_residue == stats.irrational_totals == 0
    assert stats.contributions > 0


def test_not_eigen_witness():
    f = siegel_eisenstein(10, 1, ExpansionBox(8, 8))
    g = cusp_lift(1, 8)
    h = ParamodularExpansion(10, 1, f.box, {k: f[k] + g[k] for k in f.keys()})
    result = eigenvalue_of(h, reps_for("tnq", 2, 1))
    assert isinstance(result, NotEigen)
    assert not result


def test_zero_form_has_no_eigenvalue():
    zero = ParamodularExpansion(4, 1, ExpansionBox(8, 8), {})
    with pytest.raises(EmptyOutputBoxError):
        eigenvalue_of(zero, reps_for("tnq", 2, 1))


def test_requested_box_is_validated():
    f = siegel_eisenstein(4, 1, ExpansionBox(8, 8))
    op = reps_for("tnq", 2, 1)
    best = output_box(f, op)
    assert apply_op(f, op, box=ExpansionBox(1, 1)).box == ExpansionBox(1, 1)
    with pytest.raises(EmptyOutputBoxError):
        apply_op(f, op, box=ExpansionBox(best.n_max + 5, best.m_max + 5))


def test_output_box_is_conservative():
    # every emitted coefficient is reproduced from a strictly larger input box
    op = reps_for("tstarq", 2, 1)
    small = apply_op(cusp_lift(1, 10), op)
    big = apply_op(cusp_lift(1, 16), op)
    assert not small.differences(big)


def test_wrong_list_is_detected():
    # dropping the q | N supplement leaves non-cancelling fractional terms
    full = reps_for("tnq", 2, 2)
    base = DoubleCosetOp("base", 2, 2, full.reps[:15])
    f = cusp_lift(2, 14)
    stats = EngineStats()
    try:
        g = apply_op(f, base, stats=stats)
    except FractionalResidueError:
        return
    assert not maass_check(g).passed or g.differences(apply_op(f, full))


def test_representative_order_is_irrelevant():
    op = reps_for("tstarq", 2, 2)
    reps = list(op.reps)
    random.Random(0).shuffle(reps)
    f = cusp_lift(2, 12)
    a = apply_op(f, op)
    b = apply_op(f, DoubleCosetOp(op.label, op.q, op.level, tuple(reps)))
    assert a.box == b.box and not a.differences(b)


@pytest.mark.parametrize("label,N,q,size", [
    ("tnq", 1, 2, 14), ("tnq", 2, 3, 20), ("tnq", 2, 2, 14), ("tnq", 3, 3, 20), ("tnq", 6, 2, 14),
    ("tstarq", 1, 2, 16), ("tstarq", 2, 2, 16), ("tstarq", 6, 2, 16),
])
def test_images_stay_in_maass_space(label, N, q, size):
    f = cusp_lift(N, size)
    stats = EngineStats()
    g = apply_op(f, reps_for(label, q, N), stats=stats)
    report = maass_check(g)
    assert report.passed and report.checked > 0
    assert stats.fractional_residue == stats.irrational_totals == 0


def test_operators_commute():
    f = cusp_lift(1, 16)
    tq, lp = reps_for("tnq", 2, 1), reps_for("lemma1_rhs", 3, 1)
    a = apply_op(apply_op(f, tq), lp)
    b = apply_op(apply_op(f, lp), tq)
    box = a.box.meet(b.box)
    assert box.n_max >= 3
    assert not a.differences(b)


def test_fj_raise_splits_into_diagonal_and_translations():
    # on Maass forms, FJ-raise equals diag(p,p^2,p,1) plus the translations
    for N, p in ((1, 2), (2, 3)):
        f = cusp_lift(N, 12)
        a = apply_op(f, reps_for("fjraise", p, N))
        b = apply_op(f, reps_for("lemma1_rhs", p, N))
        assert not a.differences(b)


def test_combine_ops():
    a, b = reps_for("jdiag_p2", 2, 1), reps_for("jtrans", 2, 1)
    combined = combine_ops("sum", a, b)
    assert len(combined) == 3
    with pytest.raises(ValueError):
        combine_ops("x", a, reps_for("jtrans", 2, 2))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3, 6]), st.sampled_from([2, 3]))
def test_t_up_equals_t_down_on_lifts(seed, N, p):
    f = formal_lift(seed, 6, N, 6)
    up, down = t_up(f, p), t_down(f, p)
    assert not up.differences(down)
    assert up.prefactor == "p^(-1+k/2)"


def test_t_up_t_down_zero_and_perturbed():
    zero = ParamodularExpansion(4, 2, ExpansionBox(4, 4), {})
    assert not t_up(zero, 2).coeffs and not t_down(zero, 2).coeffs
    f = formal_lift(4, 4, 2, 6)
    bad = f.with_coefficient((1, 1, 2), f[1, 1, 2] + 1)
    assert t_up(bad, 2).differences(t_down(bad, 2))


@pytest.mark.parametrize("N", [1, 2, 6])
def test_t_down_is_fricke_conjugate_of_t_up(N):
    f = cusp_lift(N, 8)
    up = t_up(apply_fricke(f, N), 2)
    down = t_down(f, 2)
    for n, r, m in down.keys():
        if n <= up.box.m_max and m <= up.box.n_max:
            assert down[n, r, m] == up[m, -r, n]
