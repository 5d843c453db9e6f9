"""Jacobi and paramodular Eisenstein series of squarefree level."""
from __future__ import annotations

from fractions import Fraction

from .core import CheckReport, fmt_rational
from .hecke import EngineStats, NotEigen, apply_op, eigenvalue_of, reps_for
from .jacobi import JacobiExpansion, index_raise, jacobi_eisenstein_index1
from .maass import gritsenko_lift
from .ntheory import bernoulli_even, divisor_sigma, is_prime, is_squarefree
from .paramod import ExpansionBox, ParamodularExpansion, embed_jacobi, fj_slice, phi_operator

__all__ = [
    "jacobi_eisenstein",
    "jacobi_eisenstein_by_coset",
    "siegel_eisenstein",
    "eisenstein_constant",
    "constant_term_report",
    "slice_identity_check",
    "jacobi_eigen_check",
    "coset_raise_check",
]


def _validate(k: int, N: int) -> None:
    if k < 4 or k % 2:
        raise ValueError(f"weight must be even and >= 4, got {k}")
    if N < 1 or not is_squarefree(N):
        raise ValueError(f"level must be a positive squarefree integer, got {N}")


def jacobi_eisenstein(k: int, N: int, n_max: int) -> JacobiExpansion:
    """e*_{k,N} = sigma_{k-1}(N)^(-1) e_{k,1} | V_N, normalized so c(0, 0) = 1."""
    _validate(k, N)
    raised = index_raise(jacobi_eisenstein_index1(k, n_max * N), N)
    return raised.scale(Fraction(1, divisor_sigma(k - 1, N)))


def eisenstein_constant(k: int) -> Fraction:
    """Factor c_k with alpha(0, 0, 0) = 1 for the lift of c_k e*_{k,N}."""
    return Fraction(-2 * k) / bernoulli_even(k)


def siegel_eisenstein(k: int, N: int, box: ExpansionBox) -> ParamodularExpansion:
    """The paramodular Eisenstein series E_{k,N} on ``box``, constant term 1.

    Obtained as the lift of -(2k / B_k) e*_{k,N}; the Jacobi input is
    truncated at n_max * m_max, enough for every coefficient of the box.
    """
    _validate(k, N)
    need = max(box.n_max * box.m_max, 1)
    phi = jacobi_eisenstein(k, N, need).scale(eisenstein_constant(k))
    return gritsenko_lift(phi, box)


def constant_term_report(k: int, N: int) -> CheckReport:
    """alpha(0, 0, 0) = 1 and the Siegel phi-operator image equals E_k."""
    f = siegel_eisenstein(k, N, ExpansionBox(3, 1))
    scale = eisenstein_constant(k)
    # first Fourier-Jacobi coefficient over e*_{k,N}: forced by alpha(0,0,0) = 1
    report = CheckReport(extra={
        "weight": k,
        "level": N,
        "slice_scale": fmt_rational(f[0, 0, 1]),
        "inverse_constant": fmt_rational(-bernoulli_even(k) / (2 * k)),
    })
    report.checked += 1
    if f[0, 0, 0] != 1:
        report.fail({"index": [0, 0, 0], "value": fmt_rational(f[0, 0, 0])})
    report.checked += 1
    if f[0, 0, 1] != scale:
        report.fail({"index": [0, 0, 1], "value": fmt_rational(f[0, 0, 1]), "expected": fmt_rational(scale)})
    for m, c in enumerate(phi_operator(f)):
        expected = Fraction(1) if m == 0 else scale * divisor_sigma(k - 1, m)
        report.checked += 1
        if c != expected:
            report.fail({"index": [0, 0, m], "value": fmt_rational(c), "expected": fmt_rational(expected)})
    return report


def jacobi_eisenstein_by_coset(
    k: int, N: int, n_max: int, stats: EngineStats | None = None
) -> JacobiExpansion:
    """sigma_{k-1}(N) e*_{k,N} through the Hecke engine.

    (1/N) e_{k,1} acted on by the index-1 double coset of
    N^(-1/2) diag(1, N, N, 1), read off at Fourier-Jacobi index N.  Shares
    no code with index_raise.
    """
    _validate(k, N)
    e1 = jacobi_eisenstein_index1(k, 4 * N * N * (n_max + 1))
    source = embed_jacobi(e1, 1, N * (n_max + 1))
    g = apply_op(source, reps_for("fjraise", N, 1), stats=stats)
    if g.box.m_max < N or g.box.n_max < n_max:
        raise ValueError(f"engine output box {g.box} does not reach n_max = {n_max} at m = {N}")
    return fj_slice(g, N).truncate(n_max).scale(Fraction(1, N))


def coset_raise_check(
    k: int, N: int, n_max: int, phi: JacobiExpansion | None = None, stats: EngineStats | None = None
) -> CheckReport:
    """index_raise and the engine agree on sigma_{k-1}(N) e*_{k,N}.

    When ``phi`` is given it is compared as a claimed e*_{k,N} as well.
    """
    by_formula = jacobi_eisenstein(k, N, n_max).scale(divisor_sigma(k - 1, N))
    by_engine = jacobi_eisenstein_by_coset(k, N, n_max, stats)
    report = CheckReport(extra={"weight": k, "level": N, "nmax": n_max})
    for key in by_formula.keys():
        report.checked += 1
        a, b = by_formula[key], by_engine[key]
        if a != b:
            report.fail({"index": list(key), "formula": fmt_rational(a), "engine": fmt_rational(b)})
    if phi is not None:
        sigma = divisor_sigma(k - 1, N)
        for key in phi.truncate(n_max).keys():
            report.checked += 1
            if sigma * phi[key] != by_engine[key]:
                report.fail({"index": list(key), "input": fmt_rational(phi[key]),
                             "engine": fmt_rational(by_engine[key] / sigma)})
    return report


def slice_identity_check(
    f: ParamodularExpansion, q: int, stats: EngineStats | None = None, box: ExpansionBox | None = None
) -> CheckReport:
    """m = 1 slice of f | T_N(q) equals f_1 | diag(1,q,q^2,q) + (q^2 + q) f_1.

    ``box`` optionally restricts the T_N(q) image (it must have m_max >= 1).
    """
    N = f.level
    if not is_prime(q) or N % q == 0:
        raise ValueError(f"need a prime q not dividing the level, got q = {q}")
    lhs = fj_slice(apply_op(f, reps_for("tnq", q, N), box=box, stats=stats), 1)
    f1 = fj_slice(f, 1)
    jac = fj_slice(apply_op(embed_jacobi(f1, N), reps_for("jdiag", q, N), stats=stats), 1)
    n_max = min(lhs.n_max, jac.n_max)
    report = CheckReport(extra={"q": q, "nmax": n_max})
    for key in lhs.truncate(n_max).keys():
        report.checked += 1
        rhs = jac[key] + (q * q + q) * f1[key]
        if lhs[key] != rhs:
            report.fail({"index": list(key), "lhs": fmt_rational(lhs[key]), "rhs": fmt_rational(rhs)})
    return report


def jacobi_eigen_check(phi: JacobiExpansion, q: int, stats: EngineStats | None = None) -> CheckReport:
    """phi | diag(1,q,q^2,q) = (q^k + q^(3-k)) phi on the output box."""
    k, N = phi.weight, phi.index
    expected = Fraction(q) ** k + Fraction(q) ** (3 - k)
    report = CheckReport(extra={"q": q, "expected": fmt_rational(expected)})
    result = eigenvalue_of(embed_jacobi(phi, N), reps_for("jdiag", q, N), stats)
    report.checked += 1
    if isinstance(result, NotEigen):
        report.fail({"index": list(result.witness), "image": fmt_rational(result.image),
                     "expected": fmt_rational(result.expected)})
    else:
        report.extra["eigenvalue"] = fmt_rational(result)
        if result != expected:
            report.fail({"eigenvalue": fmt_rational(result)})
    return report
