"""Command-line front end.

Exit codes: 0 success or pass, 1 a check failed (report on stdout),
2 invalid input (message on stderr).  Output is deterministic JSON.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import CheckReport, TruncationError, fmt_rational
from .eisenstein import (
    coset_raise_check,
    jacobi_eigen_check,
    siegel_eisenstein,
    slice_identity_check,
)
from .hecke import (
    EmptyOutputBoxError,
    EngineError,
    EngineStats,
    NotEigen,
    apply_op,
    coset_sanity,
    eigenvalue_of,
    reps_for,
)
from .jacobi import JacobiExpansion, validate_jacobi
from .maass import corollary2_profile, gritsenko_lift, lemma1_check, maass_check, theorem2_eigen_check
from .paramod import ExpansionBox, ParamodularExpansion, apply_fricke, embed_jacobi, fj_slice, is_cusp
from .serialize import dumps, expansion_to_json, jacobi_to_json, load_any

SUITES = ("maass", "lemma1", "fricke", "corollary2", "corollary3", "corollary5", "corollary6", "cusp")
HECKE_OPS = ("tnq", "tstarq", "fjraise", "jdiag")
REPS_OPS = ("tnq", "tstarq", "fjraise", "jdiag", "jdiag_p2", "jtrans", "lemma1_rhs")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="paramaass", description="Exact paramodular and Jacobi form computations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eisenstein", help="paramodular Eisenstein series E_{k,N}")
    e.add_argument("--weight", type=int, required=True)
    e.add_argument("--level", type=int, required=True)
    e.add_argument("--nmax", type=int, required=True)
    e.add_argument("--mmax", type=int, required=True)
    e.add_argument("--json", dest="out", help="write to this file instead of stdout")

    lf = sub.add_parser("lift", help="lift a Jacobi expansion")
    lf.add_argument("--weight", type=int, required=True)
    lf.add_argument("--level", type=int, required=True)
    lf.add_argument("--jacobi", required=True)
    lf.add_argument("--nmax", type=int, required=True)
    lf.add_argument("--mmax", type=int, required=True)
    lf.add_argument("--json", dest="out")

    h = sub.add_parser("hecke", help="apply a Hecke operator")
    h.add_argument("--op", choices=HECKE_OPS, required=True)
    h.add_argument("--q", type=int, required=True)
    h.add_argument("--in", dest="infile", required=True)
    h.add_argument("--eigen", action="store_true", help="report the eigenvalue or a witness")
    h.add_argument("--json", dest="out")

    c = sub.add_parser("check", help="run a check suite")
    c.add_argument("--suite", choices=SUITES, required=True)
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--p", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--mode", choices=("ii", "iii"), default="ii")

    s = sub.add_parser("slice", help="extract a Fourier-Jacobi coefficient")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--json", dest="out")

    r = sub.add_parser("reps", help="dump a coset representative table")
    r.add_argument("--op", choices=REPS_OPS, required=True)
    r.add_argument("--q", type=int, required=True)
    r.add_argument("--level", type=int, required=True)
    return p


def _read(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return load_any(text)


def _read_paramodular(path: str) -> ParamodularExpansion:
    obj = _read(path)
    if isinstance(obj, JacobiExpansion):
        return embed_jacobi(_validated(obj), obj.index)
    return obj


def _read_jacobi(path: str) -> JacobiExpansion:
    obj = _read(path)
    if isinstance(obj, ParamodularExpansion):
        return fj_slice(obj, 1)
    return _validated(obj)


def _validated(phi: JacobiExpansion) -> JacobiExpansion:
    report = validate_jacobi(phi)
    if not report.passed:
        raise InputError(f"Jacobi expansion fails validation: {report.witnesses[0]}")
    return phi


def _emit(obj, out: str | None, stdout) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        stdout.write(text)


def _require(value, name: str):
    if value is None:
        raise InputError(f"--{name} is required for this suite")
    return value


def _cmd_eisenstein(args, stdout) -> int:
    f = siegel_eisenstein(args.weight, args.level, ExpansionBox(args.nmax, args.mmax))
    _emit(expansion_to_json(f), args.out, stdout)
    return 0


def _cmd_lift(args, stdout) -> int:
    phi = _read(args.jacobi)
    if not isinstance(phi, JacobiExpansion):
        raise InputError("--jacobi must name a Jacobi expansion file")
    _validated(phi)
    if (phi.weight, phi.index) != (args.weight, args.level):
        raise InputError(
            f"file has weight {phi.weight} and index {phi.index}, expected {args.weight} and {args.level}"
        )
    f = gritsenko_lift(phi, ExpansionBox(args.nmax, args.mmax))
    _emit(expansion_to_json(f), args.out, stdout)
    return 0


def _cmd_hecke(args, stdout) -> int:
    f = _read_paramodular(args.infile)
    op = reps_for(args.op, args.q, f.level)
    stats = EngineStats()
    if args.eigen:
        result = eigenvalue_of(f, op, stats)
        if isinstance(result, NotEigen):
            report = {
                "status": "not-eigen",
                "witness": list(result.witness),
                "image": fmt_rational(result.image),
                "expected": fmt_rational(result.expected),
            }
            _emit(report, args.out, stdout)
            return 1
        _emit({"status": "eigen", "eigenvalue": fmt_rational(result)}, args.out, stdout)
        return 0
    _emit(expansion_to_json(apply_op(f, op, stats=stats)), args.out, stdout)
    return 0


def _fricke_report(f: ParamodularExpansion, d: int) -> CheckReport:
    g = apply_fricke(f, d)
    report = CheckReport(extra={"d": d, "box": [g.box.n_max, g.box.m_max]})
    for key in g.keys():
        report.checked += 1
        if g[key] != f[key]:
            report.fail({"index": list(key), "image": fmt_rational(g[key]), "value": fmt_rational(f[key])})
    sign = theorem2_eigen_check(f, d, require_maass=False)
    report.extra["slice_sign"] = sign
    return report


def _cmd_check(args, stdout) -> int:
    suite = args.suite
    if suite == "corollary5":
        report = jacobi_eigen_check(_read_jacobi(args.infile), _require(args.p, "p"))
    elif suite == "corollary6":
        phi = _read_jacobi(args.infile)
        report = coset_raise_check(phi.weight, phi.index, phi.n_max, phi)
    else:
        f = _read_paramodular(args.infile)
        if suite == "maass":
            report = maass_check(f)
        elif suite == "lemma1":
            report = lemma1_check(f, _require(args.p, "p"), args.mode)
        elif suite == "fricke":
            d = args.d if args.d is not None else f.level
            report = _fricke_report(f, d)
        elif suite == "corollary2":
            report = corollary2_profile(f).to_report()
        elif suite == "corollary3":
            report = slice_identity_check(f, _require(args.p, "p"))
        else:
            report = is_cusp(f)
    stdout.write(dumps(report.to_json()))
    return 0 if report.passed else 1


def _cmd_slice(args, stdout) -> int:
    f = _read_paramodular(args.infile)
    _emit(jacobi_to_json(fj_slice(f, args.m)), args.out, stdout)
    return 0


def _cmd_reps(args, stdout) -> int:
    op = reps_for(args.op, args.q, args.level)
    report = coset_sanity(op)
    stdout.write(dumps({"operator": op.to_json(), "sanity": report.to_json()}))
    return 0 if report.passed else 1


COMMANDS = {
    "eisenstein": _cmd_eisenstein,
    "lift": _cmd_lift,
    "hecke": _cmd_hecke,
    "check": _cmd_check,
    "slice": _cmd_slice,
    "reps": _cmd_reps,
}


def cli_run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _parser().parse_args(argv)
        return COMMANDS[args.command](args, stdout)
    except EmptyOutputBoxError as exc:
        stderr.write(f"error: input box too small: {exc}\n")
        return 2
    except EngineError as exc:
        stdout.write(dumps({"status": "fail", "checked": 0, "skipped": 0,
                            "witnesses": [{"engine": type(exc).__name__, "message": str(exc)}]}))
        return 1
    except (InputError, ValueError, TruncationError, KeyError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(cli_run())
