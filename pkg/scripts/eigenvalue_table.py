"""Hecke eigenvalues of paramodular Eisenstein series, as CSV.

    python scripts/eigenvalue_table.py --weights 4 6 --levels 1 2 3 --primes 2 3
"""
import argparse
import csv
import sys
from dataclasses import dataclass

from paramaass.core import fmt_rational
from paramaass.eisenstein import siegel_eisenstein
from paramaass.hecke import EngineStats, NotEigen, eigenvalue_of, output_box, reps_for
from paramaass.paramod import ExpansionBox, ParamodularExpansion


@dataclass
class TableConfig:
    weights: tuple = (4, 6)
    levels: tuple = (1, 2, 3, 5, 6)
    primes: tuple = (2, 3)
    op: str = "tnq"
    min_output: int = 2


def input_size(op, N, target):
    s = 4
    while True:
        b = output_box(ParamodularExpansion(4, N, ExpansionBox(s, s), {}), op)
        if min(b.n_max, b.m_max) >= target:
            return s
        s += 2


def rows(cfg: TableConfig):
    for k in cfg.weights:
        for N in cfg.levels:
            for q in cfg.primes:
                op = reps_for(cfg.op, q, N)
                s = input_size(op, N, cfg.min_output)
                stats = EngineStats()
                lam = eigenvalue_of(siegel_eisenstein(k, N, ExpansionBox(s, s)), op, stats)
                value = "not-eigen" if isinstance(lam, NotEigen) else fmt_rational(lam)
                yield {"weight": k, "level": N, "q": q, "op": cfg.op, "input_box": s,
                       "eigenvalue": value, "fractional_residue": stats.fractional_residue}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--weights", type=int, nargs="+", default=list(TableConfig.weights))
    p.add_argument("--levels", type=int, nargs="+", default=list(TableConfig.levels))
    p.add_argument("--primes", type=int, nargs="+", default=list(TableConfig.primes))
    p.add_argument("--op", choices=("tnq", "tstarq"), default=TableConfig.op)
    a = p.parse_args(argv)
    cfg = TableConfig(tuple(a.weights), tuple(a.levels), tuple(a.primes), a.op)
    writer = None
    for row in rows(cfg):
        if writer is None:
            writer = csv.DictWriter(sys.stdout, fieldnames=list(row))
            writer.writeheader()
        writer.writerow(row)
        sys.stdout.flush()


if __name__ == "__main__":
    main()
