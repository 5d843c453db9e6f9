"""Representative counts and sanity status for every tabulated operator."""
import argparse
from dataclasses import dataclass

from paramaass.hecke import coset_sanity, expected_count, reps_for


@dataclass
class CountConfig:
    labels: tuple = ("tnq", "tstarq", "jdiag", "fjraise")
    levels: tuple = (1, 2, 3, 6)
    primes: tuple = (2, 3)
    pairwise: bool = True


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--levels", type=int, nargs="+", default=list(CountConfig.levels))
    p.add_argument("--primes", type=int, nargs="+", default=list(CountConfig.primes))
    p.add_argument("--no-pairwise", action="store_true", help="skip the quadratic inequivalence scan")
    a = p.parse_args(argv)
    cfg = CountConfig(levels=tuple(a.levels), primes=tuple(a.primes), pairwise=not a.no_pairwise)
    print(f"{'op':8} {'N':>3} {'q':>3} {'count':>6} {'expected':>8}  status")
    for label in cfg.labels:
        for N in cfg.levels:
            for q in cfg.primes:
                try:
                    op = reps_for(label, q, N)
                except ValueError:
                    continue
                report = coset_sanity(op, pairwise=cfg.pairwise)
                status = "pass" if report.passed else f"fail {report.witnesses[:1]}"
                print(f"{label:8} {N:>3} {q:>3} {len(op.reps):>6} {expected_count(label, q, N):>8}  {status}")


if __name__ == "__main__":
    main()
