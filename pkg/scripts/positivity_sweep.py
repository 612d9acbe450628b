"""Sweep (q, sigma, tau) on a rational grid and compare admissibility with engine positivity.

For each grid point the engine table is built to depth N and the positivity
report (lambda, beta dominance, omega) is tallied against the admissibility
verdict.  Prints a CSV to stdout.  Admissibility alone does not force positivity
at every order (q = -1, or q = 1 with eta theta < 0, give finitely supported laws),
so only points with -1 < q < 1 - 2 sqrt(sigma tau) are expected to pass; a
mismatch there is flagged and sets the exit status.
"""
import argparse
import csv
import sys
from fractions import Fraction as F

from harnesslab.errors import HarnessError
from harnesslab.params import ParamSet, validate
from harnesslab.recurrence import build_tables, positivity_report


def in_range(p):
    # -1 < q < 1 - 2 sqrt(st), squared form to stay rational
    st = p.sigma * p.tau
    return -1 < p.q < 1 and (1 - p.q) ** 2 > 4 * st


def grid(step):
    k = int(1 / step)
    return [F(i, k) for i in range(-k, k + 1)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-N", type=int, default=30)
    ap.add_argument("--step", type=F, default=F(1, 4), help="grid spacing (rational)")
    ap.add_argument("--eta", type=F, default=F(1, 3))
    ap.add_argument("--theta", type=F, default=F(-1, 5))
    args = ap.parse_args(argv)

    out = csv.writer(sys.stdout)
    out.writerow(["q", "sigma", "tau", "admissible", "in_range", "engine_ok", "mismatch"])
    nonneg = [x for x in grid(args.step) if x >= 0]
    mismatches = outside_fail = 0
    for q in grid(args.step):
        for sigma in nonneg:
            for tau in nonneg:
                p = ParamSet.exact(q=q, eta=args.eta, theta=args.theta, sigma=sigma, tau=tau)
                adm = validate(p).admissible
                try:
                    ok = positivity_report(build_tables(p, args.N)).ok
                except (HarnessError, ZeroDivisionError):
                    ok = False
                inside = adm and in_range(p)
                bad = inside and not ok
                mismatches += bad
                outside_fail += adm and not inside and not ok
                out.writerow([q, sigma, tau, int(adm), int(inside), int(ok), int(bad)])
    print(f"# in-range points failing positivity: {mismatches}", file=sys.stderr)
    print(f"# admissible out-of-range points failing positivity: {outside_fail}", file=sys.stderr)
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
