"""Agreement of the closed-form alpha_n, beta_n with the exact engine, and exact vs float cost."""
import argparse
import random
import time
from fractions import Fraction as F

from harnesslab.params import ParamSet, validate
from harnesslab.recurrence import build_tables, closed_alpha_beta


def rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a)


def _frac(rng, lo, hi, den):
    return F(rng.randint(lo, hi), den)


def draw(rng):
    while True:
        p = ParamSet.exact(q=_frac(rng, -9, 10, 10), eta=_frac(rng, -6, 6, 6), theta=_frac(rng, -6, 6, 6),
                           sigma=_frac(rng, 0, 4, 8), tau=_frac(rng, 0, 4, 8))
        # closed form needs q < 1 - 2 sqrt(sigma tau)
        if validate(p).admissible and p.q < 1 and (1 - p.q) ** 2 > 4 * p.sigma * p.tau:
            return p


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-N", type=int, default=50)
    ap.add_argument("--draws", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    print(f"{'q':>6} {'sigma*tau':>10} {'max rel err':>12} {'exact s':>9} {'float s':>9}")
    for _ in range(args.draws):
        p = draw(rng)
        t0 = time.perf_counter()
        tbl = build_tables(p, args.N)
        t1 = time.perf_counter()
        build_tables(p.as_float(), args.N)
        t2 = time.perf_counter()
        pf = p.as_float()
        err = 0.0
        for n in range(1, args.N + 1):
            a, b = closed_alpha_beta(pf, n)
            err = max(err, rel(a, float(tbl.alpha[n])), rel(b, float(tbl.beta[n])))
        print(f"{float(p.q):6.2f} {float(p.sigma * p.tau):10.4f} {err:12.2e} {t1 - t0:9.4f} {t2 - t1:9.4f}")


if __name__ == "__main__":
    main()
