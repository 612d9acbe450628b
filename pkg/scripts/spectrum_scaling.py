"""How the Gauss node spread grows with M as |q| approaches 1.

Bounded support shows up as max|node| levelling off in M; growth that keeps
going suggests unbounded support and a larger M for kernel work.
"""
import argparse

from harnesslab.params import ParamSet
from harnesslab.quadrature import golub_welsch
from harnesslab.recurrence import build_tables


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--theta", type=float, default=1 / 3)
    ap.add_argument("--tau", type=float, default=0.2)
    ap.add_argument("--qs", default="0.5,0.9,0.99,-0.9")
    ap.add_argument("--Ms", default="10,20,40,80")
    args = ap.parse_args(argv)

    Ms = [int(m) for m in args.Ms.split(",")]
    print("q".rjust(6), *(f"M={m}".rjust(10) for m in Ms))
    for q in (float(x) for x in args.qs.split(",")):
        p = ParamSet.floats(q=q, theta=args.theta, tau=args.tau)
        seq = build_tables(p, max(Ms) + 1).sequence()
        spread = [abs(golub_welsch(seq, args.t, m).nodes).max() for m in Ms]
        print(f"{q:6.2f}", *(f"{s:10.4f}" for s in spread))


if __name__ == "__main__":
    main()
