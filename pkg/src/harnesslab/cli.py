"""Command line front end: ``harnesslab <command> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import matrix, qops, quadrature, recurrence, regression, suites
from .errors import HarnessError
from .params import PRESETS, FamilyTag, ParamSet, classify, preset, time_invert, validate
from .report import Report
from .scalars import fmt, parse_scalar

FAMILIES = ["auto", "general"] + [t.value for t in FamilyTag if t != FamilyTag.GENERAL]


class UsageError(Exception):
    pass


def load_params(spec: str, exact: bool) -> ParamSet:
    """A preset name or a path to a JSON object with the five parameters."""
    if spec in PRESETS:
        return preset(spec, exact)
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"--params: no preset or file named {spec!r}")
    try:
        return ParamSet.load(path, exact)
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--params: {exc}") from exc


def parse_times(text: str, count: int, exact: bool):
    parts = [s for s in text.split(",") if s.strip()]
    if len(parts) != count:
        raise UsageError(f"expected {count} comma-separated times, got {text!r}")
    try:
        return [parse_scalar(s, exact) for s in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad time list {text!r}") from exc


def _scalar(text: str, exact: bool):
    try:
        return parse_scalar(text, exact)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad number {text!r}") from exc


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _report(args, p: ParamSet, suite: str, trunc: dict) -> Report:
    return Report(suite, "exact" if p.is_exact else "float", p.to_dict(), trunc)


# -- commands ---------------------------------------------------------------------------

def cmd_params(args) -> int:
    p = load_params(args.params, args.exact)
    adm = validate(p)
    obj = {
        "schema": "harnesslab/1",
        "params": p.to_dict(),
        "admissibility": adm.to_dict(),
        "families": sorted(t.value for t in classify(p)),
        "time_inverse": time_invert(p).to_dict(),
    }
    _emit(_json(obj), args.out)
    return 0 if adm.admissible else 1


def cmd_regression(args) -> int:
    p = load_params(args.params, args.exact)
    if args.verify:
        r, s, t, u = parse_times(args.verify, 4, p.is_exact)
        rep = _report(args, p, "regression-verify", {})
        res = regression.chain_identities(p, r, s, t, u)
        exact = p.is_exact
        for name, v in res.items():
            rep.add(name, v == 0 if exact else abs(v) <= suites.FLOAT_REL, v,
                    None if exact else suites.FLOAT_REL)
        _emit(rep.to_json(), args.out)
        return 0 if rep.passed else 1
    s, t, u = parse_times(args.times, 3, p.is_exact)
    tr = regression.TimeTriple(s, t, u)
    fc = regression.form_coeffs(p, tr)
    lc = regression.harness_coeffs(tr)
    obj = {
        "schema": "harnesslab/1",
        "params": p.to_dict(),
        "times": {"s": fmt(s), "t": fmt(t), "u": fmt(u)},
        "linear": {"a": fmt(lc.a), "b": fmt(lc.b)},
        "form": {k: fmt(v) for k, v in zip("ABCDEF", fc.as_tuple())},
    }
    _emit(_json(obj), args.out)
    return 0


def cmd_recur(args) -> int:
    p = load_params(args.params, args.exact)
    t = _scalar(args.t, p.is_exact)
    tag = recurrence.auto_family(p) if args.family == "auto" else FamilyTag(args.family)
    seq = recurrence.closed_family(p, tag, args.N)
    if args.format == "csv":
        rows = [[n, *(fmt(v) for v in seq[n].at(t))] for n in range(args.N + 1)]
        _emit(_csv(["n", "a_n", "b_n", "c_n"], rows), args.out)
        return 0
    obj = {"schema": "harnesslab/1", "params": p.to_dict(), "family": tag.value,
           "t": fmt(t), "N": args.N,
           "coefficients": [{"n": n, **{k: fmt(v) for k, v in zip("abc", seq[n].at(t))}}
                            for n in range(args.N + 1)]}
    if tag == FamilyTag.GENERAL:
        tbl = recurrence.build_tables(p, args.N)
        obj["tables"] = {name: [fmt(v) for v in getattr(tbl, name)]
                         for name in ("alpha", "beta", "gamma", "delta", "epsilon", "phi", "omega")}
    _emit(_json(obj), args.out)
    return 0


def cmd_qops(args) -> int:
    exact = args.exact
    if args.action == "verify-table1":
        q = _scalar(args.q, exact)
        rep = Report("qops-table1", "exact" if exact else "float",
                     {"q": fmt(q), "eta": "0", "theta": "0", "sigma": "0", "tau": "0"},
                     {"N": args.N})
        for cell, r in qops.table1_verify(q, args.N).items():
            v = r["max_abs"]
            rep.add(cell, v == 0 if exact else abs(v) <= suites.FLOAT_REL, v,
                    None if exact else suites.FLOAT_REL)
    else:
        if args.params is None:
            raise UsageError("verify-ccom needs --params")
        p = load_params(args.params, exact)
        fam = args.family
        if fam == "auto":
            tags = [t for t in (FamilyTag.QMEIXNER, FamilyTag.BIPOISSON) if t in classify(p)]
            if not tags:
                raise UsageError("parameters admit no operator realization")
            fam = tags[0].value
        rep = _report(args, p, "qops-ccom", {"N": args.N})
        tag = FamilyTag(fam)
        x, y = qops.realization(tag, p, args.N)
        xd, yd = qops.dual_realization(tag, p, args.N)
        for name, r in (("ccom", qops.verify_ccom(x, y, p)),
                        ("dual_ccom", qops.verify_ccom(xd, yd, p, dual=True))):
            v = r["max_abs"]
            rep.add(f"{name}_{fam}", v == 0 if exact else abs(v) <= suites.FLOAT_REL, v,
                    None if exact else suites.FLOAT_REL)
    _emit(rep.to_json(), args.out)
    return 0 if rep.passed else 1


def cmd_matrix(args) -> int:
    p = load_params(args.params, args.exact)
    if args.action == "moments":
        t = _scalar(args.t, p.is_exact)
        tbl = recurrence.build_tables(p, args.n + 2)
        mp = matrix.moment_polys(tbl, args.n)
        obj = {"schema": "harnesslab/1", "params": p.to_dict(), "t": fmt(t),
               "moments": [fmt(matrix.poly_eval(m, t)) for m in mp],
               "moment_polynomials": [[fmt(c) for c in m] for m in mp]}
        _emit(_json(obj), args.out)
        return 0
    s, t, u = parse_times(args.times, 3, p.is_exact)
    tbl = recurrence.build_tables(p, args.N)
    mr = matrix.verify_matrix(tbl, p, s, t, u, args.N)
    rep = _report(args, p, "matrix-verify", {"N": args.N})
    exact = mr.exact
    for name, v in (("matrix_ccom", mr.ccom_max), ("matrix_quadratic", mr.quadratic_max),
                    ("matrix_quadratic_equals_F_ccom", mr.proportional_max)):
        rep.add(name, v == 0 if exact else abs(v) <= suites.FLOAT_REL, v,
                None if exact else suites.FLOAT_REL, detail=f"leading {mr.block} block")
    _emit(rep.to_json(), args.out)
    return 0 if rep.passed else 1


def cmd_quad(args) -> int:
    p = load_params(args.params, False)
    if args.action == "martingale":
        mc = quadrature.martingale_check(p, float(_scalar(args.s, False)),
                                         float(_scalar(args.t, False)), args.n, args.M)
        rep = _report(args, p, "quad-martingale", {"M": args.M})
        rep.add("kernel_martingale", mc.max_deviation < suites.QUAD_TOL, mc.max_deviation,
                suites.QUAD_TOL)
        rep.add("kernel_covariance", abs(mc.covariance - mc.s) < suites.QUAD_TOL,
                mc.covariance - mc.s, suites.QUAD_TOL)
        _emit(rep.to_json(), args.out)
        return 0 if rep.passed else 1
    t = float(_scalar(args.t, False))
    seq = recurrence.coefficient_sequence(p, args.M, args.family)
    rule = quadrature.golub_welsch(seq, t, args.M)
    rows = [[repr(float(x)), repr(float(w))] for x, w in zip(rule.nodes, rule.weights)]
    _emit(_csv(["node", "weight"], rows), args.out)
    return 0


def cmd_verify_all(args) -> int:
    p = load_params(args.params, args.exact)
    start = time.perf_counter()
    rep = suites.verify_all(p, args.N, args.M)
    if args.timing:
        rep.elapsed_s = time.perf_counter() - start
    _emit(rep.to_json(), args.out)
    return 0 if rep.passed else 1


# -- parser ----------------------------------------------------------------------------------

def _mode(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="exact", action="store_true", default=True,
                   help="rational arithmetic (default)")
    g.add_argument("--float", dest="exact", action="store_false", help="binary64 arithmetic")


def _common(p: argparse.ArgumentParser, params_required=True):
    p.add_argument("--params", required=params_required,
                   help=f"preset name ({', '.join(PRESETS)}) or JSON file")
    p.add_argument("--out", help="write output to FILE instead of stdout")
    _mode(p)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="harnesslab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    sp = sub.add_parser("params", help="admissibility, families and time inverse")
    _common(sp)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("regression", help="regression coefficients at fixed times")
    _common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--times", help="s,t,u")
    g.add_argument("--verify", metavar="R,S,T,U", help="chain-identity residuals")
    sp.set_defaults(func=cmd_regression)

    sp = sub.add_parser("recur", help="three-term recurrence coefficients")
    _common(sp)
    sp.add_argument("-N", type=int, default=40)
    sp.add_argument("--family", choices=FAMILIES, default="auto")
    sp.add_argument("--t", default="1")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_recur)

    sp = sub.add_parser("qops", help="q-commutator and operator checks")
    sp.add_argument("action", choices=["verify-table1", "verify-ccom"])
    _common(sp, params_required=False)
    sp.add_argument("--q", default="1/2")
    sp.add_argument("-N", type=int, default=30)
    sp.add_argument("--family", choices=["auto", "qmeixner", "bipoisson"], default="auto")
    sp.set_defaults(func=cmd_qops)

    sp = sub.add_parser("matrix", help="matrix identities and moments")
    sp.add_argument("action", choices=["verify", "moments"])
    _common(sp)
    sp.add_argument("--times", default="1,2,3")
    sp.add_argument("-N", type=int, default=40)
    sp.add_argument("--t", default="1")
    sp.add_argument("-n", type=int, default=8)
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("quad", help="Gauss rules and the kernel martingale check")
    sp.add_argument("action", nargs="?", choices=["rule", "martingale"], default="rule")
    _common(sp)
    sp.add_argument("--t", default="1")
    sp.add_argument("--s", default="1")
    sp.add_argument("-M", type=int, default=30)
    sp.add_argument("-n", type=int, default=8)
    sp.add_argument("--family", choices=FAMILIES, default="general")
    sp.set_defaults(func=cmd_quad)

    sp = sub.add_parser("verify-all", help="run every verification suite")
    _common(sp)
    sp.add_argument("-N", type=int, default=40)
    sp.add_argument("-M", type=int, default=30)
    sp.add_argument("--timing", action="store_true", help="include elapsed time in the report")
    sp.set_defaults(func=cmd_verify_all)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        ap.error(str(exc))
    except HarnessError as exc:
        print(f"harnesslab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
