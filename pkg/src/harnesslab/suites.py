"""Verification suites shared by the command line and the experiment scripts.

Each suite appends checks to a :class:`~harnesslab.report.Report`.  Identity checks
demand exact zeros when the parameters are rational and use ``FLOAT_REL`` otherwise.
"""
from __future__ import annotations

from fractions import Fraction

from . import matrix, qops, quadrature, recurrence, regression
from .errors import HarnessError
from .params import FamilyTag, ParamSet, classify, validate
from .report import Report
from .scalars import is_exact, is_zero

FLOAT_REL = 1e-10
QUAD_TOL = 1e-8

TRIPLES = ((1, 2, 3), (Fraction(1, 2), 1, 4), (Fraction(2, 3), Fraction(3, 2), Fraction(5, 2)))
QUADRUPLES = ((Fraction(1, 2), 1, Fraction(3, 2), 2), (1, 2, 3, 4))


def _times(p: ParamSet, values):
    conv = Fraction if p.is_exact else float
    return tuple(conv(v) for v in values)


def _zero(v, exact: bool, tol: float = FLOAT_REL) -> bool:
    return v == 0 if exact else abs(v) <= tol


def _tol(exact: bool):
    return None if exact else FLOAT_REL


def suite_params(rep: Report, p: ParamSet):
    adm = validate(p)
    rep.add("admissibility", adm.admissible, detail=",".join(adm.violated()))


def suite_regression(rep: Report, p: ParamSet):
    exact = p.is_exact
    worst = 0
    ok = True
    for tr in TRIPLES:
        tt = regression.TimeTriple(*_times(p, tr))
        fc = regression.form_coeffs(p, tt)
        back = regression.extract_params(fc, tt)
        for k in ("q", "eta", "theta", "sigma", "tau"):
            d = abs(getattr(back, k) - getattr(p, k))
            worst = max(worst, d)
            ok &= _zero(d, exact)
        norm = regression.normalization_residual(fc, tt)
        worst = max(worst, abs(norm))
        ok &= _zero(norm, exact)
    rep.add("round_trip", ok, worst, _tol(exact))
    worst = 0
    ok = True
    for quad in QUADRUPLES:
        cr = regression.verify_chain_identities(p, *_times(p, quad))
        worst = max(worst, cr.max_abs)
        ok &= cr.passed(FLOAT_REL)
    rep.add("chain_identities", ok, worst, _tol(exact))
    tt = regression.TimeTriple(*_times(p, TRIPLES[0]))
    xs, xu = _times(p, (Fraction(1, 3), Fraction(-2, 5)))
    v1 = regression.cond_variance(p, tt, xs, xu)
    v2 = regression.cond_variance_two_path(p, tt, xs, xu)
    rep.add("variance_two_path", _zero(v1 - v2, exact), v1 - v2, _tol(exact))


def suite_recurrence(rep: Report, p: ParamSet, N: int):
    exact = p.is_exact
    try:
        tbl = recurrence.build_tables(p, N)
    except HarnessError as exc:
        rep.add("eq1_eq5", False, detail=str(exc))
        return None
    res = recurrence.verify_eq1_eq5(tbl)
    rep.add("eq1_eq5", res.passed(FLOAT_REL), res.max_abs, _tol(exact))
    pos = recurrence.positivity_report(tbl)
    rep.add("positivity", pos.ok, detail="lambda, beta dominance, omega")
    low = recurrence.polynomial_coeffs(tbl.sequence(), _times(p, (2,))[0], 2)[2]
    ref = recurrence.p2_closed(p, _times(p, (2,))[0])
    d = max(abs(x - y) for x, y in zip(low, ref))
    rep.add("low_order_p2", _zero(d, exact), d, _tol(exact))
    return tbl


def suite_closed_forms(rep: Report, p: ParamSet, tbl, N: int):
    if tbl is None:
        rep.skip("closed_forms", "engine unavailable")
        return
    M = min(N, 30)
    eng = tbl.sequence()
    tags = sorted((t for t in classify(p) if t != FamilyTag.GENERAL), key=lambda t: t.value)
    if not tags:
        rep.skip("closed_forms", "no closed family applies")
    for tag in tags:
        try:
            fam = recurrence.closed_family(p, tag, M)
        except HarnessError as exc:
            rep.add(f"closed_form_{tag.value}", False, detail=str(exc))
            continue
        ok = recurrence.rescale_equivalent(eng, fam, M - 1, FLOAT_REL)
        rep.add(f"closed_form_{tag.value}", ok)
    try:
        worst = 0.0
        for n in range(1, min(N, 50) + 1):
            a, b = recurrence.closed_alpha_beta(p.as_float(), n)
            ra, rb = float(tbl.alpha[n]), float(tbl.beta[n])
            worst = max(worst, abs(a - ra) / max(1.0, abs(ra)), abs(b - rb) / max(1.0, abs(rb)))
        rep.add("alpha_beta_explicit", worst <= FLOAT_REL, worst, FLOAT_REL)
    except (ValueError, HarnessError) as exc:
        rep.skip("alpha_beta_explicit", str(exc))


def suite_qops(rep: Report, p: ParamSet, N: int):
    exact = p.is_exact
    t1 = qops.table1_verify(p.q, N)
    worst = max(v["max_abs"] for v in t1.values())
    rep.add("table1", _zero(worst, exact), worst, _tol(exact))
    tags = [t for t in (FamilyTag.QMEIXNER, FamilyTag.BIPOISSON) if t in classify(p)]
    if not tags:
        rep.skip("operator_ccom", "no operator realization for this family")
        return
    s, t, u = _times(p, (1, 2, 3))
    for tag in tags:
        x, y = qops.realization(tag, p, N)
        r = qops.verify_ccom(x, y, p)
        rep.add(f"operator_ccom_{tag.value}", _zero(r["max_abs"], exact), r["max_abs"], _tol(exact))
        xd, yd = qops.dual_realization(tag, p, N)
        r = qops.verify_ccom(xd, yd, p, dual=True)
        rep.add(f"dual_ccom_{tag.value}", _zero(r["max_abs"], exact), r["max_abs"], _tol(exact))
        rq = qops.dual_quadratic_residual(xd, yd, p, s, t, u).max_abs()
        rep.add(f"dual_quadratic_{tag.value}", _zero(rq, exact), rq, _tol(exact))
        fam = recurrence.closed_family(p, tag, N)
        worst = 0
        for n in range(min(N - 1, 30) + 1):
            got = qops.extract_recurrence(x, y, t, n)
            want = fam[n].at(t)
            worst = max([worst] + [abs(g - w) for g, w in zip(got, want)])
        rep.add(f"extract_recurrence_{tag.value}", _zero(worst, exact), worst, _tol(exact))
        if p.q > -1:
            cr = qops.coherent_residual(tag, p, t, N)
            rep.add(f"coherent_{tag.value}", _zero(cr, exact), cr, _tol(exact))


def suite_matrix(rep: Report, p: ParamSet, tbl, N: int):
    exact = p.is_exact
    if tbl is None:
        rep.skip("matrix", "engine unavailable")
        return
    s, t, u = _times(p, (1, 2, 3))
    mr = matrix.verify_matrix(tbl, p, s, t, u, N)
    rep.add("matrix_ccom", _zero(mr.ccom_max, exact), mr.ccom_max, _tol(exact))
    rep.add("matrix_quadratic", _zero(mr.quadratic_max, exact), mr.quadratic_max, _tol(exact))
    rep.add("matrix_quadratic_equals_F_ccom", _zero(mr.proportional_max, exact),
            mr.proportional_max, _tol(exact))
    dq = matrix.verify_matrix_quadratic(tbl, p, s, t, u, N, dual=True)
    rep.add("matrix_dual_quadratic", _zero(dq, exact), dq, _tol(exact))
    n_mom = min(8, N - 2)
    mp = matrix.moment_polys(tbl, n_mom, N)
    one, zero = 1 + 0 * p.q, 0 * p.q
    low = [_pad(mp[0], 2), _pad(mp[1], 2), _pad(mp[2], 2)]
    want = [[one, zero], [zero, zero], [zero, one]]
    d = max(abs(x - y) for row, ref in zip(low, want) for x, y in zip(row, ref))
    rep.add("moments_low_order", _zero(d, exact), d, _tol(exact))
    means = matrix.mean_of_polynomials(tbl, t, n_mom)
    d = max(abs(v) for v in means[1:])
    scale = 1 if exact else max(1.0, *(abs(float(m)) for m in matrix.moments_at(tbl, t, n_mom)))
    rep.add("mean_of_polynomials", _zero(d / scale, exact), d, _tol(exact))
    if is_zero(p.sigma):
        m3 = matrix.moments(tbl, t, 3, N)
        ref = t * (p.eta * t + p.theta + p.eta * p.tau)
        rep.add("sigma0_third_moment", _zero(m3 - ref, exact), m3 - ref, _tol(exact))


def _pad(c, n):
    return list(c) + [0 * c[0]] * (n - len(c))


def suite_quadrature(rep: Report, p: ParamSet, tbl, M: int):
    if tbl is None:
        rep.skip("quadrature", "engine unavailable")
        return
    seq = tbl.sequence()
    if len(seq) < M + 1:
        rep.skip("quadrature", f"table order {len(seq) - 1} below M={M}")
        return
    for t in (1, 2):
        try:
            rule = quadrature.golub_welsch(seq, t, M)
        except HarnessError as exc:
            rep.add(f"quadrature_t{t}", False, detail=str(exc))
            continue
        orth = quadrature.orthogonality_check(seq, t, M, rule)
        rep.add(f"quadrature_weights_t{t}", orth.weight_sum_error <= 1e-12 and orth.min_weight >= 0,
                orth.weight_sum_error, 1e-12)
        rep.add(f"quadrature_gram_t{t}", orth.max_offdiag < QUAD_TOL and orth.max_diag_rel < QUAD_TOL,
                max(orth.max_offdiag, orth.max_diag_rel), QUAD_TOL)
    if FamilyTag.QMEIXNER in classify(p):
        pf = p.as_float()
        n = min(8, M // 2)
        try:
            mc = quadrature.martingale_check(pf, 1, 2, n, M)
        except HarnessError as exc:
            rep.add("kernel_martingale", False, detail=str(exc))
            return
        rep.add("kernel_martingale", mc.max_deviation < QUAD_TOL, mc.max_deviation, QUAD_TOL)
        rep.add("kernel_covariance", abs(mc.covariance - 1) < QUAD_TOL,
                mc.covariance - 1, QUAD_TOL)
    else:
        rep.skip("kernel_martingale", "transition kernels only for sigma = eta = 0")


def verify_all(p: ParamSet, N: int = 40, M: int = 30) -> Report:
    mode = "exact" if p.is_exact else "float"
    rep = Report("verify-all", mode, p.to_dict(), {"N": N, "M": M})
    suite_params(rep, p)
    suite_regression(rep, p)
    tbl = suite_recurrence(rep, p, max(N, M + 1))
    suite_closed_forms(rep, p, tbl, N)
    suite_qops(rep, p, N)
    suite_matrix(rep, p, tbl, N)
    suite_quadrature(rep, p, tbl, M)
    return rep
