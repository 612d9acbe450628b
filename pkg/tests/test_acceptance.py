"""The eight acceptance criteria, each at its stated tolerance and time budget."""
import json
import random
import subprocess
import sys
import time
from fractions import Fraction as F

import jsonschema

from gen import REGIMES, general_params, sorted_times
from harnesslab import matrix, qops, quadrature, recurrence, regression
from harnesslab.params import FamilyTag, ParamSet, validate
from harnesslab.report import REPORT_SCHEMA

SEED = 20240601


def _regime_sets(rng, per_regime=2):
    return [REGIMES[name](rng) for name in sorted(REGIMES) for _ in range(per_regime)]


def test_c1_round_trip(verdict):
    rng = random.Random(SEED + 1)
    cases = []
    while len(cases) < 50:
        p = general_params(rng)
        assert validate(p).admissible
        cases.append((p, regression.TimeTriple(*sorted_times(rng, 3))))
    start = time.perf_counter()
    bad = sum(regression.extract_params(regression.form_coeffs(p, tr), tr) != p for p, tr in cases)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 1.0
    assert verdict("C1 round-trip", ok, f"{50 - bad}/50 exact, {elapsed:.3f}s (limit 1s)")


def test_c2_chain_identities(verdict):
    rng = random.Random(SEED + 2)
    draws = [(general_params(rng), sorted_times(rng, 4)) for _ in range(20)]
    start = time.perf_counter()
    worst = F(0)
    names = set()
    for p, times in draws:
        res = regression.chain_identities(p, *times)
        names |= set(res)
        worst = max(worst, max(abs(v) for v in res.values()))
    elapsed = time.perf_counter() - start
    covered = set(regression.CHAIN_NAMES) | {"norm_tsu"} <= names
    ok = worst == 0 and covered and elapsed < 1.0
    assert verdict("C2 chain identities", ok,
                   f"{len(names)} identities x 20 draws, max |residual| {worst}, {elapsed:.3f}s (limit 1s)")


def test_c3_recurrence(verdict):
    rng = random.Random(SEED + 3)
    sets = _regime_sets(rng)
    start = time.perf_counter()
    worst, positive = F(0), True
    for p in sets:
        tbl = recurrence.build_tables(p, 50)
        rep = recurrence.verify_eq1_eq5(tbl)
        worst = max(worst, rep.max_abs)
        pos = recurrence.positivity_report(tbl)
        positive &= all(pos.lam.values()) and all(pos.beta_dominance)
    elapsed = time.perf_counter() - start
    ok = worst == 0 and positive and elapsed < 5.0
    assert verdict("C3 recurrence", ok,
                   f"10 sets N=50, max |eq residual| {worst}, positivity {positive}, "
                   f"{elapsed:.2f}s (limit 5s)")


def test_c4_closed_forms(verdict):
    rng = random.Random(SEED + 4)
    fams = {"free": FamilyTag.FREE, "classical": FamilyTag.CLASSICAL,
            "sigma0": FamilyTag.SIGMA_ZERO, "tau0": FamilyTag.TAU_ZERO}
    matched = []
    for name, tag in fams.items():
        for _ in range(2):
            p = REGIMES[name](rng)
            eng = recurrence.build_tables(p, 31).sequence()
            fam = recurrence.closed_family(p, tag, 31)
            matched.append(recurrence.rescale_equivalent(eng, fam, 30))
    worst = 0.0
    for _ in range(5):
        p = general_params(rng)
        if (1 - p.q) ** 2 == 4 * p.sigma * p.tau:
            continue
        tbl = recurrence.build_tables(p, 50)
        for n in range(1, 51):
            a, b = recurrence.closed_alpha_beta(p.as_float(), n)
            ra, rb = float(tbl.alpha[n]), float(tbl.beta[n])
            worst = max(worst, abs(a - ra) / max(abs(ra), 1e-300) if ra else abs(a),
                        abs(b - rb) / abs(rb))
    ok = all(matched) and worst <= 1e-10
    assert verdict("C4 closed forms", ok,
                   f"{sum(matched)}/{len(matched)} exact rescale matches to N=30, "
                   f"alpha-beta max rel {worst:.1e} (limit 1e-10)")


def test_c5_operators(verdict):
    start = time.perf_counter()
    table_worst = max(r["max_abs"] for q in (F(-1, 2), F(0), F(1, 2), F(1))
                      for r in qops.table1_verify(q, 30).values())
    qm = ParamSet.exact(q=F(1, 2), theta=F(1, 3), tau=F(1, 5))
    bp = ParamSet.exact(q=F(0), eta=F(1, 4), theta=F(1, 2))
    ccom_ok, extract_ok = True, True
    for tag, p in ((FamilyTag.QMEIXNER, qm), (FamilyTag.BIPOISSON, bp)):
        x, y = qops.realization(tag, p, 32)
        xd, yd = qops.dual_realization(tag, p, 32)
        ccom_ok &= qops.verify_ccom(x, y, p)["zero"] and qops.verify_ccom(xd, yd, p, dual=True)["zero"]
        seq = recurrence.closed_family(p, tag, 31)
        for t in (F(1), F(5, 2)):
            extract_ok &= all(qops.extract_recurrence(x, y, t, n) == seq[n].at(t) for n in range(31))
    elapsed = time.perf_counter() - start
    ok = table_worst == 0 and ccom_ok and extract_ok and elapsed < 10.0
    assert verdict("C5 operators", ok,
                   f"commutator table max |residual| {table_worst}, ccom {ccom_ok}, extract n<=30 {extract_ok}, "
                   f"{elapsed:.2f}s (limit 10s)")


def test_c6_matrix(verdict):
    rng = random.Random(SEED + 6)
    sets = _regime_sets(rng)
    s, t, u = F(1), F(2), F(3)
    start = time.perf_counter()
    worst = F(0)
    moments_ok = True
    for p in sets:
        tbl = recurrence.build_tables(p, 40)
        rep = matrix.verify_matrix(tbl, p, s, t, u, 40)
        worst = max(worst, rep.ccom_max, rep.quadratic_max, rep.proportional_max)
        mp = matrix.moment_polys(tbl, 3, 40)
        moments_ok &= mp[0] == [1] and mp[1] == [0] and mp[2] == [0, 1]
        if p.sigma == 0:
            for tt in (F(1, 2), F(2)):
                want = tt * (p.eta * tt + p.theta + p.eta * p.tau)
                moments_ok &= matrix.poly_eval(mp[3], tt) == want == matrix.brute_force_moment(tbl, tt, 3)
    elapsed = time.perf_counter() - start
    ok = worst == 0 and moments_ok and elapsed < 30.0
    assert verdict("C6 matrix", ok,
                   f"10 sets N=40 block 38, max |residual| {worst}, moments {moments_ok}, "
                   f"{elapsed:.2f}s (limit 30s)")


def test_c7_quadrature(verdict):
    p = ParamSet.exact(q=F(1, 2), theta=F(1, 3), tau=F(1, 5))
    pf = p.as_float()
    M = 30
    start = time.perf_counter()
    seq = recurrence.closed_family(p, FamilyTag.QMEIXNER, 2 * M + 2)
    w_err, off, exact_err = 0.0, 0.0, 0.0
    nonneg = True
    mp = matrix.moment_polys(seq, 2 * M - 1, 2 * M + 1)
    for t in (1, 2):
        rule = quadrature.golub_welsch(seq, t, M)
        nonneg &= bool(rule.weights.min() >= 0)
        w_err = max(w_err, abs(rule.weights.sum() - 1))
        off = max(off, quadrature.orthogonality_check(seq, t, M, rule).max_offdiag)
        exact_err = max(exact_err, max(quadrature.exactness_errors(rule, [matrix.poly_eval(m, F(t)) for m in mp])))
    mc = quadrature.martingale_check(pf, 1, 2, 8, M)
    ck = quadrature.chapman_kolmogorov(pf, 0.5, 1, 2, 3, M)
    elapsed = time.perf_counter() - start
    ok = (nonneg and w_err <= 1e-12 and off < 1e-8 and exact_err <= 1e-10 and mc.max_deviation < 1e-8
          and abs(mc.covariance - 1) <= 1e-8 and ck <= 1e-7 and elapsed < 30.0)
    assert verdict("C7 quadrature", ok,
                   f"weights>=0 {nonneg}, |sum-1| {w_err:.1e}, gram off {off:.1e}, exactness {exact_err:.1e}, "
                   f"martingale {mc.max_deviation:.1e}, cov-s {abs(mc.covariance - 1):.1e}, CK {ck:.1e}, "
                   f"{elapsed:.2f}s (limit 30s)")


def test_c8_cli(verdict):
    start = time.perf_counter()
    results = []
    for name in ("brownian", "qmeixner", "bipoisson", "free", "classical"):
        proc = subprocess.run([sys.executable, "-m", "harnesslab", "verify-all", "--params", name],
                              capture_output=True, text=True)
        try:
            jsonschema.validate(json.loads(proc.stdout), REPORT_SCHEMA)
            valid = True
        except (ValueError, jsonschema.ValidationError):
            valid = False
        results.append((name, proc.returncode, valid))
    elapsed = time.perf_counter() - start
    ok = all(code == 0 and valid for _, code, valid in results) and elapsed < 120.0
    summary = ", ".join(f"{n}={c}" for n, c, _ in results)
    assert verdict("C8 cli", ok, f"exit codes {summary}, schema valid {all(v for *_, v in results)}, "
                                 f"{elapsed:.1f}s (limit 120s)")
