"""Three-term recurrences of the orthogonal martingale polynomials.

The polynomials satisfy

    x p_n(x;t) = a_n(t) p_{n+1}(x;t) + b_n(t) p_n(x;t) + c_n(t) p_{n-1}(x;t)

with coefficients affine in t.  :func:`build_tables` runs the general engine
(non-linear recursion for alpha/beta, linear recursions for gamma/delta/omega);
:func:`closed_family` returns the explicit recurrences known for special slices
of parameter space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (DegenerateDenominator, FamilyMismatch, PositivityViolated,
                     RepeatedRoot)
from .params import FamilyTag, ParamSet, classify, time_invert
from .qops import q_number
from .scalars import Scalar, equal, exact_sqrt, is_exact, is_zero


@dataclass(frozen=True)
class LinPoly:
    """slope * t + intercept."""

    slope: Scalar
    intercept: Scalar

    def __call__(self, t):
        return self.slope * t + self.intercept

    def coeffs(self):
        """Coefficients in increasing powers of t."""
        return (self.intercept, self.slope)

    def __mul__(self, other: "LinPoly"):
        return (self.intercept * other.intercept,
                self.slope * other.intercept + self.intercept * other.slope,
                self.slope * other.slope)

    def reversed(self) -> "LinPoly":
        """t * f(1/t)."""
        return LinPoly(self.intercept, self.slope)


@dataclass(frozen=True)
class ThreeTermCoeffs:
    n: int
    a: LinPoly
    b: LinPoly
    c: LinPoly

    def at(self, t):
        return self.a(t), self.b(t), self.c(t)


# -- general engine -------------------------------------------------------------

@dataclass
class RecurrenceTable:
    """Greek sequences of the general engine, indexed as in the recursions.

    ``alpha``/``beta`` run over 0..N+2 (index 0 is the convention alpha_0 = beta_0 = 0),
    ``gamma``/``delta`` over 0..N, ``omega``/``epsilon``/``phi`` over 0..N with an
    unused slot at 0.
    """

    params: ParamSet
    N: int
    alpha: list
    beta: list
    gamma: list
    delta: list
    omega: list
    epsilon: list = field(default_factory=list)
    phi: list = field(default_factory=list)

    def lam(self, n, k):
        if n <= 0:
            return 0 * self.params.q
        st = self.params.sigma_tau
        return self.beta[n] * self.beta[n + k] - st * self.alpha[n] * self.alpha[n + k]

    @property
    def exact(self) -> bool:
        return self.params.is_exact

    def a(self, n) -> LinPoly:
        return LinPoly(self.params.sigma * self.alpha[n + 1], self.beta[n + 1])

    def b(self, n) -> LinPoly:
        return LinPoly(self.gamma[n], self.delta[n])

    def c(self, n) -> LinPoly:
        if n == 0:
            z = 0 * self.params.q
            return LinPoly(z, z)
        return LinPoly(self.epsilon[n], self.phi[n])

    def c_product_form(self, n) -> LinPoly:
        """(beta_n t + tau alpha_n) omega_n, the second expression for c_n."""
        if n == 0:
            z = 0 * self.params.q
            return LinPoly(z, z)
        w = self.omega[n]
        return LinPoly(self.beta[n] * w, self.params.tau * self.alpha[n] * w)

    def coeffs(self, n) -> ThreeTermCoeffs:
        if not 0 <= n <= self.N:
            raise IndexError(f"n={n} outside 0..{self.N}")
        return ThreeTermCoeffs(n, self.a(n), self.b(n), self.c(n))

    def sequence(self, N=None):
        N = self.N if N is None else N
        return [self.coeffs(n) for n in range(N + 1)]


def alpha_beta(p: ParamSet, n_max: int):
    """Iterate the linear map (alpha, beta) -> (q alpha + beta, -sigma tau alpha + beta)."""
    one = 1 + 0 * p.q
    alpha, beta = [0 * one, 0 * one], [0 * one, one]
    st = p.sigma_tau
    for _ in range(2, n_max + 1):
        a, b = alpha[-1], beta[-1]
        alpha.append(p.q * a + b)
        beta.append(-st * a + b)
    return alpha, beta


def omega2(p: ParamSet):
    st = p.sigma_tau
    den = (1 - st) ** 2 * (1 - st * (2 + p.q))
    if is_zero(den):
        raise DegenerateDenominator(2, "omega_2 denominator")
    return (1 + p.q) * ((1 - st) ** 2 + (p.eta + p.theta * p.sigma)
                        * (p.theta + p.eta * p.tau)) / den


def build_tables(p: ParamSet, N: int) -> RecurrenceTable:
    if N < 1:
        raise ValueError("N must be at least 1")
    alpha, beta = alpha_beta(p, N + 2)
    zero = 0 * p.q
    tbl = RecurrenceTable(p, N, alpha, beta, [zero], [zero], [zero, 1 + zero])
    st = p.sigma_tau
    qs = p.q + st
    eta, theta, sigma, tau = p.eta, p.theta, p.sigma, p.tau
    for n in range(0, N):
        l20 = tbl.lam(n + 2, 0)
        if is_zero(l20):
            raise DegenerateDenominator(n + 2, "lambda_{n,0}")
        l02 = tbl.lam(n, 2)
        cross = alpha[n + 2] * beta[n] - beta[n + 2] * alpha[n]
        g, d = tbl.gamma[n], tbl.delta[n]
        u1 = eta * tau * alpha[n + 1] + theta * beta[n + 1]
        u2 = theta * sigma * alpha[n + 1] + eta * beta[n + 1]
        tbl.gamma.append((qs * (l02 * g + cross * sigma * d)
                          + sigma * alpha[n + 2] * u1 + beta[n + 2] * u2) / l20)
        tbl.delta.append((qs * (l02 * d + cross * tau * g)
                          + beta[n + 2] * u1 + tau * alpha[n + 2] * u2) / l20)
    if N >= 2:
        tbl.omega.append(omega2(p))
    for n in range(2, N):
        l11 = tbl.lam(n + 1, 1)
        if is_zero(l11):
            raise DegenerateDenominator(n + 1, "lambda_{n,1}")
        g, d = tbl.gamma[n], tbl.delta[n]
        free_term = 1 + g * (tau * g - d + theta) + d * (p.q * g + sigma * d + eta)
        tbl.omega.append((qs * tbl.lam(n - 1, 1) * tbl.omega[n] + free_term) / l11)
    tbl.epsilon = [zero] + [tbl.omega[n] * beta[n] for n in range(1, N + 1)]
    tbl.phi = [zero] + [tau * tbl.omega[n] * alpha[n] for n in range(1, N + 1)]
    return tbl


def omega_step(tbl: RecurrenceTable, n: int):
    """Right-hand side of the omega recursion, giving omega_{n+1} for n >= 2.

    The recursion does not extend to n = 1; omega_2 has its own closed form.
    """
    if n < 2:
        raise ValueError("the omega recursion starts at n = 2")
    p = tbl.params
    g, d = tbl.gamma[n], tbl.delta[n]
    free_term = 1 + g * (p.tau * g - d + p.theta) + d * (p.q * g + p.sigma * d + p.eta)
    return ((p.q + p.sigma_tau) * tbl.lam(n - 1, 1) * tbl.omega[n] + free_term) / tbl.lam(n + 1, 1)


def coeffs_at(tbl: RecurrenceTable, n: int, t):
    if t < 0:
        raise ValueError("t must be non-negative")
    return tbl.coeffs(n).at(t)


def closed_alpha_beta(p: ParamSet, n: int):
    """alpha_n, beta_n from the explicit two-root formula."""
    disc = (1 + p.q) ** 2 - 4 * (p.q + p.sigma_tau)
    if is_zero(disc):
        raise RepeatedRoot("(1+q)^2 = 4(q + sigma tau); iterate instead")
    if disc < 0:
        raise ValueError("complex roots: need q < 1 - 2 sqrt(sigma tau)")
    if n == 1:
        return 0 * p.q, 1 + 0 * p.q
    r = exact_sqrt(disc) if is_exact(disc) else None
    if r is None:
        r = math.sqrt(disc)
    lp, lm = (1 + p.q + r) / 2, (1 + p.q - r) / 2
    a = (lp ** (n - 1) - lm ** (n - 1)) / (lp - lm)
    b = (lp ** (n - 1) * (1 - lm) + lm ** (n - 1) * (lp - 1)) / (lp - lm)
    return a, b


# -- residual and positivity diagnostics ------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    residuals: dict  # name -> list indexed from n = 1
    exact: bool

    @property
    def max_abs(self):
        vals = [abs(v) for seq in self.residuals.values() for v in seq]
        return max(vals) if vals else 0

    def passed(self, tol: float = 1e-10) -> bool:
        if self.exact:
            return all(v == 0 for seq in self.residuals.values() for v in seq)
        return self.max_abs <= tol


def eq_terms(tbl: RecurrenceTable, n: int) -> dict:
    """Signed terms of (eq1)-(eq5) at index n, moved to one side (sum = residual)."""
    p = tbl.params
    q, eta, theta, sigma, tau = p.q, p.eta, p.theta, p.sigma, p.tau
    al, be, ga, de = tbl.alpha, tbl.beta, tbl.gamma, tbl.delta
    ep, ph = tbl.epsilon, tbl.phi
    t1 = [sigma ** 2 * tau * al[n] * al[n + 1], sigma * al[n] * be[n + 1] * q,
          sigma * be[n] * be[n + 1], -sigma * al[n + 1] * be[n]]
    t2 = [be[n + 1] * ga[n + 1], sigma * al[n + 1] * de[n],
          -sigma * al[n + 1] * ga[n] * tau, -sigma * al[n + 1] * ga[n + 1] * tau,
          -sigma * al[n + 1] * de[n + 1] * q, -be[n + 1] * ga[n] * q,
          -be[n + 1] * de[n] * sigma, -be[n + 1] * de[n + 1] * sigma,
          -sigma * al[n + 1] * theta, -be[n + 1] * eta]
    t3 = [be[n + 1] * ep[n + 1], ga[n] * de[n], sigma * al[n] * ph[n],
          -sigma * al[n + 1] * ep[n + 1] * tau, -ga[n] ** 2 * tau, -sigma * al[n] * ep[n] * tau,
          -sigma * al[n + 1] * ph[n + 1] * q, -ga[n] * de[n] * q, -be[n] * ep[n] * q,
          -be[n + 1] * ph[n + 1] * sigma, -de[n] ** 2 * sigma, -be[n] * ph[n] * sigma,
          -ga[n] * theta, -de[n] * eta, -1 + 0 * q]
    t4 = [ga[n - 1] * ph[n], de[n] * ep[n],
          -ga[n - 1] * ep[n] * tau, -ga[n] * ep[n] * tau,
          -ga[n] * ph[n] * q, -de[n - 1] * ep[n] * q,
          -de[n - 1] * ph[n] * sigma, -de[n] * ph[n] * sigma,
          -ep[n] * theta, -ph[n] * eta]
    t5 = [ep[n] * ph[n + 1], -ep[n] * ep[n + 1] * tau, -ep[n + 1] * ph[n] * q,
          -ph[n] * ph[n + 1] * sigma]
    return {"eq1": t1, "eq2": t2, "eq3": t3, "eq4": t4, "eq5": t5}


def eq_residuals(tbl: RecurrenceTable, n: int) -> dict:
    return {k: sum(v[1:], v[0]) for k, v in eq_terms(tbl, n).items()}


def verify_eq1_eq5(tbl: RecurrenceTable) -> ResidualReport:
    """Residuals of (eq1)-(eq5) for 1 <= n <= N-1.

    Exact tables report raw residuals.  Float tables report each residual divided
    by the sum of the absolute values of its terms, since omega_n can grow
    geometrically and absolute residuals then say nothing about accuracy.
    """
    exact = tbl.exact
    out = {k: [] for k in ("eq1", "eq2", "eq3", "eq4", "eq5")}
    for n in range(1, tbl.N):
        for k, terms in eq_terms(tbl, n).items():
            r = sum(terms[1:], terms[0])
            if not exact:
                r = r / max(1.0, sum(abs(x) for x in terms))
            out[k].append(r)
    out["initial"] = [tbl.alpha[1], tbl.beta[1] - 1, tbl.gamma[0], tbl.delta[0],
                      tbl.omega[1] - 1, tbl.epsilon[1] - 1, tbl.phi[1]]
    out["c_forms"] = []
    for n in range(1, tbl.N + 1):
        c1, c2 = tbl.c(n), tbl.c_product_form(n)
        d = [c1.slope - c2.slope, c1.intercept - c2.intercept]
        if not exact:
            d = [v / max(1.0, abs(c1.slope), abs(c1.intercept)) for v in d]
        out["c_forms"] += d
    return ResidualReport(out, exact)


def _positive(x) -> bool:
    return x > 0


def beta_dominates(alpha_n, beta_n, st) -> bool:
    """beta_n > sqrt(sigma tau) alpha_n >= 0, decided with squares in exact mode."""
    if alpha_n < 0 or beta_n <= 0:
        return False
    if is_exact(st) and is_exact(alpha_n) and is_exact(beta_n):
        return beta_n * beta_n > st * alpha_n * alpha_n
    return beta_n > math.sqrt(st) * alpha_n


def sharper_bounds(p: ParamSet) -> dict:
    """Sufficient conditions (cases 1-4) for omega_n > 0 in the sigma = 0 family."""
    q, eta, theta, tau = p.q, p.eta, p.theta, p.tau
    qrange = -1 < q <= 1
    et = eta * theta
    case1 = qrange and et >= 0
    case2 = qrange and is_zero(tau) and 1 + et > max(q, 0)
    case3 = -1 < q < 1 and theta * theta < 4 * tau
    case4 = False
    if (-1 < q < 1 and tau > 0 and et < 0 and 1 + et + tau * eta * eta > 0
            and theta * theta >= 4 * tau):
        root = (abs(float(theta)) + math.sqrt(float(theta * theta - 4 * tau))) / (
            2 * float(tau) * abs(float(eta)))
        case4 = 1 + min(float(q), 0.0) > root
    return {"case1": case1, "case2": case2, "case3": case3, "case4": case4,
            "any": case1 or case2 or case3 or case4}


@dataclass(frozen=True)
class PositivityReport:
    lam: dict          # (n, k) -> bool
    beta_dominance: list
    omega_positive: list
    ac_positive: list  # a_{n-1}(1) c_n(1) > 0, n = 1..N
    sharper: dict | None

    @property
    def ok(self) -> bool:
        return (all(self.lam.values()) and all(self.beta_dominance)
                and all(self.omega_positive))

    def to_dict(self) -> dict:
        return {
            "lambda_positive": all(self.lam.values()),
            "beta_dominance": all(self.beta_dominance),
            "omega_positive": all(self.omega_positive),
            "ac_positive": all(self.ac_positive),
            "sharper_bounds": self.sharper,
            "ok": self.ok,
        }


def positivity_report(tbl: RecurrenceTable, p: ParamSet | None = None, t=1) -> PositivityReport:
    p = tbl.params if p is None else p
    N = tbl.N
    lam = {}
    for n in range(1, N + 1):
        for k in (0, 1, 2):
            if n + k <= N + 2:
                lam[(n, k)] = _positive(tbl.lam(n, k))
    dom = [beta_dominates(tbl.alpha[n], tbl.beta[n], p.sigma_tau) for n in range(1, N + 2)]
    om = [_positive(tbl.omega[n]) for n in range(1, N + 1)]
    ac = [_positive(tbl.a(n - 1)(t) * tbl.c(n)(t)) for n in range(1, N + 1)]
    sharper = sharper_bounds(p) if is_zero(p.sigma) else None
    return PositivityReport(lam, dom, om, ac, sharper)


# -- closed-form families -----------------------------------------------------------

def _generic_low(p: ParamSet):
    """Coefficients for n = 0 and n = 1, shared by every family."""
    zero, one = 0 * p.q, 1 + 0 * p.q
    st = p.sigma_tau
    b1 = LinPoly((p.eta + p.theta * p.sigma) / (1 - st), (p.eta * p.tau + p.theta) / (1 - st))
    return [
        ThreeTermCoeffs(0, LinPoly(zero, one), LinPoly(zero, zero), LinPoly(zero, zero)),
        ThreeTermCoeffs(1, LinPoly(p.sigma, one), b1, LinPoly(one, zero)),
    ]


def _free(p: ParamSet, N: int):
    st = p.sigma_tau
    eta, theta, sigma, tau = p.eta, p.theta, p.sigma, p.tau
    K = (1 - st) ** 2 + (eta + theta * sigma) * (theta + eta * tau)
    if not K > 0:
        raise PositivityViolated(2, K)
    out = _generic_low(p)[: N + 1]
    a = LinPoly(sigma, 1 + 0 * p.q)
    b = LinPoly((eta + 2 * theta * sigma + eta * st) / (1 - st) ** 2,
                (theta + 2 * eta * tau + theta * st) / (1 - st) ** 2)
    for n in range(2, N + 1):
        w = K / (1 - st) ** (3 if n == 2 else 4)
        out.append(ThreeTermCoeffs(n, a, b, LinPoly(w, w * tau)))
    return out


def classical_gamma_delta(p: ParamSet, n: int, rho):
    eta, theta, sigma, tau = p.eta, p.theta, p.sigma, p.tau
    pref = n * (1 + (n - 2) * rho) / (
        (1 - rho) ** 2 * (1 + (2 * n - 1) * rho) * (1 + (2 * n - 3) * rho))
    m = (n - 1) ** 2
    g = pref * (eta + (2 * n - 1) * theta * sigma + (2 * n - 3) * eta * rho
                + 2 * m * eta * rho ** 2 + (2 * m - 1) * theta * sigma * rho)
    d = pref * (theta + (2 * n - 1) * eta * tau + (2 * n - 3) * theta * rho
                + 2 * m * theta * rho ** 2 + (2 * m - 1) * eta * tau * rho)
    return g, d


def classical_omega(p: ParamSet, n: int, rho):
    eta, theta, sigma, tau = p.eta, p.theta, p.sigma, p.tau
    first = n * (1 + (n - 3) * rho) / (
        (1 - rho) ** 2 * (1 + (2 * n - 2) * rho) * (1 + (2 * n - 4) * rho))
    second = (n * (n - 1) * (1 + (n - 2) * rho) * (1 + (n - 3) * rho)
              / ((1 - rho) ** 4 * (1 + (2 * n - 2) * rho) * (1 + (2 * n - 3) * rho) ** 2
                 * (1 + (2 * n - 4) * rho)))
    second *= (((1 + (n - 2) * rho) * theta + (n - 1) * eta * tau)
               * ((1 + (n - 2) * rho) * eta + (n - 1) * theta * sigma))
    return first + second


def _classical(p: ParamSet, N: int):
    rho = (1 - p.q) / 2
    out = _generic_low(p)[: N + 1]
    for n in range(2, N + 1):
        g, d = classical_gamma_delta(p, n, rho)
        w = classical_omega(p, n, rho)
        if not w > 0:
            raise PositivityViolated(n, w)
        out.append(ThreeTermCoeffs(
            n, LinPoly(n * p.sigma, 1 + (n - 1) * rho), LinPoly(g, d),
            LinPoly(w * (1 + (n - 2) * rho), w * p.tau * (n - 1))))
    return out


def _sigma_zero(p: ParamSet, N: int):
    eta, theta, tau, q = p.eta, p.theta, p.tau, p.q
    zero, one = 0 * q, 1 + 0 * q
    out = [ThreeTermCoeffs(0, LinPoly(zero, one), LinPoly(zero, zero), LinPoly(zero, zero))]
    for n in range(1, N + 1):
        qn, qm = q_number(n, q), q_number(n - 1, q)
        w = 1 + qm * eta * theta + qm * qm * tau * eta * eta
        if not w > 0:
            raise PositivityViolated(n, w)
        b = LinPoly(eta * qn, (theta + (qn + qm) * eta * tau) * qn)
        c = LinPoly(w * qn, tau * qm * w * qn)
        out.append(ThreeTermCoeffs(n, LinPoly(zero, one), b, c))
    return out


def _tau_zero(p: ParamSet, N: int):
    """Time-inverse image of the sigma = 0 family.

    b_n carries the factor [n]_q; without it the recurrence disagrees with both
    the general engine and the sigma = 0 family under time inversion.
    """
    eta, theta, sigma, q = p.eta, p.theta, p.sigma, p.q
    zero, one = 0 * q, 1 + 0 * q
    out = [ThreeTermCoeffs(0, LinPoly(zero, one), LinPoly(zero, zero), LinPoly(zero, zero))]
    for n in range(1, N + 1):
        qn, qm = q_number(n, q), q_number(n - 1, q)
        w = 1 + qm * eta * theta + qm * qm * sigma * theta * theta
        if not w > 0:
            raise PositivityViolated(n, w)
        a = LinPoly(sigma * qn, one)
        b = LinPoly((eta + (qn + qm) * theta * sigma) * qn, theta * qn)
        c = LinPoly(w * qn, zero)
        out.append(ThreeTermCoeffs(n, a, b, c))
    return out


def _qmeixner(p: ParamSet, N: int):
    q, theta, tau = p.q, p.theta, p.tau
    zero, one = 0 * q, 1 + 0 * q
    out = [ThreeTermCoeffs(0, LinPoly(zero, one), LinPoly(zero, zero), LinPoly(zero, zero))]
    for n in range(1, N + 1):
        qn, qm = q_number(n, q), q_number(n - 1, q)
        out.append(ThreeTermCoeffs(n, LinPoly(zero, one), LinPoly(zero, theta * qn),
                                   LinPoly(qn, tau * qm * qn)))
    return out


def _bipoisson(p: ParamSet, N: int):
    q, eta, theta = p.q, p.eta, p.theta
    zero, one = 0 * q, 1 + 0 * q
    out = [ThreeTermCoeffs(0, LinPoly(zero, one), LinPoly(zero, zero), LinPoly(zero, zero))]
    for n in range(1, N + 1):
        qn, qm = q_number(n, q), q_number(n - 1, q)
        w = 1 + eta * theta * qm
        if not w > 0:
            raise PositivityViolated(n, w)
        out.append(ThreeTermCoeffs(n, LinPoly(zero, one), LinPoly(eta * qn, theta * qn),
                                   LinPoly(w * qn, zero)))
    return out


_FAMILIES = {
    FamilyTag.FREE: _free,
    FamilyTag.CLASSICAL: _classical,
    FamilyTag.SIGMA_ZERO: _sigma_zero,
    FamilyTag.TAU_ZERO: _tau_zero,
    FamilyTag.QMEIXNER: _qmeixner,
    FamilyTag.BIPOISSON: _bipoisson,
}


def closed_family(p: ParamSet, tag, N: int):
    tag = FamilyTag(tag)
    if tag == FamilyTag.GENERAL:
        return build_tables(p, N).sequence()
    if tag not in classify(p):
        raise FamilyMismatch(f"parameters {p.to_dict()} are not in family {tag.value}")
    return _FAMILIES[tag](p, N)


def auto_family(p: ParamSet) -> FamilyTag:
    """Most specific closed family for p, or GENERAL."""
    tags = classify(p)
    for tag in (FamilyTag.QMEIXNER, FamilyTag.BIPOISSON, FamilyTag.SIGMA_ZERO,
                FamilyTag.TAU_ZERO, FamilyTag.CLASSICAL, FamilyTag.FREE):
        if tag in tags:
            return tag
    return FamilyTag.GENERAL


def coefficient_sequence(p: ParamSet, N: int, family="general"):
    """Coefficients n = 0..N from a named family, the engine ("general") or "auto"."""
    tag = auto_family(p) if family == "auto" else FamilyTag(family)
    return closed_family(p, tag, N)


# -- comparison helpers -------------------------------------------------------------

def invariants(seq, N: int):
    """Normalization-free data of a recurrence: b_n and a_n c_{n+1} for n < N."""
    return [(seq[n].b.coeffs(), seq[n].a * seq[n + 1].c) for n in range(N)]


def _same(x, y, rel):
    return all(equal(u, v, rel) for u, v in zip(x, y))


def rescale_equivalent(seq1, seq2, N: int, rel: float = 1e-10) -> bool:
    if len(seq1) < N + 1 or len(seq2) < N + 1:
        raise ValueError("sequences must be defined for n = 0..N")
    for (b1, ac1), (b2, ac2) in zip(invariants(seq1, N), invariants(seq2, N)):
        if not (_same(b1, b2, rel) and _same(ac1, ac2, rel)):
            return False
    return True


def time_inverted_sequence(seq):
    """Recurrence of t X_{1/t} up to normalization: returned as invariants.

    a_n(1/t) c_{n+1}(1/t) t^2 and t b_n(1/t) are the invariants of the
    time-inverse process; coefficient lists are reversed accordingly.
    """
    return [(tuple(reversed(b)), tuple(reversed(ac))) for b, ac in invariants(seq, len(seq) - 1)]


def time_inversion_consistent(p: ParamSet, N: int, rel: float = 1e-10) -> bool:
    """tau = 0 family of p against the sigma = 0 family of the time-inverse."""
    lhs = time_inverted_sequence(closed_family(p, FamilyTag.TAU_ZERO, N))
    rhs = invariants(closed_family(time_invert(p), FamilyTag.SIGMA_ZERO, N), N)
    return all(_same(b1, b2, rel) and _same(c1, c2, rel) for (b1, c1), (b2, c2) in zip(lhs, rhs))


# -- polynomials ---------------------------------------------------------------------

def polynomial_coeffs(seq, t, n_max: int):
    """Coefficient lists (increasing powers of x) of p_0..p_{n_max} at time t."""
    if n_max > len(seq):
        raise IndexError("sequence too short")
    zero = 0 * seq[0].a(t)
    polys = [[1 + zero]]
    if n_max == 0:
        return polys
    a0, b0, _ = seq[0].at(t)
    polys.append([-b0 / a0, 1 / a0])
    for n in range(1, n_max):
        a, b, c = seq[n].at(t)
        prev, cur = polys[n - 1], polys[n]
        nxt = [zero] * (n + 2)
        for k, v in enumerate(cur):
            nxt[k + 1] += v
            nxt[k] -= b * v
        for k, v in enumerate(prev):
            nxt[k] -= c * v
        polys.append([v / a for v in nxt])
    return polys


def p2_closed(p: ParamSet, t):
    """Coefficients [x^0, x^1, x^2] of the degree-2 martingale polynomial."""
    st = p.sigma_tau
    d = 1 + p.sigma * t
    return [-t / d, -((p.eta + p.theta * p.sigma) * t + p.eta * p.tau + p.theta) / ((1 - st) * d),
            1 / d]


def evaluate(poly, x):
    acc = 0 * x
    for c in reversed(poly):
        acc = acc * x + c
    return acc
