"""Linear and quadratic regression coefficients of a quadratic harness.

Notation follows the harness literature: for times s < t < u the conditional mean
of X_t given the past-and-future field is ``a*X_s + b*X_u`` and the conditional
second moment is the quadratic form
``A x^2 + B x y + C y^2 + D x + E y + F`` evaluated at ``(X_s, X_u)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateTimes, ZeroDenominator, ZeroF
from .params import ParamSet
from .scalars import Scalar, equal, is_exact, is_zero


@dataclass(frozen=True)
class TimeTriple:
    """Times ``s <= t <= u`` with ``0 < s < u``.

    The endpoints t = s and t = u are accepted because the closed forms extend
    continuously there; routines that need a genuine interior point call
    :meth:`require_interior`.
    """

    s: Scalar
    t: Scalar
    u: Scalar

    def __post_init__(self):
        if not self.s > 0:
            raise DegenerateTimes(f"need s > 0, got s={self.s}")
        if not self.s < self.u:
            raise DegenerateTimes(f"need s < u, got s={self.s}, u={self.u}")
        if not (self.s <= self.t <= self.u):
            raise DegenerateTimes(f"need s <= t <= u, got {self.s}, {self.t}, {self.u}")

    def require_interior(self) -> "TimeTriple":
        if self.t == self.s or self.t == self.u:
            raise DegenerateTimes(f"need s < t < u, got {self.s}, {self.t}, {self.u}")
        return self

    def inverted(self) -> "TimeTriple":
        """Times (1/u, 1/t, 1/s) seen by the time-inverse process."""
        return TimeTriple(1 / self.u, 1 / self.t, 1 / self.s)


@dataclass(frozen=True)
class LinCoeffs:
    a: Scalar
    b: Scalar


@dataclass(frozen=True)
class FormCoeffs:
    A: Scalar
    B: Scalar
    C: Scalar
    D: Scalar
    E: Scalar
    F: Scalar

    def as_tuple(self):
        return (self.A, self.B, self.C, self.D, self.E, self.F)

    def quadratic(self, x, y):
        return (self.A * x * x + self.B * x * y + self.C * y * y
                + self.D * x + self.E * y + self.F)

    def with_(self, **kw) -> "FormCoeffs":
        d = dict(zip("ABCDEF", self.as_tuple()))
        d.update(kw)
        return FormCoeffs(**d)


@dataclass(frozen=True)
class DeltaPair:
    delta: Scalar
    delta_tilde: Scalar


def deltas(s, u, x_s, x_u) -> DeltaPair:
    """Increment slope and its time-inverse counterpart for the pair (s, u)."""
    if s == u:
        raise DegenerateTimes("s == u")
    return DeltaPair((x_u - x_s) / (u - s), (u * x_s - s * x_u) / (u - s))


def harness_coeffs(tr: TimeTriple) -> LinCoeffs:
    s, t, u = tr.s, tr.t, tr.u
    return LinCoeffs((u - t) / (u - s), (t - s) / (u - s))


def lin(t, s, u) -> LinCoeffs:
    """harness_coeffs for loose times, as the chain identities index them."""
    return harness_coeffs(TimeTriple(s, t, u))


def denominator(p: ParamSet, s, u):
    return u * (1 + p.sigma * s) + p.tau - p.q * s


def form_coeffs(p: ParamSet, tr: TimeTriple) -> FormCoeffs:
    s, t, u = tr.s, tr.t, tr.u
    den = denominator(p, s, u)
    if is_zero(den):
        raise ZeroDenominator(f"u(1+sigma s)+tau-q s = 0 at s={s}, u={u}")
    w = (u - s) * den
    ut, ts = u - t, t - s
    return FormCoeffs(
        A=ut * (u * (1 + p.sigma * t) + p.tau - p.q * t) / w,
        B=ut * ts * (1 + p.q) / w,
        C=ts * (t * (1 + p.sigma * s) + p.tau - p.q * s) / w,
        D=ut * ts * (u * p.eta - p.theta) / w,
        E=ut * ts * (p.theta - s * p.eta) / w,
        F=ut * ts / den,
    )


def extract_params(fc: FormCoeffs, tr: TimeTriple) -> ParamSet:
    """Invert :func:`form_coeffs`: recover (q, eta, theta, sigma, tau)."""
    s, t, u = tr.s, tr.t, tr.u
    A, B, C, D, E, F = fc.as_tuple()
    if is_zero(F):
        raise ZeroF("F = 0; parameters are not identifiable")
    sigma = (A + B + C - 1) / F
    tau = (s * s * A + s * u * B + u * u * C - t * t) / F
    q = B * (u - s) / F - 1
    eta = (D + E) / F
    theta = (s * D + u * E) / F
    return ParamSet(q, eta, theta, sigma, tau)


def normalization_residual(fc: FormCoeffs, tr: TimeTriple):
    """s A + s B + u C + F - t, zero under the covariance normalization."""
    return tr.s * fc.A + tr.s * fc.B + tr.u * fc.C + fc.F - tr.t


def variance_bracket(p: ParamSet, d: DeltaPair):
    dl, dt = d.delta, d.delta_tilde
    return (1 + p.eta * dt + p.theta * dl + p.sigma * dt * dt + p.tau * dl * dl
            - (1 - p.q) * dl * dt)


def cond_variance_two_path(p: ParamSet, tr: TimeTriple, x_s, x_u):
    """Var(X_t | F_{s,u}) as E(X_t^2|.) - E(X_t|.)^2 from the regression coefficients."""
    fc = form_coeffs(p, tr)
    lc = harness_coeffs(tr)
    m = lc.a * x_s + lc.b * x_u
    return fc.quadratic(x_s, x_u) - m * m


def cond_variance(p: ParamSet, tr: TimeTriple, x_s, x_u, verify: bool = False):
    """Conditional variance in the Delta form; ``verify`` cross-checks the two-path value."""
    fc = form_coeffs(p, tr)
    value = fc.F * variance_bracket(p, deltas(tr.s, tr.u, x_s, x_u))
    if verify:
        other = cond_variance_two_path(p, tr, x_s, x_u)
        if not equal(value, other, rel=1e-10):
            raise AssertionError(f"conditional variance paths disagree: {value} vs {other}")
    return value


def one_sided_variance_left(p: ParamSet, s, t, x_s):
    """Var(X_t | F_{<=s}) for 0 < s < t."""
    if not 0 < s < t:
        raise DegenerateTimes("need 0 < s < t")
    return (t - s) / (1 + p.sigma * s) * (p.sigma * x_s * x_s + p.eta * x_s + 1)


def one_sided_variance_right(p: ParamSet, t, u, x_u):
    """Var(X_t | F_{>=u}) for 0 < t < u."""
    if not 0 < t < u:
        raise DegenerateTimes("need 0 < t < u")
    r = x_u / u
    return t * (u - t) / (u + p.tau) * (p.tau * r * r + p.theta * r + 1)


def inverted_F(p: ParamSet, tr: TimeTriple):
    """Normalizer of the time-inverse process at (s, t, u)."""
    s, t, u = tr.s, tr.t, tr.u
    return (u - t) * (t - s) / (u * (1 + p.tau * s) + p.sigma - p.q * s)


# -- chain identities ------------------------------------------------------------

CHAIN_NAMES = (
    "A1", "B1", "C1", "D1", "E1", "F1",
    "A2", "B2", "C2", "D2", "E2", "F2",
    "A3", "B3", "C3", "D3", "E3", "F3",
    "tmp",
)


def chain_identities(p: ParamSet, r, s, t, u) -> dict:
    """Residual (lhs - rhs) of every consistency identity linking four times r<s<t<u.

    Besides the 19 named identities this also returns the auxiliary relations used
    when deriving them (``B1_aux``, ``tau_aux``) and the normalization residual
    at the three triples involved.
    """
    if not (0 < r < s < t < u):
        raise DegenerateTimes(f"need 0 < r < s < t < u, got {r}, {s}, {t}, {u}")
    tsu, sru, srt, tru = (TimeTriple(s, t, u), TimeTriple(r, s, u),
                          TimeTriple(r, s, t), TimeTriple(r, t, u))
    a_tsu, b_tsu = _ab(tsu)
    a_sru, b_sru = _ab(sru)
    a_srt, b_srt = _ab(srt)
    a_tru, b_tru = _ab(tru)
    Q_sru = form_coeffs(p, sru)
    Q_tru = form_coeffs(p, tru)
    Q_tsu = form_coeffs(p, tsu)
    As, Bs, Cs, Ds, Es, Fs = Q_sru.as_tuple()
    At, Bt, Ct, Dt, Et, Ft = Q_tru.as_tuple()
    Am, Bm, Cm, Dm, Em, Fm = Q_tsu.as_tuple()
    res = {
        "A1": a_tsu * As - (b_srt * At + a_srt * a_tru),
        "B1": a_tsu * Bs - b_srt * Bt,
        "C1": b_tsu * b_sru + a_tsu * Cs - b_srt * Ct,
        "D1": a_tsu * Ds - b_srt * Dt,
        "E1": a_tsu * Es - b_srt * Et,
        "F1": a_tsu * Fs - b_srt * Ft,
        "A2": At - Am * As,
        "B2": Bt - (Am * Bs + Bm * a_sru),
        "C2": Ct - (Am * Cs + Bm * b_sru + Cm),
        "D2": Dt - (Am * Ds + Dm * a_sru),
        "E2": Et - (Am * Es + Dm * b_sru + Em),
        "F2": Ft - (Am * Fs + Fm),
    }
    k = a_tsu - b_srt * Am
    res.update({
        "A3": As * k - a_srt * a_tru,
        "B3": Bs * k - b_srt * Bm * a_sru,
        "C3": Cs * k - (b_srt * (Bm * b_sru + Cm) - b_tsu * b_sru),
        "D3": Ds * k - b_srt * Dm * a_sru,
        "E3": Es * k - b_srt * (Dm * b_sru + Em),
        "F3": Fs * k - b_srt * Fm,
        "tmp": a_tsu + b_tsu * b_sru - (b_srt + a_srt * a_tru),
        "B1_aux": b_tsu * a_sru - a_srt * b_tru,
        "tau_aux": s * s * a_tsu + u * u * b_tsu * b_sru - (t * t * b_srt + r * r * a_srt * a_tru),
    })
    for name, tr, fc in (("norm_tsu", tsu, Q_tsu), ("norm_sru", sru, Q_sru),
                         ("norm_tru", tru, Q_tru)):
        res[name] = normalization_residual(fc, tr)
    return res


def _ab(tr):
    lc = harness_coeffs(tr)
    return lc.a, lc.b


@dataclass(frozen=True)
class ChainReport:
    residuals: dict
    exact: bool

    @property
    def max_abs(self):
        return max(abs(v) for v in self.residuals.values())

    def passed(self, tol: float = 1e-10) -> bool:
        if self.exact:
            return all(v == 0 for v in self.residuals.values())
        return all(abs(v) <= tol for v in self.residuals.values())


def verify_chain_identities(p: ParamSet, r, s, t, u) -> ChainReport:
    res = chain_identities(p, r, s, t, u)
    exact = p.is_exact and all(is_exact(x) for x in (r, s, t, u))
    return ChainReport(res, exact)
