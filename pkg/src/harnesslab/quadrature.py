"""Gauss rules from three-term recurrences and q-Meixner transition kernels.

Float only: nodes are eigenvalues of the symmetrized Jacobi matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import FamilyMismatch, NotSymmetrizable, EigenFailure
from .params import FamilyTag, ParamSet, classify
from .qops import q_number
from .recurrence import closed_family


@dataclass(frozen=True, eq=False)
class GaussRule:
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.nodes)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def moment(self, k: int) -> float:
        return float(np.dot(self.weights, self.nodes ** k))


@dataclass(frozen=True, eq=False)
class KernelRule:
    x: float
    s: float
    t: float
    rule: GaussRule


def jacobi_rule(a, b, c, m0: float = 1.0) -> GaussRule:
    """Rule from a_0..a_{M-2}, b_0..b_{M-1}, c_1..c_{M-1} (c indexed from 1)."""
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    M = len(b)
    if M == 0:
        raise ValueError("need at least one node")
    prod = a[: M - 1] * c[: M - 1]
    for n, v in enumerate(prod, start=1):
        if not v > 0:
            raise NotSymmetrizable(n, float(v))
    try:
        nodes, vecs = eigh_tridiagonal(b, np.sqrt(prod), lapack_driver="stev")
    except LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    weights = m0 * vecs[0, :] ** 2
    order = np.argsort(nodes, kind="stable")
    return GaussRule(nodes[order], weights[order])


def golub_welsch(seq, t, M: int) -> GaussRule:
    """M-point rule for the measure orthogonalizing the recurrence at time t."""
    if len(seq) < M:
        raise ValueError(f"need {M} coefficients, have {len(seq)}")
    t = float(t)
    a = [float(seq[n].a(t)) for n in range(M - 1)]
    b = [float(seq[n].b(t)) for n in range(M)]
    c = [float(seq[n].c(t)) for n in range(1, M)]
    return jacobi_rule(a, b, c)


def eval_polys(seq, t, x, n_max: int) -> np.ndarray:
    """Rows p_0(x;t)..p_{n_max}(x;t) evaluated at the points x."""
    t = float(t)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1, x.size))
    out[0] = 1.0
    prev = np.zeros_like(x)
    for n in range(n_max):
        a, b, c = (float(v) for v in seq[n].at(t))
        out[n + 1] = ((x - b) * out[n] - c * prev) / a
        prev = out[n]
    return out


def norms(seq, t, n_max: int) -> np.ndarray:
    """h_n = E p_n^2 = prod_{k=1}^n c_k / a_{k-1}."""
    t = float(t)
    h = np.ones(n_max + 1)
    for n in range(1, n_max + 1):
        h[n] = h[n - 1] * float(seq[n].c(t)) / float(seq[n - 1].a(t))
    return h


@dataclass(frozen=True)
class OrthogonalityReport:
    max_offdiag: float
    max_diag_rel: float
    weight_sum_error: float
    min_weight: float

    def passed(self, tol: float = 1e-8) -> bool:
        return (self.max_offdiag < tol and self.max_diag_rel < tol
                and self.weight_sum_error <= 1e-12 and self.min_weight >= 0)


def orthogonality_check(seq, t, M: int, rule: GaussRule | None = None) -> OrthogonalityReport:
    """Gram matrix of p_0..p_{M-1} under the rule, scaled by sqrt(h_m h_n)."""
    rule = golub_welsch(seq, t, M) if rule is None else rule
    P = eval_polys(seq, t, rule.nodes, M - 1)
    G = (P * rule.weights) @ P.T
    h = norms(seq, t, M - 1)
    scale = np.sqrt(np.outer(h, h))
    R = G / scale
    off = np.abs(R - np.diag(np.diag(R))).max() if M > 1 else 0.0
    diag = np.abs(np.diag(R) - 1).max()
    return OrthogonalityReport(float(off), float(diag), abs(float(rule.weights.sum()) - 1),
                               float(rule.weights.min()))


def exactness_errors(rule: GaussRule, moments) -> list:
    """Relative error of sum w x^k against exact moments m_k, k = 0..len(moments)-1.

    Moments that vanish exactly are compared in absolute terms.
    """
    out = []
    for k, m in enumerate(moments):
        m = float(m)
        err = abs(rule.moment(k) - m)
        out.append(err / abs(m) if m != 0 else err)
    return out


def interlaces(coarse: GaussRule, fine: GaussRule) -> bool:
    """Strict interlacing of M and M+1 point nodes."""
    x, y = coarse.nodes, fine.nodes
    if len(y) != len(x) + 1:
        raise ValueError("need rules of sizes M and M+1")
    return bool(np.all(y[:-1] < x) and np.all(x < y[1:]))


# -- q-Meixner transition kernels ------------------------------------------------------------

def _require_qmeixner(p: ParamSet):
    if FamilyTag.QMEIXNER not in classify(p):
        raise FamilyMismatch("transition kernels need sigma = eta = 0")


def kernel_coeffs(p: ParamSet, x, s, t, M: int):
    """a, b, c arrays of the transition recurrence in y (monic, c indexed from 1)."""
    q, theta, tau = float(p.q), float(p.theta), float(p.tau)
    x, s, t = float(x), float(s), float(t)
    b = [theta * q_number(n, q) + x * q ** n for n in range(M)]
    c = [(t - s * q ** (n - 1) + tau * q_number(n - 1, q)) * q_number(n, q) for n in range(1, M)]
    return [1.0] * (M - 1), b, c


def qmeixner_kernel(p: ParamSet, x, s, t, M: int) -> KernelRule:
    _require_qmeixner(p)
    if not 0 <= s < t:
        raise ValueError("need 0 <= s < t")
    return KernelRule(float(x), float(s), float(t), jacobi_rule(*kernel_coeffs(p, x, s, t, M)))


def marginal_rule(p: ParamSet, t, M: int) -> GaussRule:
    return golub_welsch(closed_family(p, FamilyTag.QMEIXNER, M), t, M)


@dataclass(frozen=True)
class MartingaleReport:
    deviations: dict   # n -> max over conditioning nodes of scaled deviation
    covariance: float  # sum_x W(x) x E(X_t | X_s = x)
    s: float
    t: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values()) if self.deviations else 0.0

    def passed(self, tol: float = 1e-8) -> bool:
        return self.max_deviation < tol and abs(self.covariance - self.s) < tol


def martingale_check(p: ParamSet, s, t, n_max: int, M: int) -> MartingaleReport:
    """E(p_n(X_t;t) | X_s = x) - p_n(x;s) over the nodes x of the X_s marginal rule."""
    _require_qmeixner(p)
    if n_max > min(10, M // 2):
        raise ValueError("need n <= min(10, M/2)")
    seq = closed_family(p, FamilyTag.QMEIXNER, M)
    outer = marginal_rule(p, s, M)
    dev = {n: 0.0 for n in range(1, n_max + 1)}
    cov = 0.0
    for x, W in zip(outer.nodes, outer.weights):
        k = qmeixner_kernel(p, x, s, t, M).rule
        Pt = eval_polys(seq, t, k.nodes, n_max)
        Ps = eval_polys(seq, s, np.array([x]), n_max)[:, 0]
        for n in range(1, n_max + 1):
            lhs = float(np.dot(k.weights, Pt[n]))
            scale = max(1.0, float(np.dot(k.weights, np.abs(Pt[n]))), abs(Ps[n]))
            dev[n] = max(dev[n], abs(lhs - Ps[n]) / scale)
        cov += W * x * float(np.dot(k.weights, k.nodes))
    return MartingaleReport(dev, cov, float(s), float(t))


def chapman_kolmogorov(p: ParamSet, x, s, t, u, M: int, order: int = 6) -> float:
    """Max relative gap between moments of P_{s,u}(x,.) and of P_{t,u} composed with P_{s,t}."""
    _require_qmeixner(p)
    direct = qmeixner_kernel(p, x, s, u, M).rule
    first = qmeixner_kernel(p, x, s, t, M).rule
    comp = np.zeros(order + 1)
    scale = np.zeros(order + 1)
    for y, w in zip(first.nodes, first.weights):
        r = qmeixner_kernel(p, y, t, u, M).rule
        for k in range(order + 1):
            comp[k] += w * float(np.dot(r.weights, r.nodes ** k))
            scale[k] += w * float(np.dot(r.weights, np.abs(r.nodes) ** k))
    worst = 0.0
    for k in range(order + 1):
        d = direct.moment(k)
        worst = max(worst, abs(d - comp[k]) / max(scale[k], abs(d), 1.0))
    return worst
