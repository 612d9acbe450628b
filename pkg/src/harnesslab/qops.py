"""q-numbers and truncated operators on polynomials in an auxiliary variable z.

An operator is stored as the (N+1) x (N+1) matrix whose column j holds the
coefficients of Op(z^j).  Degree-raising operators push mass past z^N, so each
operator carries ``validity``: the largest j for which column j is exact.
``shift`` bounds the degree change, deg Op(z^j) <= j + shift.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import FamilyMismatch, NotBanded, TruncationExceeded
from .params import FamilyTag, ParamSet, classify
from .scalars import is_exact


def q_number(n: int, q):
    """[n]_q = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    acc = 0 * q
    for _ in range(n):
        acc = 1 + q * acc
    return acc


def q_factorial(n: int, q):
    acc = 1 + 0 * q
    for k in range(1, n + 1):
        acc = acc * q_number(k, q)
    return acc


def _zeros(N: int, exact: bool):
    if exact:
        m = np.empty((N + 1, N + 1), dtype=object)
        m.fill(Fraction(0))
        return m
    return np.zeros((N + 1, N + 1))


@dataclass(frozen=True, eq=False)
class SeriesOperator:
    mat: np.ndarray
    validity: int
    shift: int

    @property
    def N(self) -> int:
        return self.mat.shape[0] - 1

    @property
    def exact(self) -> bool:
        return self.mat.dtype == object

    def column(self, j: int):
        if j > self.validity:
            raise TruncationExceeded(f"column {j} beyond validity {self.validity}")
        return self.mat[:, j]

    def apply(self, coeffs):
        """Apply to a polynomial given by coefficients in increasing powers of z."""
        deg = len(coeffs) - 1
        if deg > self.validity:
            raise TruncationExceeded(f"degree {deg} beyond validity {self.validity}")
        out = self.mat[:, : deg + 1] @ np.asarray(coeffs, dtype=self.mat.dtype)
        return list(out)

    def __matmul__(self, other: "SeriesOperator") -> "SeriesOperator":
        return compose(self, other)

    def __add__(self, other: "SeriesOperator") -> "SeriesOperator":
        return add(self, other)

    def __sub__(self, other: "SeriesOperator") -> "SeriesOperator":
        return add(self, scale(other, -1))

    def __rmul__(self, c) -> "SeriesOperator":
        return scale(self, c)

    def max_abs(self):
        """Largest |entry| over the valid columns (exact when the backend is)."""
        block = self.mat[:, : self.validity + 1]
        if block.size == 0:
            return 0
        return max(abs(v) for v in block.flat)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.mat[:, : self.validity + 1].flat)


def _check(a: SeriesOperator, b: SeriesOperator):
    if a.N != b.N:
        raise ValueError(f"truncation mismatch: {a.N} vs {b.N}")


def compose(a: SeriesOperator, b: SeriesOperator) -> SeriesOperator:
    """a after b."""
    _check(a, b)
    v = min(b.validity, a.validity - b.shift)
    return SeriesOperator(_matmul(a.mat, b.mat), max(min(v, a.N), -1), a.shift + b.shift)


def _matmul(x, y):
    """Product that skips zero entries; object (Fraction) matrices here are banded."""
    if x.dtype != object:
        return x @ y
    out = _zeros(x.shape[0] - 1, True)
    rows = [[(j, v) for j, v in enumerate(r) if v != 0] for r in y]
    for i, r in enumerate(x):
        acc = out[i]
        for k, v in enumerate(r):
            if v != 0:
                for j, w in rows[k]:
                    acc[j] += v * w
    return out


def add(a: SeriesOperator, b: SeriesOperator) -> SeriesOperator:
    _check(a, b)
    return SeriesOperator(a.mat + b.mat, min(a.validity, b.validity), max(a.shift, b.shift))


def scale(a: SeriesOperator, c) -> SeriesOperator:
    return SeriesOperator(a.mat * c, a.validity, a.shift)


def identity(N: int, exact: bool = True) -> SeriesOperator:
    m = _zeros(N, exact)
    for j in range(N + 1):
        m[j, j] = 1 if not exact else Fraction(1)
    return SeriesOperator(m, N, 0)


def dq(q, N: int) -> SeriesOperator:
    """q-derivative: z^j -> [j]_q z^(j-1)."""
    m = _zeros(N, is_exact(q))
    for j in range(1, N + 1):
        m[j - 1, j] = q_number(j, q)
    return SeriesOperator(m, N, -1)


def zmul(N: int, exact: bool = True) -> SeriesOperator:
    """Multiplication by z."""
    m = _zeros(N, exact)
    for j in range(N):
        m[j + 1, j] = 1 if not exact else Fraction(1)
    return SeriesOperator(m, N - 1, 1)


def q_commutator(a: SeriesOperator, b: SeriesOperator, q) -> SeriesOperator:
    """[a, b]_q = ab - q ba."""
    return compose(a, b) - scale(compose(b, a), q)


def power(a: SeriesOperator, k: int) -> SeriesOperator:
    out = identity(a.N, a.exact)
    for _ in range(k):
        out = compose(a, out)
    return out


# -- commutator table ----------------------------------------------------------------------

def _basis(q, N):
    exact = is_exact(q)
    D, Z, I = dq(q, N), zmul(N, exact), identity(N, exact)
    return {"I": I, "D": D, "Z": Z, "ZD": Z @ D, "ZD2": Z @ D @ D, "Z2D": Z @ Z @ D,
            "Z2": Z @ Z, "D2": D @ D, "Z2D2": Z @ Z @ D @ D}


def table1_cells(q, N: int):
    """(row, col, expected) for every populated cell of the q-commutator table."""
    B = _basis(q, N)
    mixed = scale(B["ZD"], 1 + q) - scale(B["Z2D2"], q * (1 - q))
    return [
        ("D_q", "Z", B["D"], B["Z"], B["I"]),
        ("D_q", "ZD_q", B["D"], B["ZD"], B["D"]),
        ("D_q", "ZD_q^2", B["D"], B["ZD2"], B["D2"]),
        ("D_q", "Z^2D_q", B["D"], B["Z2D"], mixed),
        ("ZD_q", "Z", B["ZD"], B["Z"], B["Z"]),
        ("ZD_q", "ZD_q", B["ZD"], B["ZD"],
         scale(B["ZD"], 1 - q) + scale(B["Z2D2"], q * (1 - q))),
        ("ZD_q", "Z^2D_q", B["ZD"], B["Z2D"], B["Z2D"]),
        ("ZD_q^2", "Z", B["ZD2"], B["Z"], mixed),
        ("ZD_q^2", "ZD_q", B["ZD2"], B["ZD"], B["ZD2"]),
        ("Z^2D_q", "Z", B["Z2D"], B["Z"], B["Z2"]),
    ]


def table1_verify(q, N: int = 30) -> dict:
    """Residual [A,B]_q - expected for each cell, restricted to its validity range."""
    if N < 5:
        raise ValueError("N must be at least 5")
    out = {}
    for row, col, A, Bop, expected in table1_cells(q, N):
        res = q_commutator(A, Bop, q) - expected
        out[f"[{row},{col}]"] = {"max_abs": res.max_abs(), "validity": res.validity}
    return out


# -- realizations -------------------------------------------------------------------------

def _require(p: ParamSet, tag: FamilyTag):
    tag = FamilyTag(tag)
    if tag not in (FamilyTag.QMEIXNER, FamilyTag.BIPOISSON):
        raise FamilyMismatch(f"no operator realization for family {tag.value}")
    if tag not in classify(p):
        raise FamilyMismatch(f"parameters {p.to_dict()} are not in family {tag.value}")
    return tag


def realization(tag, p: ParamSet, N: int):
    """(x, y) solving xy - q yx = I + tau x^2 + sigma y^2 + theta x + eta y."""
    tag = _require(p, tag)
    B = _basis(p.q, N)
    I, D, Z = B["I"], B["D"], B["Z"]
    if tag == FamilyTag.QMEIXNER:
        x = D
        y = Z @ (I + scale(D, p.theta) + scale(B["D2"], p.tau))
    else:
        x = D + scale(Z @ (D + scale(B["D2"], p.theta)), p.eta)
        y = Z @ (I + scale(D, p.theta))
    return x, y


def dual_realization(tag, p: ParamSet, N: int):
    """(x, y) solving [x, y]_q = sigma x^2 + tau y^2 + eta x + theta y + I."""
    tag = _require(p, tag)
    B = _basis(p.q, N)
    I, D, Z = B["I"], B["D"], B["Z"]
    if tag == FamilyTag.QMEIXNER:
        x = (I + scale(Z, p.theta) + scale(B["Z2"], p.tau)) @ D
        y = Z
    else:
        x = (I + scale(Z, p.theta)) @ D
        y = Z + scale((Z + scale(B["Z2"], p.theta)) @ D, p.eta)
    return x, y


def ccom_residual(x: SeriesOperator, y: SeriesOperator, p: ParamSet) -> SeriesOperator:
    I = identity(x.N, x.exact)
    rhs = I + scale(x @ x, p.tau) + scale(y @ y, p.sigma) + scale(x, p.theta) + scale(y, p.eta)
    return q_commutator(x, y, p.q) - rhs


def dual_ccom_residual(x: SeriesOperator, y: SeriesOperator, p: ParamSet) -> SeriesOperator:
    I = identity(x.N, x.exact)
    rhs = scale(x @ x, p.sigma) + scale(y @ y, p.tau) + scale(x, p.eta) + scale(y, p.theta) + I
    return q_commutator(x, y, p.q) - rhs


def verify_ccom(x: SeriesOperator, y: SeriesOperator, p: ParamSet, dual: bool = False):
    res = (dual_ccom_residual if dual else ccom_residual)(x, y, p)
    return {"max_abs": res.max_abs(), "validity": res.validity, "zero": res.is_zero()}


def dual_quadratic_residual(x: SeriesOperator, y: SeriesOperator, p: ParamSet, s, t, u):
    """X_t^2 - Q*(X_s, X_u) with X_t = x + t y and the B term ordered X_u X_s."""
    from .regression import TimeTriple, form_coeffs

    fc = form_coeffs(p, TimeTriple(s, t, u).require_interior())
    Xs, Xt, Xu = (x + scale(y, v) for v in (s, t, u))
    I = identity(x.N, x.exact)
    Q = (scale(Xs @ Xs, fc.A) + scale(Xu @ Xs, fc.B) + scale(Xu @ Xu, fc.C)
         + scale(Xs, fc.D) + scale(Xu, fc.E) + scale(I, fc.F))
    return Xt @ Xt - Q


def extract_recurrence(x: SeriesOperator, y: SeriesOperator, t, n: int):
    """(a, b, c): coefficients of z^(n+1), z^n, z^(n-1) in (t x + y) z^n."""
    op = scale(x, t) + y
    col = op.column(n)
    for k, v in enumerate(col):
        if abs(k - n) > 1 and v != 0:
            raise NotBanded(f"(t x + y) z^{n} has a z^{k} term {v}")
    zero = 0 * col[0]
    a = col[n + 1] if n + 1 <= op.N else zero
    c = col[n - 1] if n >= 1 else zero
    return a, col[n], c


def coherent_residual(tag, p: ParamSet, t, N: int):
    """Max deviation of X_t = x* + t y* from the coherent-state action of the recurrence.

    On the generating function sum z^m p_m / [m]_q!, multiplication by x acts as X_t
    exactly when X_t(z^m) = a_{m-1}[m] z^(m-1) + b_m z^m + c_{m+1}/[m+1] z^(m+1).
    """
    from .recurrence import closed_family

    if not p.q > -1:
        raise ValueError("coherent-state normalization needs q > -1")
    x, y = dual_realization(tag, p, N)
    X = x + scale(y, t)
    seq = closed_family(p, tag, N + 1)
    worst = 0 * p.q
    for m in range(X.validity + 1):
        expected = {m: seq[m].b(t)}
        if m >= 1:
            expected[m - 1] = seq[m - 1].a(t) * q_number(m, p.q)
        if m + 1 <= X.N:
            expected[m + 1] = seq[m + 1].c(t) / q_number(m + 1, p.q)
        col = X.column(m)
        for k, v in enumerate(col):
            worst = max(worst, abs(v - expected.get(k, 0)))
    return worst
