"""Banded truncations of the multiplication-by-x matrix C_t = t X + Y.

Column n of C_t holds the recurrence coefficients of x p_n:
(C_t)[n+1, n] = a_n(t), (C_t)[n, n] = b_n(t), (C_t)[n-1, n] = c_n(t).
Products of truncations are exact only on a leading block; ``valid`` tracks its size.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import TruncationExceeded
from .params import ParamSet
from .regression import TimeTriple, form_coeffs
from .scalars import is_exact


@dataclass(frozen=True, eq=False)
class BandedMatrix:
    """n x n matrix stored as {offset: entries}; offset k holds M[i, i + k]."""

    n: int
    diags: dict
    valid: int

    @property
    def lower(self) -> int:
        return max([-k for k in self.diags if k < 0], default=0)

    @property
    def upper(self) -> int:
        return max([k for k in self.diags if k > 0], default=0)

    def get(self, i: int, j: int):
        d = self.diags.get(j - i)
        if d is None:
            return 0
        return d[min(i, j)]

    def to_dense(self, exact: bool | None = None):
        if exact is None:
            exact = self.exact
        m = np.empty((self.n, self.n), dtype=object) if exact else np.zeros((self.n, self.n))
        if exact:
            m.fill(Fraction(0))
        for k, d in self.diags.items():
            for idx, v in enumerate(d):
                i, j = (idx, idx + k) if k >= 0 else (idx - k, idx)
                m[i, j] = v
        return m

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for d in self.diags.values() for v in d)

    def __add__(self, other: "BandedMatrix") -> "BandedMatrix":
        return _combine(self, other, 1)

    def __sub__(self, other: "BandedMatrix") -> "BandedMatrix":
        return _combine(self, other, -1)

    def __rmul__(self, c) -> "BandedMatrix":
        return BandedMatrix(self.n, {k: [c * v for v in d] for k, d in self.diags.items()},
                            self.valid)

    def __matmul__(self, other: "BandedMatrix") -> "BandedMatrix":
        return banded_product(self, other)

    def transpose(self) -> "BandedMatrix":
        return BandedMatrix(self.n, {-k: list(d) for k, d in self.diags.items()}, self.valid)

    def block_max_abs(self, size: int):
        """max |M[i, j]| over the leading size x size block."""
        if size > self.valid:
            raise TruncationExceeded(f"block {size} exceeds valid block {self.valid}")
        worst = 0
        for k, d in self.diags.items():
            for idx, v in enumerate(d):
                i, j = (idx, idx + k) if k >= 0 else (idx - k, idx)
                if i < size and j < size:
                    worst = max(worst, abs(v))
        return worst

    def block_entries(self, size: int):
        return {(i, j): self.get(i, j) for i in range(size) for j in range(size)}


def _diag_len(n, k):
    return n - abs(k)


def _combine(a: BandedMatrix, b: BandedMatrix, sign) -> BandedMatrix:
    if a.n != b.n:
        raise ValueError("size mismatch")
    diags = {}
    for k in set(a.diags) | set(b.diags):
        da = a.diags.get(k)
        db = b.diags.get(k)
        if da is None:
            diags[k] = [sign * v for v in db]
        elif db is None:
            diags[k] = list(da)
        else:
            diags[k] = [x + sign * y for x, y in zip(da, db)]
    return BandedMatrix(a.n, diags, min(a.valid, b.valid))


def banded_product(a: BandedMatrix, b: BandedMatrix) -> BandedMatrix:
    if a.n != b.n:
        raise ValueError("size mismatch")
    n = a.n
    diags = {}
    for ka, da in a.diags.items():
        for kb, db in b.diags.items():
            k = ka + kb
            if abs(k) >= n:
                continue
            out = diags.setdefault(k, [0] * _diag_len(n, k))
            # entry (i, i + ka) of a times (i + ka, i + k) of b
            for i in range(max(0, -k, -ka), min(n, n - k, n - ka)):
                j = i + ka
                va = da[min(i, j)]
                vb = db[min(j, i + k)]
                out[min(i, i + k)] = out[min(i, i + k)] + va * vb
    valid = min(a.valid, b.valid) - min(a.upper, b.lower)
    return BandedMatrix(n, diags, max(valid, 0))


def identity(n: int, exact: bool = True) -> BandedMatrix:
    one = Fraction(1) if exact else 1.0
    return BandedMatrix(n, {0: [one] * n}, n)


def tridiagonal(lower, diag, upper) -> BandedMatrix:
    n = len(diag)
    return BandedMatrix(n, {-1: list(lower), 0: list(diag), 1: list(upper)}, n)


def _sequence(src, N):
    seq = src.sequence() if hasattr(src, "sequence") else src
    if len(seq) < N:
        raise TruncationExceeded(f"need {N} recurrence coefficients, have {len(seq)}")
    return seq


def build_ct(src, t, N: int) -> BandedMatrix:
    """N x N truncation of C_t from a RecurrenceTable or coefficient sequence."""
    seq = _sequence(src, N)
    return tridiagonal([seq[n].a(t) for n in range(N - 1)],
                       [seq[n].b(t) for n in range(N)],
                       [seq[n].c(t) for n in range(1, N)])


def split_xy(src, N: int):
    """(X, Y) with C_t = t X + Y."""
    seq = _sequence(src, N)
    X = tridiagonal([seq[n].a.slope for n in range(N - 1)], [seq[n].b.slope for n in range(N)],
                    [seq[n].c.slope for n in range(1, N)])
    Y = tridiagonal([seq[n].a.intercept for n in range(N - 1)],
                    [seq[n].b.intercept for n in range(N)],
                    [seq[n].c.intercept for n in range(1, N)])
    return X, Y


MARGIN = 2


def _sum(terms):
    out = terms[0]
    for m in terms[1:]:
        out = out + m
    return out


def ccom_terms(X: BandedMatrix, Y: BandedMatrix, p: ParamSet) -> list:
    """Signed terms of XY - q YX - (I + tau X^2 + sigma Y^2 + theta X + eta Y)."""
    I = identity(X.n, X.exact and p.is_exact)
    return [X @ Y, -p.q * (Y @ X), -1 * I, -p.tau * (X @ X), -p.sigma * (Y @ Y),
            -p.theta * X, -p.eta * Y]


def quadratic_terms(X: BandedMatrix, Y: BandedMatrix, p: ParamSet, s, t, u,
                    dual: bool = False) -> list:
    """Signed terms of C_t^2 - Q(C_s, C_u), cross term C_s C_u (or the transposed dual)."""
    fc = form_coeffs(p, TimeTriple(s, t, u).require_interior())
    Cs, Ct, Cu = (v * X + Y for v in (s, t, u))
    if dual:
        Cs, Ct, Cu = Cs.transpose(), Ct.transpose(), Cu.transpose()
        cross = Cu @ Cs
    else:
        cross = Cs @ Cu
    I = identity(X.n, X.exact and p.is_exact)
    return [Ct @ Ct, -fc.A * (Cs @ Cs), -fc.B * cross, -fc.C * (Cu @ Cu),
            -fc.D * Cs, -fc.E * Cu, -fc.F * I]


def ccom_matrix_residual(X: BandedMatrix, Y: BandedMatrix, p: ParamSet) -> BandedMatrix:
    return _sum(ccom_terms(X, Y, p))


def quadratic_matrix_residual(X: BandedMatrix, Y: BandedMatrix, p: ParamSet, s, t, u,
                              dual: bool = False) -> BandedMatrix:
    return _sum(quadratic_terms(X, Y, p, s, t, u, dual))


def _measure(terms, size, exact):
    """Residual magnitude on the leading block; relative to the largest term in float mode."""
    r = _sum(terms).block_max_abs(size)
    if exact:
        return r
    return r / max(1.0, max(m.block_max_abs(size) for m in terms))


@dataclass(frozen=True)
class MatrixReport:
    ccom_max: object
    quadratic_max: object
    proportional_max: object
    block: int
    exact: bool

    def passed(self, tol: float = 1e-10) -> bool:
        vals = (self.ccom_max, self.quadratic_max, self.proportional_max)
        if self.exact:
            return all(v == 0 for v in vals)
        return all(v <= tol for v in vals)


def _is_exact(p, *times):
    return p.is_exact and all(is_exact(v) for v in times)


def verify_matrix_ccom(src, p: ParamSet, N: int):
    if N < 6:
        raise ValueError("N must be at least 6")
    X, Y = split_xy(src, N)
    return _measure(ccom_terms(X, Y, p), N - MARGIN, p.is_exact)


def verify_matrix_quadratic(src, p: ParamSet, s, t, u, N: int, dual: bool = False):
    X, Y = split_xy(src, N)
    return _measure(quadratic_terms(X, Y, p, s, t, u, dual), N - MARGIN, _is_exact(p, s, t, u))


def verify_matrix(src, p: ParamSet, s, t, u, N: int) -> MatrixReport:
    """ccom and quadratic residuals plus the entrywise check quadratic = F * ccom.

    Exact inputs give raw residuals; float inputs give residuals relative to the
    largest term on the block.
    """
    X, Y = split_xy(src, N)
    size = N - MARGIN
    exact = _is_exact(p, s, t, u)
    tc = ccom_terms(X, Y, p)
    tq = quadratic_terms(X, Y, p, s, t, u)
    F = form_coeffs(p, TimeTriple(s, t, u)).F
    tp = tq + [-F * m for m in tc]
    return MatrixReport(_measure(tc, size, exact), _measure(tq, size, exact),
                        _measure(tp, size, exact), size, exact)


# -- moments --------------------------------------------------------------------------

def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = out[i] + v
    return out


def _pscale(a, slope, intercept):
    """(slope t + intercept) * a(t)."""
    out = [intercept * v for v in a] + [0 * intercept]
    for i, v in enumerate(a):
        out[i + 1] = out[i + 1] + slope * v
    return out


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def moment_polys(src, n_max: int, N: int | None = None):
    """m_0..m_{n_max} as coefficient lists in t (increasing powers).

    Uses v <- (t X + Y) v starting from e_0 and reads the 0-th entry.
    """
    N = n_max + 2 if N is None else N
    if N < n_max + 2:
        raise TruncationExceeded(f"moment {n_max} needs N >= {n_max + 2}")
    seq = _sequence(src, N)
    zero = 0 * seq[0].a.intercept
    one = 1 + zero
    v = [[one]] + [[zero] for _ in range(N - 1)]
    out = [[one]]
    for _ in range(n_max):
        w = [[zero] for _ in range(N)]
        for j in range(N):
            if all(c == 0 for c in v[j]):
                continue
            co = seq[j]
            if j + 1 < N:
                w[j + 1] = _padd(w[j + 1], _pscale(v[j], co.a.slope, co.a.intercept))
            w[j] = _padd(w[j], _pscale(v[j], co.b.slope, co.b.intercept))
            if j >= 1:
                w[j - 1] = _padd(w[j - 1], _pscale(v[j], co.c.slope, co.c.intercept))
        v = w
        out.append(_trim(v[0]))
    return out


def poly_eval(coeffs, t):
    acc = 0 * t
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def moments(src, t, n: int, N: int | None = None):
    """m_n(t) = (C_t^n)[0, 0]."""
    return poly_eval(moment_polys(src, n, N)[n], t)


def moments_at(src, t, n_max: int):
    """m_0(t)..m_{n_max}(t) by repeated multiplication at a fixed t."""
    N = n_max + 2
    C = build_ct(_sequence(src, N), t, N)
    zero = 0 * t
    v = [1 + zero] + [zero] * (N - 1)
    out = [v[0]]
    for _ in range(n_max):
        w = [zero] * N
        for j in range(N):
            if v[j] == 0:
                continue
            for i in (j - 1, j, j + 1):
                if 0 <= i < N:
                    w[i] = w[i] + C.get(i, j) * v[j]
        v = w
        out.append(v[0])
    return out


def brute_force_moment(src, t, n: int):
    """(C_t^n)[0, 0] by dense matrix powers; an independent check of :func:`moments`."""
    N = n + 2
    C = build_ct(_sequence(src, N), t, N).to_dense()
    P = np.identity(N, dtype=C.dtype) if C.dtype != object else _dense_identity(N)
    for _ in range(n):
        P = C @ P
    return P[0, 0]


def _dense_identity(N):
    m = np.empty((N, N), dtype=object)
    m.fill(Fraction(0))
    for i in range(N):
        m[i, i] = Fraction(1)
    return m


def mean_of_polynomials(src, t, k_max: int):
    """E p_k(X_t; t) for k = 0..k_max from monomial coefficients and moments."""
    from .recurrence import polynomial_coeffs

    seq = _sequence(src, k_max + 2)
    polys = polynomial_coeffs(seq, t, k_max)
    m = moments_at(seq, t, k_max)
    return [sum(c * m[j] for j, c in enumerate(poly)) for poly in polys]


def hankel_proxy(src, t, N: int) -> list:
    """a_{n-1}(t) c_n(t) for n = 1..N-1; all must be positive for a positive measure."""
    seq = _sequence(src, N)
    return [seq[n - 1].a(t) * seq[n].c(t) for n in range(1, N)]
