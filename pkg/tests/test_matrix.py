import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gen import REGIMES, admissible_params, fractions
from harnesslab import matrix
from harnesslab.errors import DegenerateTimes, TruncationExceeded
from harnesslab.matrix import (
    BandedMatrix,
    build_ct,
    ccom_matrix_residual,
    quadratic_matrix_residual,
    split_xy,
    tridiagonal,
    verify_matrix,
    verify_matrix_ccom,
    verify_matrix_quadratic,
)
from harnesslab.params import ParamSet, preset
from harnesslab.recurrence import build_tables
from harnesslab.regression import TimeTriple, form_coeffs


def table(p, N=40):
    return build_tables(p, N)


def test_brownian_x_y_structure():
    X, Y = split_xy(table(preset("brownian"), 10), 10)
    assert X.diags[1] == list(range(1, 10))
    assert all(v == 0 for v in X.diags[0] + X.diags[-1])
    assert Y.diags[-1] == [1] * 9
    assert all(v == 0 for v in Y.diags[0] + Y.diags[1])


@given(admissible_params(), fractions(0, 5))
@settings(max_examples=30)
def test_c00_is_zero_and_affine(p, t):
    tbl = table(p, 12)
    C = build_ct(tbl, t, 12)
    assert C.get(0, 0) == 0
    D = build_ct(tbl, 2, 12) - 2 * build_ct(tbl, 1, 12) + build_ct(tbl, 0, 12)
    assert D.block_max_abs(12) == 0
    X, Y = split_xy(tbl, 12)
    assert (C - (t * X + Y)).block_max_abs(12) == 0


def test_column_convention():
    p = preset("general")
    tbl = table(p, 6)
    t = F(3, 2)
    C = build_ct(tbl, t, 6)
    for n in range(1, 5):
        a, b, c = tbl.coeffs(n).at(t)
        assert (C.get(n + 1, n), C.get(n, n), C.get(n - 1, n)) == (a, b, c)


def test_banded_product_matches_dense():
    rng = random.Random(3)
    n = 9
    A = BandedMatrix(n, {k: [F(rng.randint(-5, 5), 3) for _ in range(n - abs(k))] for k in (-2, 0, 1)}, n)
    B = BandedMatrix(n, {k: [F(rng.randint(-5, 5), 2) for _ in range(n - abs(k))] for k in (-1, 0, 2)}, n)
    dense = A.to_dense() @ B.to_dense()
    prod = (A @ B).to_dense()
    assert (dense == prod).all()
    assert (A @ B).valid == n - 1  # upper(A) = 1, lower(B) = 1


def test_block_beyond_valid_raises():
    C = build_ct(table(preset("general"), 10), F(1), 10)
    with pytest.raises(TruncationExceeded):
        (C @ C).block_max_abs(10)


def test_brownian_heisenberg():
    X, Y = split_xy(table(preset("brownian"), 20), 20)
    R = X @ Y - Y @ X - matrix.identity(20)
    assert R.block_max_abs(19) == 0


def test_sigma0_example_ccom():
    p = ParamSet.exact(q=F(1, 2), eta=F(1, 3), theta=F(1, 5), tau=F(1, 7))
    assert verify_matrix_ccom(table(p), p, 40) == 0


def test_free_example_ccom():
    p = ParamSet.exact(q=F(-1, 8), eta=F(1, 3), theta=F(1, 5), sigma=F(1, 2), tau=F(1, 4))
    assert verify_matrix_ccom(table(p), p, 40) == 0


def test_ccom_minimum_size():
    with pytest.raises(ValueError):
        verify_matrix_ccom(table(preset("general")), preset("general"), 5)


@given(admissible_params())
@settings(max_examples=20, deadline=None)
def test_matrix_identities_exact(p):
    rep = verify_matrix(table(p, 16), p, F(1), F(2), F(3), 16)
    assert rep.exact and rep.passed()


@pytest.mark.parametrize("name", ["brownian", "qmeixner", "bipoisson", "free", "classical", "general"])
def test_matrix_identities_float(name):
    p = preset(name, exact=False)
    rep = verify_matrix(table(p), p, 1.0, 2.0, 3.0, 40)
    assert not rep.exact and rep.passed(1e-10)


def test_brownian_quadratic():
    p = preset("brownian")
    assert verify_matrix_quadratic(table(p), p, F(1), F(2), F(3), 40) == 0


def test_quadratic_rejects_degenerate_times():
    p = preset("general")
    with pytest.raises(DegenerateTimes):
        verify_matrix_quadratic(table(p, 10), p, F(1), F(1), F(3), 10)


@given(admissible_params(), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=25, deadline=None)
def test_quadratic_is_F_times_ccom_for_any_xy(p, seed):
    # purely algebraic reduction: holds for arbitrary X, Y, not just the engine's
    rng = random.Random(seed)
    n = 8

    def rand_tri():
        return tridiagonal(*[[F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n - k)]
                             for k in (1, 0, 1)])

    X, Y = rand_tri(), rand_tri()
    s, t, u = F(1, 2), F(1), F(5, 2)
    Fst = form_coeffs(p, TimeTriple(s, t, u)).F
    lhs = quadratic_matrix_residual(X, Y, p, s, t, u)
    rhs = Fst * ccom_matrix_residual(X, Y, p)
    assert (lhs - rhs).block_max_abs(n - 2) == 0
    assert lhs.block_entries(n - 2) == rhs.block_entries(n - 2)


@pytest.mark.parametrize("name", ["qmeixner", "bipoisson", "general"])
def test_dual_matrix_quadratic(name):
    p = preset(name)
    assert verify_matrix_quadratic(table(p), p, F(1), F(2), F(3), 40, dual=True) == 0


def test_truncation_independence():
    p = preset("general")
    tbl = table(p, 52)
    X, Y = split_xy(tbl, 40)
    X2, Y2 = split_xy(tbl, 50)
    R = ccom_matrix_residual(X, Y, p) + X @ X @ Y
    R2 = ccom_matrix_residual(X2, Y2, p) + X2 @ X2 @ Y2
    assert R.valid >= 37
    assert R.block_entries(R.valid) == R2.block_entries(R.valid)


# -- moments -------------------------------------------------------------------------------

@given(admissible_params())
@settings(max_examples=30)
def test_low_moments_as_polynomials(p):
    mp = matrix.moment_polys(table(p, 6), 2, 6)
    assert mp[0] == [1] and mp[1] == [0] and mp[2] == [0, 1]


def test_brownian_gaussian_moments():
    mp = matrix.moment_polys(table(preset("brownian"), 14), 12)
    for k in range(0, 13):
        want = 0 if k % 2 else math.prod(range(1, k, 2))
        assert matrix.poly_eval(mp[k], F(1)) == want
        if k % 2 == 0 and k:
            assert mp[k] == [0] * (k // 2) + [want]  # m_k(t) = (k-1)!! t^(k/2)


def test_free_poisson_zero_catalan_moments():
    mp = matrix.moment_polys(table(ParamSet.exact(), 14), 12)
    for k in range(0, 13, 2):
        assert matrix.poly_eval(mp[k], F(1)) == math.comb(k, k // 2) // (k // 2 + 1)


@given(admissible_params("sigma0"), fractions(0, 4))
@settings(max_examples=30)
def test_sigma0_third_moment(p, t):
    tbl = table(p, 8)
    want = t * (p.eta * t + p.theta + p.eta * p.tau)
    assert matrix.moments(tbl, t, 3) == want
    assert matrix.brute_force_moment(tbl, t, 3) == want


@given(admissible_params(), fractions(0, 3))
@settings(max_examples=20, deadline=None)
def test_moments_agree_three_ways(p, t):
    tbl = table(p, 12)
    at = matrix.moments_at(tbl, t, 10)
    for n in range(11):
        assert matrix.moments(tbl, t, n) == at[n] == matrix.brute_force_moment(tbl, t, n)


def test_moments_need_room():
    with pytest.raises(TruncationExceeded):
        matrix.moment_polys(table(preset("general"), 10), 8, 9)


@given(admissible_params(), fractions(F(1, 4), 3))
@settings(max_examples=20, deadline=None)
def test_mean_of_polynomials_vanishes(p, t):
    means = matrix.mean_of_polynomials(table(p, 12), t, 10)
    assert means[0] == 1 and all(m == 0 for m in means[1:])


@pytest.mark.parametrize("regime", sorted(REGIMES))
def test_hankel_proxy_and_cauchy_schwarz(regime):
    rng = random.Random(5)
    p = REGIMES[regime](rng)
    tbl = table(p, 30)
    for t in (F(1, 2), F(2)):
        assert all(v > 0 for v in matrix.hankel_proxy(tbl, t, 30))
        m = matrix.moments_at(table(p.as_float(), 30), float(t), 20)
        for n in range(0, 11):
            assert m[2 * n] >= 0
            assert m[2 * n] >= m[n] ** 2 * (1 - 1e-12)
