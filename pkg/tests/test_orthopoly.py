import random

import gmpy2
import mpmath
import pytest
from gmpy2 import mpc, mpfr

from hankelmin import orthopoly as op
from hankelmin.asymptotics import sigma_asymptotic
from hankelmin.eigensolver import smallest_eigenvalue
from hankelmin.moments import WeightParams, hankel_matrix, moment_table
from hankelmin.mpcore import working
from hankelmin.quadrature import integrate_de

B = 192


def test_legendre_coefficients():
    t = op.recurrence_from_jacobi(WeightParams(0, 0), 10, B)
    assert all(a == mpfr("0.5") for a in t.a)
    with working(B):
        assert abs(t.b[1] - mpfr(1) / 12) < mpfr(2) ** (-B + 4)


def test_chebyshev_coefficients():
    t = op.recurrence_from_jacobi(WeightParams("-1/2", "-1/2"), 10, B)
    assert all(v == mpfr(1) / 16 for v in t.b[2:])
    assert all(a == mpfr("0.5") for a in t.a)


def test_support_and_positivity():
    t = op.recurrence_from_jacobi(WeightParams("-0.9", "5"), 40, B)
    assert all(0 < a < 1 for a in t.a)
    assert all(b > 0 for b in t.b[1:])


@pytest.mark.parametrize("ab", [(0, 0), ("1/3", "3/2"), ("-0.9", "0.4"), ("-1/2", "-1/2")])
def test_recurrence_matches_stieltjes(ab):
    p = WeightParams(*ab)
    t1 = op.recurrence_from_jacobi(p, 6, 128)
    t2 = op.recurrence_from_moments(moment_table(p, 13, 256), 6, 128)
    for x, y in zip(t1.a + t1.b[1:] + t1.norms, t2.a + t2.b[1:] + t2.norms):
        assert abs(x - y) <= 1e-25 * abs(y)


def test_low_degree_values():
    t = op.recurrence_from_jacobi(WeightParams(0, 0), 3, B)
    assert op.eval_orthonormal(t, 0, mpfr("0.3")).value == 1
    with working(B):
        x = mpfr("0.3")
        expect = gmpy2.sqrt(mpfr(3)) * (2 * x - 1)
        assert abs(op.eval_orthonormal(t, 1, x).value - expect) < 1e-50
    v = op.eval_orthonormal(t, 3, mpfr("0.7")).value
    assert v.imag == 0


def test_orthonormal_gram_identity():
    p = WeightParams("0.4", "-0.3")
    t = op.recurrence_from_jacobi(p, 5, B)
    a, b = p.alpha_mp(B), p.beta_mp(B)
    for m in range(6):
        for n in range(m, 6):

            def f(x, d, e, m=m, n=n):
                ps = op.eval_orthonormal_all(t, n, x)
                return ps[m] * ps[n] * d**a * e**b

            g = integrate_de(f, 0, 1, 25, distances=True).value
            assert abs(g - (1 if m == n else 0)) < 1e-20, (m, n)


def test_p2_p3_orthogonal():
    t = op.recurrence_from_jacobi(WeightParams(0, 0), 3, B)

    def f(x):
        ps = op.eval_orthonormal_all(t, 3, x)
        return ps[2] * ps[3]

    assert abs(integrate_de(f, 0, 1, 30).value) < 1e-25


TREND_PARAMS = [(0, 0), (1, 2), ("-7/8", "-1/8")]


@pytest.mark.parametrize("z", [-1, 2, mpc(1, 1)])
@pytest.mark.parametrize("ab", TREND_PARAMS)
def test_exterior_asymptotic_ratio_trend(z, ab):
    p = WeightParams(*ab)
    devs = [abs(float(op.exterior_asymptotic_ratio(p, n, z)) - 1) for n in (25, 50, 100)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.02


def test_exterior_ratio_chebyshev_is_exact():
    # for x^{-1/2}(1-x)^{-1/2} the asymptotic form is exact up to rounding
    p = WeightParams("-1/2", "-1/2")
    for z in (-1, 2):
        assert abs(float(op.exterior_asymptotic_ratio(p, 50, z)) - 1) < 1e-30


def test_exterior_asymptotic_ratio_positive_finite():
    for ab in [(0, 0), ("5", "-0.5")]:
        r = op.exterior_asymptotic_ratio(WeightParams(*ab), 30, -1)
        assert gmpy2.is_finite(r) and r > 0


def test_sigma_small():
    p = WeightParams(0, 0)
    assert op.sigma_quadrature(p, 0, 0) == 1
    assert abs(op.sigma_quadrature(p, 1, 1) - 15) < 1e-60


def test_sigma_symmetric_and_matches_coefficients():
    p = WeightParams("0.6", "1.25")
    N = 6
    h = moment_table(p, 2 * N, 512)
    S = op.sigma_from_coefficients(op.coefficients_from_moments(h, N, 512), 512)
    for m in range(N + 1):
        for n in range(N + 1):
            s = op.sigma_quadrature(p, m, n, 256)
            assert s == op.sigma_quadrature(p, n, m, 256)
            assert abs(s - S[m][n]) <= 1e-60 * abs(S[m][n])


def test_sigma_sign_pattern():
    p = WeightParams(0, 0)
    for m in range(30, 41):
        for n in (30, 35, 40):
            s = op.sigma_quadrature(p, m, n)
            assert (s > 0) == ((m - n) % 2 == 0), (m, n)


def test_sigma_asymptotic_vs_quadrature():
    p = WeightParams(0, 0)
    ratio = float(op.sigma_quadrature(p, 40, 40) / sigma_asymptotic(40, 40, p))
    assert abs(ratio - 1) < 0.01
    ratio80 = float(op.sigma_quadrature(p, 80, 80) / sigma_asymptotic(80, 80, p))
    assert abs(ratio80 - 1) < abs(ratio - 1)


def test_identity_A_H_At():
    p = WeightParams("-0.3", "0.8")
    N = 5
    H = hankel_matrix(p, N, 384)
    A = op.coefficients_from_moments(H.moments, N, 384)
    with working(384):
        for i in range(N + 1):
            for j in range(N + 1):
                v = gmpy2.fsum(A[i][k] * H[k, l] * A[j][l] for k in range(N + 1) for l in range(N + 1))
                assert abs(v - (1 if i == j else 0)) < 1e-80


def test_eigen_consistency():
    rng = random.Random(99)
    for _ in range(5):
        p = WeightParams(round(rng.uniform(-0.9, 2), 3), round(rng.uniform(-0.9, 2), 3))
        for N in (1, 3, 6):
            H = hankel_matrix(p, N, 384)
            lam = smallest_eigenvalue(H, 1e-20, bits=384).lambda_min
            S = op.sigma_from_coefficients(op.coefficients_from_moments(H.moments, N, 384), 384)
            with mpmath.workprec(384):
                top = max(mpmath.eigsy(mpmath.matrix([[mpmath.mpf(str(v)) for v in r] for r in S]), eigvals_only=True))
                assert abs(1 / mpmath.mpf(str(lam)) / top - 1) < 1e-10
