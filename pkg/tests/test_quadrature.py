import gmpy2
import numpy as np
import pytest
from gmpy2 import mpfr

from hankelmin import quadrature as q
from hankelmin.asymptotics import amplitude_at_minus_one, eta
from hankelmin.moments import WeightParams
from hankelmin.mpcore import DomainError, working

W = 192


@pytest.fixture(scope="module")
def consts():
    with working(W):
        return {
            "pi": gmpy2.const_pi(),
            "l2": gmpy2.log(mpfr(2)),
            "L": gmpy2.log(1 + gmpy2.sqrt(mpfr(2))),
            "s2": gmpy2.sqrt(mpfr(2)),
        }


def test_arcsine(consts):
    r = q.integrate_de(lambda x, d, e: 1 / gmpy2.sqrt(d * e), 0, 1, distances=True)
    assert abs(r.value - consts["pi"]) < 1e-30
    assert r.est_error >= 0


def test_beta_integral(consts):
    r = q.integrate_de(lambda x: gmpy2.sqrt(x) * (1 - x) ** mpfr("1.5"), 0, 1)
    with working(W):
        assert abs(r.value - consts["pi"] / 16) < 1e-30


def test_log_arcsine(consts):
    r = q.integrate_de(lambda x, d, e: gmpy2.log(e) / gmpy2.sqrt(d * e), 0, 1, distances=True)
    with working(W):
        expect = -2 * consts["pi"] * consts["l2"]
        assert abs(r.value - expect) < 1e-30
    # independent oracle: Gauss-Chebyshev with 10**6 nodes in double precision
    k = np.arange(1, 10**6 + 1)
    x = (1 + np.cos((2 * k - 1) * np.pi / (2 * 10**6))) / 2
    gc = np.pi / 10**6 * np.sum(np.log1p(-x[x < 1]))
    assert abs(gc - float(expect)) < 1e-4


def test_nonconvergence_raises():
    with pytest.raises(q.QuadratureError):
        q.integrate_de(lambda x: gmpy2.sin(1000 * x), 0, 1, 30, max_levels=3)


def test_digit_stability():
    f = lambda x, d, e: gmpy2.log(e) * d ** mpfr("-0.75")  # noqa: E731
    lo = q.integrate_de(f, 0, 1, 20, distances=True).value
    hi = q.integrate_de(f, 0, 1, 40, distances=True).value
    assert abs(lo - hi) < 1e-19 * abs(hi)


@pytest.mark.parametrize("which,t", [(1, 1), (1, 1.5), (1, 2), (1, 10), (2, 1), (2, 1.5), (2, 2), (2, 10)])
def test_stieltjes_positive_t(which, t):
    with working(W):
        assert abs(q.stieltjes_integral(which, t).value - q.stieltjes_integral_closed(which, t)) < 1e-28


@pytest.mark.parametrize("which,t", [(3, -1.5), (3, -2), (3, -10), (4, -1.5), (4, -2), (4, -10)])
def test_stieltjes_negative_t(which, t):
    with working(W):
        assert abs(q.stieltjes_integral(which, t).value - q.stieltjes_integral_closed(which, t)) < 1e-28


def test_stieltjes_examples(consts):
    with working(W):
        pi, s2, l2, L = consts["pi"], consts["s2"], consts["l2"], consts["L"]
        assert abs(q.stieltjes_integral_closed(1, 1) - pi / s2) < 1e-40
        assert abs(q.stieltjes_integral_closed(2, 1) - pi * (l2 - 2 * L) / s2) < 1e-40
        # the integrand is negative for t < -1, so the sign is fixed by quadrature
        assert abs(q.stieltjes_integral_closed(3, -2) + pi / s2) < 1e-40
        assert q.stieltjes_integral(3, -2).value < 0


def test_stieltjes_domain():
    with pytest.raises(DomainError):
        q.stieltjes_integral(1, 0.5)
    with pytest.raises(DomainError):
        q.stieltjes_integral_closed(3, -1)
    with pytest.raises(ValueError):
        q.stieltjes_integral_closed(5, 2)


def test_poisson_log_terms(consts):
    l2, L = consts["l2"], consts["L"]
    with working(W):
        assert abs(q.poisson_log2_term().value + l2 / 2) < 1e-28
        assert abs(q.poisson_log_cos_term().value - L / 2) < 1e-28
        assert abs(q.poisson_log_cos_term_algebraic().value - L / 2) < 1e-28
        assert abs(q.poisson_log_sin_term().value - (L / 2 - l2 / 4)) < 1e-28
        assert abs(q.poisson_log_sin_term_algebraic().value - (L / 2 - l2 / 4)) < 1e-28


def test_b_over_c_ratio_is_not_two():
    with working(W):
        ratio = q.poisson_log_cos_term().value / q.poisson_log_sin_term().value
    assert abs(float(ratio) - 1.6481) < 1e-3


@pytest.mark.parametrize("r,theta", [(eta(), 0), (eta(), 1), ("1.5", 2), ("7", 3)])
def test_poisson_normalization(r, theta):
    with working(W):
        assert abs(q.poisson_normalization(r, theta).value + 1) < 1e-28


@pytest.mark.parametrize("ab", [(0, 0), ("-1/2", "-1/2"), (1, 2), ("-7/8", "-1/8")])
def test_log_amplitude_matches_closed_form(ab):
    p = WeightParams(*ab)
    with working(W):
        val = q.log_amplitude(eta(), gmpy2.const_pi(), p).value
        assert abs(gmpy2.exp(val) - amplitude_at_minus_one(p)) < 1e-28


def test_log_amplitude_symmetry():
    p = WeightParams("0.7", "0.7")
    with working(W):
        pi = gmpy2.const_pi()
        plus = q.log_amplitude("3", pi + mpfr("0.4"), p, 25).value
        minus = q.log_amplitude("3", pi - mpfr("0.4"), p, 25).value
        assert abs(plus - minus) < 1e-23


def test_log_amplitude_domain():
    with pytest.raises(DomainError):
        q.log_amplitude("0.5", 0, WeightParams(0, 0))
