"""Tanh-sinh quadrature and the specific integrals it is used to check.

The rule maps ``(a, b)`` through ``x = (a+b)/2 + (b-a)/2 tanh(π/2 sinh t)``,
which crushes algebraic and logarithmic endpoint singularities into a double
exponentially decaying integrand.  Integrands can ask for the distances
``x - a`` and ``b - x`` directly; those are computed from ``t`` without
cancellation, which matters when ``f`` involves ``log(1 - x)`` or
``(1 - x)**β`` with ``1 - x`` far below the working epsilon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import gmpy2
from gmpy2 import mpfr

from .moments import WeightParams
from .mpcore import DomainError, working

__all__ = [
    "QuadResult",
    "QuadratureError",
    "integrate_de",
    "stieltjes_integral",
    "stieltjes_integral_closed",
    "log_amplitude",
    "poisson_normalization",
    "poisson_log2_term",
    "poisson_log_cos_term",
    "poisson_log_cos_term_algebraic",
    "poisson_log_sin_term",
    "poisson_log_sin_term_algebraic",
    "moment_by_quadrature",
]

DEFAULT_DIGITS = 30
MAX_LEVELS = 12
# outermost abscissa: sinh(T_CAP) ~ 3e3, i.e. endpoint distances down to ~e^{-1e4}
T_CAP = 8.7


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadResult:
    value: mpfr
    est_error: mpfr
    levels_used: int


def _bits_for(digits: int) -> int:
    return int(math.ceil(digits * math.log2(10))) + 32


def integrate_de(
    f: Callable,
    a,
    b,
    target_digits: int = DEFAULT_DIGITS,
    *,
    distances: bool = False,
    max_levels: int = MAX_LEVELS,
) -> QuadResult:
    """Integrate ``f`` over ``(a, b)`` by level-doubling tanh-sinh.

    With ``distances=True`` the integrand is called as ``f(x, x - a, b - x)``.
    Levels are halved in step size until two successive estimates agree to
    ``target_digits`` (relative to ``max(1, |value|)``); the last difference is
    reported as ``est_error``.
    """
    bits = _bits_for(target_digits)
    with working(bits):
        a, b = mpfr(a), mpfr(b)
        half = (b - a) / 2
        mid = (a + b) / 2
        halfpi = gmpy2.const_pi() / 2
        tiny = mpfr(2) ** (-bits - 8)
        tol = mpfr(10) ** (-target_digits)

        def term(t):
            # returns w(t) f(x(t)) + w(-t) f(x(-t)) for t > 0, or the centre term
            s = halfpi * gmpy2.sinh(t)
            ch = gmpy2.cosh(s)
            w = halfpi * gmpy2.cosh(t) / (ch * ch) * half
            e = gmpy2.exp(-2 * s)
            # 1 - tanh(s) = 2e/(1+e), 1 + tanh(s) = 2/(1+e)
            dnear = half * 2 * e / (1 + e)
            dfar = half * 2 / (1 + e)
            if t == 0:
                x = mid
                v = f(x, half, half) if distances else f(x)
                return w * v
            xr, xl = b - dnear, a + dnear
            if distances:
                vr = f(xr, dfar, dnear)
                vl = f(xl, dnear, dfar)
            else:
                vr, vl = f(xr), f(xl)
            return w * (vr + vl)

        def side_sum(h, start, step):
            # sum terms at t = (start + k*step)*h, k = 0, 1, ... until negligible
            acc = mpfr(0)
            k = start
            small = 0
            while True:
                t = mpfr(k) * h
                if t > T_CAP:
                    break
                v = term(t)
                acc += v
                if abs(v) <= tiny * (abs(acc) + tiny):
                    small += 1
                    if small >= 3:
                        break
                else:
                    small = 0
                k += step
            return acc

        h = mpfr(1)
        raw = term(mpfr(0)) + side_sum(h, 1, 1)
        est = raw * h
        prev = None
        for level in range(1, max_levels + 1):
            h = h / 2
            raw += side_sum(h, 1, 2)
            est, prev = raw * h, est
            err = abs(est - prev)
            if err <= tol * max(abs(est), 1) and level >= 3:
                return QuadResult(est, err, level)
        raise QuadratureError(
            f"tanh-sinh did not reach {target_digits} digits in {max_levels} levels "
            f"(last difference {float(err):.3e})"
        )


# -- Stieltjes-type integrals ---------------------------------------------


def _check_t(which: int, t) -> None:
    if which not in (1, 2, 3, 4):
        raise ValueError("which must be 1, 2, 3 or 4")
    if which in (1, 2) and not t >= 1:
        raise DomainError(f"identity {which} needs t >= 1, got {t}")
    if which in (3, 4) and not t < -1:
        raise DomainError(f"identity {which} needs t < -1, got {t}")


def stieltjes_integral(which: int, t, target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """Direct quadrature of ``∫_0^1 g(x) / ((x+t) sqrt(x(1-x))) dx``.

    ``g = 1`` for identities 1 and 3, ``g = ln(1-x)`` for 2 and 4.
    """
    _check_t(which, t)
    bits = _bits_for(target_digits)
    with working(bits):
        tv = mpfr(t)
    log_kind = which in (2, 4)

    def f(x, dx, d1x):
        v = 1 / ((x + tv) * gmpy2.sqrt(dx * d1x))
        return v * gmpy2.log(d1x) if log_kind else v

    return integrate_de(f, 0, 1, target_digits, distances=True)


def stieltjes_integral_closed(which: int, t, bits: int = 160) -> mpfr:
    """Closed forms of the four Stieltjes-type integrals.

    For ``t < -1`` every square root is the positive root of a positive
    number: ``sqrt(t(t+1))`` and ``(sqrt(-t) + sqrt(-t-1))**2`` in place of
    ``(sqrt t + sqrt(t+1))**2``.  Direct quadrature confirms this reading; the
    literal ``i sqrt(-c)`` branch for both factors of ``sqrt t sqrt(t+1)`` would
    flip the sign.
    """
    _check_t(which, t)
    with working(bits + 32):
        tv = mpfr(t)
        pi = gmpy2.const_pi()
        root = gmpy2.sqrt(tv * (tv + 1))
        if which == 1:
            r = pi / root
        elif which == 3:
            r = -pi / root
        elif which == 2:
            r = pi * gmpy2.log((tv + 1) / (gmpy2.sqrt(tv) + gmpy2.sqrt(tv + 1)) ** 2) / root
        else:
            s = -tv
            r = -pi * gmpy2.log((s - 1) / (gmpy2.sqrt(s) + gmpy2.sqrt(s - 1)) ** 2) / root
    return mpfr(r, bits)


# -- Poisson-kernel integrals -----------------------------------------------


def _poisson_integral(g, r, theta, target_digits: int, cuts=(0,)) -> QuadResult:
    """``∫_{-π}^{π} g(t, dist) P_r(θ - t) dt`` with ``P_r = (1-r²)/(1 - 2r cos(θ-t) + r²)``.

    The interval is split at ``cuts`` (points strictly inside ``(-π, π)``);
    ``g`` receives ``t`` and the signed distances to the enclosing cut points.
    """
    bits = _bits_for(target_digits)
    with working(bits):
        pi = gmpy2.const_pi()
        rv, th = mpfr(r), mpfr(theta)
        pts = [-pi] + [mpfr(c) for c in cuts] + [pi]
        total, err, lev = mpfr(0), mpfr(0), 0
        for lo, hi in zip(pts[:-1], pts[1:]):

            def f(t, dlo, dhi, lo=lo, hi=hi):
                k = (1 - rv * rv) / (1 - 2 * rv * gmpy2.cos(th - t) + rv * rv)
                return g(t, lo, dlo, hi, dhi) * k

            q = integrate_de(f, lo, hi, target_digits, distances=True)
            total += q.value
            err += q.est_error
            lev = max(lev, q.levels_used)
    return QuadResult(total, err, lev)


def _log_weight_terms(params: WeightParams, bits: int):
    """``ln(cos^{2α}(t/2) sin^{2β}(t/2) |sin t|)`` on ``(-π, 0)`` and ``(0, π)``.

    Evaluated via the distance to the nearest singular point so the logs stay
    accurate next to ``t = 0`` and ``t = ±π``.
    """
    a, b = params.alpha_mp(bits), params.beta_mp(bits)
    l2 = gmpy2.log(mpfr(2))

    def g(t, lo, dlo, hi, dhi):
        # on (0, π): sin(t/2) from dlo = t, cos(t/2) = sin((π - t)/2) from dhi
        # on (-π, 0): |sin(t/2)| from dhi = -t, cos(t/2) = sin((π + t)/2) from dlo
        if lo == 0:
            ds, dc = dlo, dhi
        else:
            ds, dc = dhi, dlo
        ls = gmpy2.log(gmpy2.sin(ds / 2))
        lc = gmpy2.log(gmpy2.sin(dc / 2))
        # |sin t| = 2 |sin(t/2)| cos(t/2)
        return 2 * a * lc + 2 * b * ls + l2 + ls + lc

    return g


def log_amplitude(r, theta, params: WeightParams, target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """``ln|A(r e^{iθ})|`` from its Poisson-kernel integral, for ``r > 1``."""
    bits = _bits_for(target_digits)
    with working(bits):
        if not mpfr(r) > 1:
            raise DomainError("log_amplitude needs r > 1")
        g = _log_weight_terms(params, bits)
        q = _poisson_integral(g, r, theta, target_digits)
        scale = 1 / (4 * gmpy2.const_pi())
        return QuadResult(q.value * scale, q.est_error * scale, q.levels_used)


def poisson_normalization(r, theta=0, target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """``(1/2π) ∫ P_r(θ - t) dt``; equals ``-1`` for ``r > 1``."""
    bits = _bits_for(target_digits)
    with working(bits):
        q = _poisson_integral(lambda *args: mpfr(1), r, theta, target_digits)
        scale = 1 / (2 * gmpy2.const_pi())
        return QuadResult(q.value * scale, q.est_error * scale, q.levels_used)


def _eta():
    return 3 + 2 * gmpy2.sqrt(mpfr(2))


def _half_circle(g, target_digits: int) -> QuadResult:
    """``(1/2π) ∫_0^π g(t) (1-η²)/(1 + 2η cos t + η²) dt`` with ``η = (1+sqrt 2)²``."""
    bits = _bits_for(target_digits)
    with working(bits):
        et = _eta()

        def f(t, d0, dpi):
            k = (1 - et * et) / (1 + 2 * et * gmpy2.cos(t) + et * et)
            return g(t, d0, dpi) * k

        q = integrate_de(f, 0, gmpy2.const_pi(), target_digits, distances=True)
        scale = 1 / (2 * gmpy2.const_pi())
        return QuadResult(q.value * scale, q.est_error * scale, q.levels_used)


def poisson_log2_term(target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """``(ln 2/2π) ∫_0^π (1-η²)/(1 + 2η cos t + η²) dt``; equals ``-ln2/2``."""
    q = _half_circle(lambda t, d0, dpi: gmpy2.log(mpfr(2)), target_digits)
    return q


def poisson_log_cos_term(target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """``(1/2π) ∫_0^π ln cos(t/2) (1-η²)/(1 + 2η cos t + η²) dt``; equals ``ln(1+sqrt 2)/2``."""
    return _half_circle(lambda t, d0, dpi: gmpy2.log(gmpy2.sin(dpi / 2)), target_digits)


def poisson_log_sin_term(target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """``(1/2π) ∫_0^π ln sin(t/2) (1-η²)/(1 + 2η cos t + η²) dt``."""
    return _half_circle(lambda t, d0, dpi: gmpy2.log(gmpy2.sin(d0 / 2)), target_digits)


def poisson_log_cos_term_algebraic(target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """``(sqrt2/4π) ∫_0^1 ln(1-y) / (sqrt(y(1-y)) (y-2)) dy``."""
    bits = _bits_for(target_digits)

    def f(y, dy, d1y):
        return gmpy2.log(d1y) / (gmpy2.sqrt(dy * d1y) * (y - 2))

    q = integrate_de(f, 0, 1, target_digits, distances=True)
    with working(bits):
        scale = gmpy2.sqrt(mpfr(2)) / (4 * gmpy2.const_pi())
        return QuadResult(q.value * scale, q.est_error * scale, q.levels_used)


def poisson_log_sin_term_algebraic(target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """``-(sqrt2/4π) ∫_0^1 ln(1-y) / (sqrt(y(1-y)) (y+1)) dy``."""
    bits = _bits_for(target_digits)

    def f(y, dy, d1y):
        return gmpy2.log(d1y) / (gmpy2.sqrt(dy * d1y) * (y + 1))

    q = integrate_de(f, 0, 1, target_digits, distances=True)
    with working(bits):
        scale = -gmpy2.sqrt(mpfr(2)) / (4 * gmpy2.const_pi())
        return QuadResult(q.value * scale, abs(q.est_error * scale), q.levels_used)


def moment_by_quadrature(params: WeightParams, k: int, target_digits: int = DEFAULT_DIGITS) -> QuadResult:
    """``∫_0^1 x^{k+α} (1-x)^β dx`` by direct quadrature."""
    bits = _bits_for(target_digits)
    a, b = params.alpha_mp(bits), params.beta_mp(bits)

    def f(x, dx, d1x):
        return dx ** (k + a) * d1x**b

    return integrate_de(f, 0, 1, target_digits, distances=True)
