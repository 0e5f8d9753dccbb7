"""Closed-form large-N asymptotics for the Hankel matrices of x^α(1-x)^β.

All O(1)-sized constants are evaluated at ``DEFAULT_BITS``; the estimate of
``lambda_N`` spans thousands of decimal orders and relies on MPFR's wide
exponent range rather than on extra mantissa.
"""
from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .moments import WeightParams
from .mpcore import DomainError, complex_sqrt, working

__all__ = [
    "DEFAULT_BITS",
    "AsymptoticEstimate",
    "ErrorRecord",
    "eta",
    "zeta_map",
    "zeta_modulus_on_circle",
    "g_second_derivative_at_pi",
    "neg_log_zeta_second_derivative_at_pi",
    "amplitude_at_minus_one",
    "amplitude_from_definition",
    "psi",
    "psi_from_definition",
    "lambda_asymptotic",
    "lambda_asymptotic_psi_form",
    "lambda_szego",
    "sigma_asymptotic",
    "error_record",
]

DEFAULT_BITS = 256


@dataclass(frozen=True)
class AsymptoticEstimate:
    params: WeightParams
    N: int
    lambda_theoretical: mpfr


@dataclass(frozen=True)
class ErrorRecord:
    params: WeightParams
    N: int
    lambda_numerical: mpfr
    lambda_theoretical: mpfr
    signed_error_percent: float

    @property
    def size(self) -> int:
        return self.N + 1

    @property
    def error_percent(self) -> float:
        return abs(self.signed_error_percent)


def eta(bits: int = DEFAULT_BITS) -> mpfr:
    """``(1 + sqrt 2)**2 = 3 + 2 sqrt 2 = |ζ(-1)|``."""
    with working(bits):
        return 3 + 2 * gmpy2.sqrt(mpfr(2))


def zeta_map(z, bits: int = DEFAULT_BITS, cut_tol: float = 0.0) -> mpc:
    """Exterior map ``ζ(z) = (sqrt z + sqrt(z-1))**2`` of C minus [0, 1].

    The two roots are taken on the branch that is positive for real ``z > 1``;
    equivalently ``sqrt z * sqrt(z-1)`` is continued as ``sqrt(z(z-1))`` with
    the sign that keeps ``|ζ| > 1``.
    """
    with working(bits + 32):
        z = mpc(z)
        if z.imag == 0 and -cut_tol <= z.real <= 1 + cut_tol:
            raise DomainError(f"zeta_map is undefined on the cut [0, 1], got {z}")
        # ζ = 2z - 1 + 2 sqrt(z) sqrt(z-1); choose the root of z(z-1) with |ζ| > 1
        r = complex_sqrt(z * (z - 1), bits + 32)
        w = 2 * z - 1
        zeta = w + 2 * r
        if abs(zeta) < 1:
            zeta = w - 2 * r
    return mpc(zeta, (bits, bits))


def zeta_modulus_on_circle(theta, bits: int = DEFAULT_BITS) -> mpfr:
    """``|ζ(e^{iθ})| = 1 + s + sqrt(s**2 + 2 s)`` with ``s = sqrt(2 - 2 cos θ)``."""
    with working(bits + 32):
        u = 2 - 2 * gmpy2.cos(mpfr(theta))
        s = gmpy2.sqrt(u)
        r = 1 + s + gmpy2.sqrt(u + 2 * s)
    return mpfr(r, bits)


def g_second_derivative_at_pi(bits: int = DEFAULT_BITS) -> mpfr:
    """``d²/dθ² |ζ(e^{iθ})|`` at ``θ = π``: ``-1/2 - 3 sqrt(2)/8``."""
    with working(bits):
        return -mpfr(1) / 2 - 3 * gmpy2.sqrt(mpfr(2)) / 8


def neg_log_zeta_second_derivative_at_pi(bits: int = DEFAULT_BITS) -> mpfr:
    """``-d²/dθ² ln|ζ(e^{iθ})|`` at ``θ = π``, equal to ``sqrt(2)/8``."""
    with working(bits):
        return gmpy2.sqrt(mpfr(2)) / 8


def amplitude_at_minus_one(params: WeightParams, bits: int = DEFAULT_BITS) -> mpfr:
    """``|A(ζ(-1))| = 2**(-3/4) (1+sqrt 2)**(α+1) (1+1/sqrt 2)**β``."""
    wb = bits + 32
    a, b = params.alpha_mp(wb), params.beta_mp(wb)
    with working(wb):
        s = gmpy2.sqrt(mpfr(2))
        r = mpfr(2) ** (mpfr(-3) / 4) * (1 + s) ** (a + 1) * (1 + 1 / s) ** b
    return mpfr(r, bits)


def amplitude_from_definition(params: WeightParams, bits: int = DEFAULT_BITS) -> mpfr:
    """``|A(ζ(-1))|`` rebuilt from its three residue integrals.

    ``ln|A| = (a) + (2α+1)(b) + (2β+1)(c)`` with ``(a) = -ln2/2``,
    ``(b) = ln(1+sqrt 2)/2`` and ``(c) = ln(1+sqrt 2)/2 - ln2/4``.
    """
    wb = bits + 32
    a, b = params.alpha_mp(wb), params.beta_mp(wb)
    with working(wb):
        l2 = gmpy2.log(mpfr(2))
        L = gmpy2.log(1 + gmpy2.sqrt(mpfr(2)))
        r = gmpy2.exp(-l2 / 2 + (2 * a + 1) * L / 2 + (2 * b + 1) * (L / 2 - l2 / 4))
    return mpfr(r, bits)


def psi(params: WeightParams, bits: int = DEFAULT_BITS) -> mpfr:
    """``ψ(α,β) = 2**(-3/4) π**(-3/2) (1+sqrt 2)**(2α+2) (1+1/sqrt 2)**(2β)``."""
    wb = bits + 32
    a, b = params.alpha_mp(wb), params.beta_mp(wb)
    with working(wb):
        s = gmpy2.sqrt(mpfr(2))
        pi = gmpy2.const_pi()
        r = (
            mpfr(2) ** (mpfr(-3) / 4)
            * pi ** (mpfr(-3) / 2)
            * (1 + s) ** (2 * a + 2)
            * (1 + 1 / s) ** (2 * b)
        )
    return mpfr(r, bits)


def psi_from_definition(params: WeightParams, bits: int = DEFAULT_BITS) -> mpfr:
    """``|A|² sqrt(η) / (sqrt 2 π^{3/2} sqrt|g''(π)|)``, assembled factor by factor."""
    wb = bits + 32
    A = amplitude_at_minus_one(params, wb)
    g2 = g_second_derivative_at_pi(wb)
    with working(wb):
        pi = gmpy2.const_pi()
        r = A * A * gmpy2.sqrt(eta(wb)) / (gmpy2.sqrt(mpfr(2)) * pi ** (mpfr(3) / 2) * gmpy2.sqrt(abs(g2)))
    return mpfr(r, bits)


def lambda_asymptotic(params: WeightParams, N: int, bits: int = DEFAULT_BITS) -> AsymptoticEstimate:
    """``2^{15/4} π^{3/2} (1+sqrt 2)^{-2α} (1+1/sqrt 2)^{-2β} sqrt(N) (1+sqrt 2)^{-4(N+1)}``."""
    if N < 1:
        raise ValueError("the asymptotic estimate needs N >= 1")
    wb = bits + 32
    a, b = params.alpha_mp(wb), params.beta_mp(wb)
    with working(wb):
        s = gmpy2.sqrt(mpfr(2))
        pi = gmpy2.const_pi()
        r = (
            mpfr(2) ** (mpfr(15) / 4)
            * pi ** (mpfr(3) / 2)
            * (1 + s) ** (-2 * a)
            * (1 + 1 / s) ** (-2 * b)
            * gmpy2.sqrt(mpfr(N))
            * (1 + s) ** (-4 * (N + 1))
        )
    return AsymptoticEstimate(params, N, mpfr(r, bits))


def lambda_asymptotic_psi_form(params: WeightParams, N: int, bits: int = DEFAULT_BITS) -> mpfr:
    """The same estimate written as ``8 sqrt(N) / (ψ (1+sqrt 2)^{4N+2})``."""
    wb = bits + 32
    p = psi(params, wb)
    with working(wb):
        r = 8 * gmpy2.sqrt(mpfr(N)) / (p * (1 + gmpy2.sqrt(mpfr(2))) ** (4 * N + 2))
    return mpfr(r, bits)


def lambda_szego(N: int, bits: int = DEFAULT_BITS) -> mpfr:
    """Uniform weight on [0, 1]: ``2^{15/4} π^{3/2} sqrt(N) (sqrt 2 - 1)^{4N+4}``."""
    with working(bits + 32):
        r = (
            mpfr(2) ** (mpfr(15) / 4)
            * gmpy2.const_pi() ** (mpfr(3) / 2)
            * gmpy2.sqrt(mpfr(N))
            * (gmpy2.sqrt(mpfr(2)) - 1) ** (4 * N + 4)
        )
    return mpfr(r, bits)


def sigma_asymptotic(m: int, n: int, params: WeightParams, bits: int = DEFAULT_BITS) -> mpfr:
    """Leading behaviour of ``σ_{m,n} = (A_N A_N^T)_{m,n}`` for large ``m, n``.

    ``σ_{m,n} ~ ψ (-1)^{m-n} η^{m+n} / sqrt(m+n)``.  A Laplace expansion of the
    contour integral around ``θ = π`` gives the prefactor
    ``2^{3/4} π^{-3/2} |A(-1)|^2``, which equals ``ψ``.  Halving it leaves a
    factor-two gap against direct quadrature of ``σ_{40,40}``.
    """
    if m + n < 1:
        raise ValueError("sigma_asymptotic needs m + n >= 1")
    wb = bits + 32
    A = amplitude_at_minus_one(params, wb)
    with working(wb):
        r = (
            mpfr(2) ** (mpfr(3) / 4)
            * gmpy2.const_pi() ** (mpfr(-3) / 2)
            * A
            * A
            * (1 + gmpy2.sqrt(mpfr(2))) ** (2 * (m + n))
            / gmpy2.sqrt(mpfr(m + n))
        )
        if (m - n) % 2:
            r = -r
    return mpfr(r, bits)


def error_record(numerical, theoretical: AsymptoticEstimate) -> ErrorRecord:
    """Signed percent error ``(theoretical - numerical)/numerical * 100``."""
    if numerical.params is not None and (
        numerical.params != theoretical.params or numerical.N != theoretical.N
    ):
        raise ValueError(
            f"mismatched inputs: numerical ({numerical.params}, N={numerical.N}) vs "
            f"theoretical ({theoretical.params}, N={theoretical.N})"
        )
    num, th = numerical.lambda_min, theoretical.lambda_theoretical
    with working(max(num.precision, th.precision) + 32):
        pct = (th - num) / num * 100
    return ErrorRecord(theoretical.params, theoretical.N, num, th, float(pct))
