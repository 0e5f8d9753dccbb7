"""Arbitrary-precision scalar kernel.

Every big-float in the package is a :class:`gmpy2.mpfr` (complex values are
:class:`gmpy2.mpc`).  MPFR rounds ``+ - * /`` and ``sqrt`` correctly (round to
nearest, ties to even); the exponent range is about ``2**±1e9``, far below
anything a Hankel matrix of this family can produce.

Precision is always passed explicitly as a number of mantissa bits.  A
function that strings several operations together works at ``bits + GUARD_BITS``
and rounds its result back to ``bits`` on exit.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from functools import lru_cache
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpc, mpfr

__all__ = [
    "GUARD_BITS",
    "GAMMA_GUARD_BITS",
    "MIN_BITS",
    "DomainError",
    "working",
    "check_bits",
    "to_mpfr",
    "gamma",
    "const_pi",
    "const_sqrt2",
    "ln",
    "exp",
    "pow",
    "complex_sqrt",
    "parse",
    "format_sci",
]

MIN_BITS = 64
GUARD_BITS = 32
# documented bound: |gamma(x) - Γ(x)| / Γ(x) <= 2**(GAMMA_GUARD_BITS - bits)
GAMMA_GUARD_BITS = 4

Number = Union[int, float, str, mpfr]


class DomainError(ValueError):
    """Argument outside the domain of a real function."""


def check_bits(bits: int) -> int:
    bits = int(bits)
    if bits < MIN_BITS:
        raise ValueError(f"precision must be at least {MIN_BITS} bits, got {bits}")
    return bits


@contextmanager
def working(bits: int) -> Iterator[gmpy2.context]:
    """Run a block at ``bits`` of precision with the widest exponent range."""
    ctx = gmpy2.context(
        precision=bits,
        real_prec=bits,
        imag_prec=bits,
        emax=gmpy2.get_emax_max(),
        emin=gmpy2.get_emin_min(),
    )
    with ctx:
        yield ctx


def to_mpfr(x: Number, bits: int) -> mpfr:
    """Convert ``x`` to an mpfr with ``bits`` of mantissa.

    Strings are parsed in decimal at the target precision, so ``"-0.5"`` and
    ``"-7/8"`` style inputs (the latter via ``fractions`` in the caller) come
    out exactly when they are dyadic.
    """
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            with working(bits + GUARD_BITS):
                q = mpfr(num.strip()) / mpfr(den.strip())
            return mpfr(q, bits)
        return mpfr(s, bits)
    return mpfr(x, bits)


def _round(x, bits: int):
    if isinstance(x, mpc):
        return mpc(x, (bits, bits))
    return mpfr(x, bits)


def const_pi(bits: int) -> mpfr:
    with working(bits):
        return gmpy2.const_pi()


def const_sqrt2(bits: int) -> mpfr:
    with working(bits):
        return gmpy2.sqrt(mpfr(2))


def ln(x: Number, bits: int) -> mpfr:
    with working(bits + GUARD_BITS):
        x = mpfr(x) if not isinstance(x, str) else to_mpfr(x, bits + GUARD_BITS)
        if not x > 0:
            raise DomainError(f"ln requires x > 0, got {x}")
        r = gmpy2.log(x)
    return _round(r, bits)


def exp(x: Number, bits: int) -> mpfr:
    with working(bits + GUARD_BITS):
        x = mpfr(x) if not isinstance(x, str) else to_mpfr(x, bits + GUARD_BITS)
        r = gmpy2.exp(x)
    return _round(r, bits)


def pow(x: Number, y: Number, bits: int) -> mpfr:  # noqa: A001 - mirrors math.pow
    """``x**y``; negative ``x`` is allowed only for integer ``y``."""
    with working(bits + GUARD_BITS):
        xv = to_mpfr(x, bits + GUARD_BITS) if isinstance(x, str) else mpfr(x)
        yv = to_mpfr(y, bits + GUARD_BITS) if isinstance(y, str) else mpfr(y)
        if xv < 0 and not gmpy2.is_integer(yv):
            raise DomainError(f"pow({x}, {y}) needs x > 0 for non-integer y")
        if xv == 0 and yv <= 0:
            raise DomainError(f"pow(0, {y}) is undefined")
        r = xv**yv
    return _round(r, bits)


def complex_sqrt(z, bits: int | None = None) -> mpc:
    """Principal square root: the result has non-negative real part.

    On the negative real axis (``z = -x + 0i``) the root is ``+i*sqrt(x)``.
    """
    if bits is None:
        bits = z.precision[0] if isinstance(z, mpc) else gmpy2.get_context().precision
    with working(bits + GUARD_BITS):
        z = mpc(z)
        x, y = z.real, z.imag
        if y == 0:
            if x >= 0:
                w = mpc(gmpy2.sqrt(x), 0)
            else:
                w = mpc(0, gmpy2.sqrt(-x))
        else:
            # stable form: never subtracts nearly equal quantities
            r = gmpy2.sqrt((abs(z) + abs(x)) / 2)
            if x >= 0:
                w = mpc(r, y / (2 * r))
            else:
                w = mpc(abs(y) / (2 * r), r if y > 0 else -r)
    return _round(w, bits)


# -- Gamma ------------------------------------------------------------------


@lru_cache(maxsize=32)
def _spouge_coefficients(a: int, wbits: int) -> tuple:
    """Coefficients c_0..c_{a-1} of Spouge's formula at working precision."""
    with working(wbits):
        c = [gmpy2.sqrt(2 * gmpy2.const_pi())]
        fact = mpfr(1)  # (k-1)!
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            t = mpfr(a - k)
            ck = t ** (mpfr(k) - mpfr("0.5")) * gmpy2.exp(t) / fact
            c.append(ck if k % 2 == 1 else -ck)
    return tuple(c)


def _spouge_parameter(bits: int) -> int:
    # relative error of the truncated series is below a**-0.5 * (2π)**-(a+0.5)
    return int(math.ceil((bits + GAMMA_GUARD_BITS) * math.log(2) / math.log(2 * math.pi))) + 1


def gamma(x: Number, bits: int) -> mpfr:
    """Gamma function for real ``x > 0`` by Spouge's approximation.

    The Spouge parameter ``a`` is chosen from ``bits`` so that the truncation
    error stays below ``2**-(bits+GAMMA_GUARD_BITS)``.  The coefficient sum
    cancels heavily (terms reach about ``exp(a)``), so the series runs with an
    extra ``1.5*a`` bits.  Arguments below 1 are shifted up by the recurrence
    ``Γ(x) = Γ(x+1)/x``.
    """
    bits = check_bits(bits)
    a = _spouge_parameter(bits)
    wbits = bits + GUARD_BITS + int(1.5 * a) + 16
    with working(wbits):
        xv = to_mpfr(x, wbits) if isinstance(x, str) else mpfr(x)
        if not xv > 0:
            raise DomainError(f"gamma is implemented for x > 0 only, got {x}")
        shift = mpfr(1)
        while xv < 1:
            shift *= xv
            xv += 1
        z = xv - 1  # Γ(xv) = Γ(z+1)
        c = _spouge_coefficients(a, wbits)
        s = c[0]
        for k in range(1, a):
            s += c[k] / (z + k)
        za = z + a
        r = gmpy2.exp((z + mpfr("0.5")) * gmpy2.log(za) - za) * s / shift
    return mpfr(r, bits)


# -- decimal I/O ------------------------------------------------------------


def parse(s: str, bits: int) -> mpfr:
    """Parse a decimal string (plain or scientific) at ``bits`` of precision."""
    return to_mpfr(s, bits)


def format_sci(x, digits: int = 6, exp_digits: int = 2, e: str = "E") -> str:
    """Scientific notation with ``digits`` significant digits.

    ``format_sci(mpfr('8.02951e-36'), 5)`` gives ``'8.0295E-36'``.
    The exponent is zero-padded to ``exp_digits`` and never truncated.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    if not isinstance(x, mpfr):
        # plain conversion would round to the ambient (53-bit) context
        x = mpfr(x, max(64, int(digits * 3.33) + 16))
    if gmpy2.is_zero(x):
        mant, exp10 = "0" * digits, 1
        sign = "-" if gmpy2.is_signed(x) else ""
    elif not gmpy2.is_finite(x):
        return str(x)
    else:
        mant, exp10, _ = x.digits(10, digits)
        sign = ""
        if mant.startswith("-"):
            sign, mant = "-", mant[1:]
    expo = exp10 - 1
    body = mant[0] + ("." + mant[1:] if digits > 1 else "")
    esign = "-" if expo < 0 else "+"
    return f"{sign}{body}{e}{esign}{abs(expo):0{exp_digits}d}"
