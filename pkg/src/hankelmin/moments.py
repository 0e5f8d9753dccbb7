"""Moments of the Jacobi-type weight x**alpha * (1-x)**beta on [0, 1]."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpfr

from .mpcore import GUARD_BITS, DomainError, check_bits, gamma, to_mpfr, working

__all__ = ["WeightParams", "MomentTable", "HankelMatrix", "moment_table", "hankel_matrix"]


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


@dataclass(frozen=True)
class WeightParams:
    """Exponents of ``w(x) = x**alpha * (1-x)**beta``.

    Both exponents are held as exact fractions, so ``"-7/8"``, ``"-0.875"``
    and ``-0.875`` all name the same weight.
    """

    alpha: Fraction
    beta: Fraction

    def __init__(self, alpha, beta):
        a, b = _as_fraction(alpha), _as_fraction(beta)
        if not (a > -1 and b > -1):
            raise DomainError(f"weight exponents must exceed -1, got alpha={a}, beta={b}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def alpha_mp(self, bits: int) -> mpfr:
        return _frac_to_mpfr(self.alpha, bits)

    def beta_mp(self, bits: int) -> mpfr:
        return _frac_to_mpfr(self.beta, bits)

    def label(self) -> str:
        return f"{format_fraction(self.alpha)},{format_fraction(self.beta)}"


def _frac_to_mpfr(q: Fraction, bits: int) -> mpfr:
    with working(bits):
        return mpfr(q.numerator) / mpfr(q.denominator)


def format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    f = float(q)
    if Fraction(repr(f)) == q:
        return repr(f)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class MomentTable:
    """``h[k] = ∫_0^1 x**k w(x) dx`` for ``k = 0..len(h)-1``."""

    params: WeightParams
    h: tuple
    bits: int

    @property
    def max_index(self) -> int:
        return len(self.h) - 1

    def __getitem__(self, k: int) -> mpfr:
        return self.h[k]


def moment_table(params: WeightParams, max_index: int, bits: int) -> MomentTable:
    """Moments ``h_0..h_max_index`` at ``bits`` of precision.

    ``h_0`` is the Beta integral ``Γ(α+1)Γ(β+1)/Γ(α+β+2)``; the rest follow from
    ``h_{k+1} = h_k (α+k+1)/(α+β+k+2)``, which costs one multiply and one
    divide per moment and loses no accuracy to cancellation.
    """
    bits = check_bits(bits)
    if max_index < 0:
        raise ValueError("max_index must be >= 0")
    wb = bits + GUARD_BITS
    a, b = params.alpha_mp(wb), params.beta_mp(wb)
    with working(wb):
        h0 = gamma(a + 1, wb) * gamma(b + 1, wb) / gamma(a + b + 2, wb)
        hs = [h0]
        for k in range(max_index):
            hs.append(hs[-1] * (a + k + 1) / (a + b + k + 2))
    return MomentTable(params, tuple(mpfr(v, bits) for v in hs), bits)


@dataclass(frozen=True)
class HankelMatrix:
    """``H[m][n] = h_{m+n}`` for ``m, n = 0..N``.

    Only the ``2N+1`` distinct moments are stored; :meth:`dense` builds a
    full working copy.
    """

    params: WeightParams
    N: int
    moments: MomentTable = field(repr=False)

    @property
    def size(self) -> int:
        return self.N + 1

    @property
    def bits(self) -> int:
        return self.moments.bits

    def __getitem__(self, idx) -> mpfr:
        m, n = idx
        if not (0 <= m <= self.N and 0 <= n <= self.N):
            raise IndexError(idx)
        return self.moments.h[m + n]

    def dense(self) -> list[list[mpfr]]:
        h = self.moments.h
        return [[h[m + n] for n in range(self.N + 1)] for m in range(self.N + 1)]

    def trace(self) -> mpfr:
        with working(self.bits + GUARD_BITS):
            t = gmpy2.fsum(self.moments.h[2 * k] for k in range(self.N + 1))
        return mpfr(t, self.bits)

    def at_precision(self, bits: int) -> "HankelMatrix":
        if bits == self.bits:
            return self
        return hankel_matrix(self.params, self.N, bits)


def hankel_matrix(params: WeightParams, N: int, bits: int) -> HankelMatrix:
    if N < 0:
        raise ValueError("N must be >= 0")
    return HankelMatrix(params, N, moment_table(params, 2 * N, bits))


def leading_minors(H: HankelMatrix | Sequence[Sequence], bits: int) -> list[mpfr]:
    """Leading principal minors by exact-order Gaussian elimination."""
    rows = H.dense() if isinstance(H, HankelMatrix) else [list(r) for r in H]
    n = len(rows)
    out = []
    with working(bits):
        a = [[mpfr(v) for v in r] for r in rows]
        det = mpfr(1)
        for k in range(n):
            piv = a[k][k]
            det *= piv
            out.append(det)
            if piv == 0:
                break
            for i in range(k + 1, n):
                f = a[i][k] / piv
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return out
