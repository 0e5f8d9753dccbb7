"""Smallest eigenvalue of a Hankel moment matrix in multiprecision.

Pipeline: one Householder reduction to tridiagonal form, Sturm-count
bisection until the smallest eigenvalue is isolated within a factor two, then
a safeguarded secant iteration on the last LDL^T pivot.  Every probe after the
reduction costs O(N) big-float operations.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .moments import HankelMatrix, WeightParams, hankel_matrix
from .mpcore import check_bits, working

__all__ = [
    "Tridiagonal",
    "EigenResult",
    "PrecisionPolicy",
    "PrecisionExhausted",
    "ZeroPivot",
    "tridiagonalize",
    "inertia_below",
    "smallest_eigenvalue",
    "smallest_eigenvalue_auto",
]

log = logging.getLogger(__name__)

# 4*log2(1+sqrt(2)) = 5.0862..., rounded up
SLOPE_BITS_PER_ROW = 5.0874


class PrecisionExhausted(ArithmeticError):
    """The working precision cannot resolve the smallest eigenvalue."""

    def __init__(self, message: str, recommended_bits: int):
        super().__init__(f"{message} (try >= {recommended_bits} bits)")
        self.recommended_bits = recommended_bits


class ZeroPivot(ArithmeticError):
    """A pivot of the shifted LDL^T recurrence vanished exactly."""


@dataclass(frozen=True)
class Tridiagonal:
    diag: tuple
    offdiag: tuple
    bits: int
    offdiag_sq: tuple = field(repr=False, default=())

    def __post_init__(self):
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise ValueError("offdiag must have len(diag) - 1 entries")
        if not self.offdiag_sq:
            with working(self.bits):
                object.__setattr__(self, "offdiag_sq", tuple(e * e for e in self.offdiag))

    @property
    def size(self) -> int:
        return len(self.diag)

    def gershgorin_upper(self) -> mpfr:
        n = self.size
        with working(self.bits):
            best = None
            for i in range(n):
                r = self.diag[i]
                if i > 0:
                    r += abs(self.offdiag[i - 1])
                if i < n - 1:
                    r += abs(self.offdiag[i])
                best = r if best is None or r > best else best
        return best


@dataclass(frozen=True)
class EigenResult:
    lambda_min: mpfr
    prec_used: int
    bisection_steps: int
    secant_steps: int
    bracket: tuple
    elapsed: float
    params: WeightParams | None = None
    N: int | None = None


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working precision as a function of matrix size.

    ``lambda_N / ||H_N||`` decays like ``(1+sqrt 2)**(-4(N+1))``, so every row
    costs about 5.09 bits; on top of that come ``base_guard_bits`` for the
    requested accuracy and ``10*log2(N+2)`` for rounding growth in the
    reduction.
    """

    base_guard_bits: int = 96
    slope_bits_per_order: float = SLOPE_BITS_PER_ROW
    override_bits: int | None = None

    def bits(self, N: int) -> int:
        if self.override_bits is not None:
            return check_bits(self.override_bits)
        return (
            math.ceil(self.slope_bits_per_order * (N + 1))
            + self.base_guard_bits
            + math.ceil(10 * math.log2(N + 2))
        )


def tridiagonalize(H: HankelMatrix, bits: int | None = None) -> Tridiagonal:
    """Householder reduction ``Q^T H Q = T`` of the dense Hankel matrix."""
    bits = check_bits(bits if bits is not None else H.bits)
    n = H.size
    with working(bits):
        h = [mpfr(v) for v in H.moments.h]
        A = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                A[i, j] = h[i + j]
        diag, off = [], []
        zero = mpfr(0)
        for k in range(n - 2):
            x = A[k + 1 :, k]
            s2 = gmpy2.fsum(v * v for v in x)
            diag.append(A[k, k])
            if s2 == 0:
                off.append(zero)
                continue
            s = gmpy2.sqrt(s2)
            x0 = x[0]
            alpha = -s if x0 >= 0 else s
            v = x.copy()
            v[0] = x0 - alpha
            # v^T v = 2 s (s + |x0|)
            beta = 1 / (s * (s + abs(x0)))
            B = A[k + 1 :, k + 1 :]
            p = B.dot(v) * beta
            K = p.dot(v) * beta / 2
            w = p - v * K
            B -= np.multiply.outer(v, w) + np.multiply.outer(w, v)
            off.append(alpha)
        if n >= 2:
            diag.append(A[n - 2, n - 2])
            off.append(A[n - 1, n - 2])
        diag.append(A[n - 1, n - 1])
    return Tridiagonal(tuple(diag), tuple(off), bits)


def _sturm(T: Tridiagonal, shift: mpfr) -> tuple[int, mpfr]:
    """Negative-pivot count and last pivot of ``T - shift I = L D L^T``."""
    d, e2 = T.diag, T.offdiag_sq
    with working(T.bits):
        q = d[0] - shift
        if q == 0:
            raise ZeroPivot(0)
        count = 1 if q < 0 else 0
        for i in range(1, len(d)):
            q = (d[i] - shift) - e2[i - 1] / q
            if q == 0:
                raise ZeroPivot(i)
            if q < 0:
                count += 1
    if not gmpy2.is_finite(q):
        raise PrecisionExhausted("non-finite pivot", 2 * T.bits)
    return count, q


def inertia_below(T: Tridiagonal, shift) -> int:
    """Number of eigenvalues of ``T`` strictly below ``shift``.

    Raises :class:`ZeroPivot` when ``shift`` hits a pivot zero exactly; the
    solver then nudges the shift by one ulp.
    """
    with working(T.bits):
        shift = mpfr(shift)
    return _sturm(T, shift)[0]


def _probe(T: Tridiagonal, shift: mpfr, toward_up: bool = True) -> tuple[int, mpfr, mpfr]:
    """Sturm probe that steps off exact zero pivots one ulp at a time."""
    with working(T.bits):
        for _ in range(64):
            try:
                c, q = _sturm(T, shift)
                return c, q, shift
            except ZeroPivot:
                shift = gmpy2.next_above(shift) if toward_up else gmpy2.next_below(shift)
    raise PrecisionExhausted("repeated zero pivots", 2 * T.bits)


def smallest_eigenvalue(
    H: HankelMatrix,
    rel_tol: float = 1e-6,
    policy: PrecisionPolicy | None = None,
    *,
    bits: int | None = None,
    max_iter: int = 20000,
) -> EigenResult:
    """Smallest eigenvalue of ``H`` with a certified bracket.

    On return ``lo <= lambda_min <= hi`` with ``inertia_below(lo) == 0``,
    ``inertia_below(hi) >= 1`` and ``(hi - lo)/lo <= rel_tol``.
    """
    if not 0 < rel_tol < 1:
        raise ValueError("rel_tol must lie in (0, 1)")
    policy = policy or PrecisionPolicy()
    bits = check_bits(bits if bits is not None else policy.bits(H.N))
    t0 = time.perf_counter()
    if H.bits < bits:
        H = H.at_precision(bits)

    if H.size == 1:
        lam = mpfr(H[0, 0], bits)
        return EigenResult(lam, bits, 0, 0, (lam, lam), time.perf_counter() - t0, H.params, H.N)

    T = tridiagonalize(H, bits)
    with working(bits):
        tol = mpfr(rel_tol)
        c0, _, _ = _probe(T, mpfr(0))
        if c0 != 0:
            raise PrecisionExhausted(
                f"{c0} eigenvalue(s) of the reduced matrix fell below zero", 2 * bits
            )
        hi = min(T.gershgorin_upper(), H.trace())
        chi, fhi, hi = _probe(T, hi)
        if chi == 0:
            hi = hi * 2
            chi, fhi, hi = _probe(T, hi)
        lo, flo = mpfr(0), None
        nbis = nsec = 0

        # phase 1: isolate the smallest eigenvalue within a factor of two
        while not (chi == 1 and lo > 0 and hi <= 2 * lo):
            nbis += 1
            if nbis > max_iter:
                raise PrecisionExhausted("bisection did not isolate the eigenvalue", 2 * bits)
            mid = hi / 2 if lo == 0 else gmpy2.sqrt(lo * hi)
            if not lo < mid < hi:
                raise PrecisionExhausted("bracket cannot be split", 2 * bits)
            c, f, mid = _probe(T, mid)
            if c == 0:
                lo, flo = mid, f
            else:
                hi, chi, fhi = mid, c, f

        # phase 2: secant on the last pivot, kept inside the certified bracket
        x0, f0 = lo, flo
        x1, f1 = hi, fhi
        lam = None
        while (hi - lo) > tol * lo:
            nsec += 1
            if nsec > max_iter:
                raise PrecisionExhausted("secant iteration stalled", 2 * bits)
            x = None
            if f1 != f0:
                x = x1 - f1 * (x1 - x0) / (f1 - f0)
            if x is None or not (lo < x < hi) or not gmpy2.is_finite(x):
                x = lo + (hi - lo) / 2
                nbis += 1
            c, fx, x = _probe(T, x)
            if c == 0:
                lo = x
            else:
                hi = x
            step = abs(x - x1)
            x0, f0, x1, f1 = x1, f1, x, fx
            lam = x
            if fx == 0 or step <= tol * x / 4:
                # close the bracket around the secant iterate
                for y in (x * (1 - tol / 4), x * (1 + tol / 4)):
                    if lo < y < hi:
                        cy, _, y = _probe(T, y)
                        if cy == 0:
                            lo = y
                        else:
                            hi = y
        if lam is None or not lo <= lam <= hi:
            lam = lo + (hi - lo) / 2
        # rounding in the moments and the reduction perturbs eigenvalues by
        # roughly n^2 * ulp * trace; the bracket means nothing below that floor
        noise = mpfr(H.size) ** 2 * mpfr(2) ** (-bits) * H.trace()
        if noise > tol * lam / 8:
            short = math.ceil(float(gmpy2.log2(8 * noise / (tol * lam))))
            raise PrecisionExhausted(
                f"rounding floor {float(noise):.3e} exceeds tolerance at lambda={float(lam):.3e}",
                bits + short + 32,
            )
    elapsed = time.perf_counter() - t0
    log.debug("N=%d bits=%d bisect=%d secant=%d %.2fs", H.N, bits, nbis, nsec, elapsed)
    return EigenResult(lam, bits, nbis, nsec, (lo, hi), elapsed, H.params, H.N)


def _predicted_bits(params: WeightParams, N: int, guard: int) -> int:
    """Bits needed to resolve the predicted ``lambda_N`` against ``trace H``."""
    from .asymptotics import lambda_asymptotic

    if N < 1:
        return 0
    est = lambda_asymptotic(params, N).lambda_theoretical
    h = hankel_matrix(params, N, 64)
    ratio = gmpy2.log2(h.trace()) - gmpy2.log2(est)
    return math.ceil(float(ratio)) + guard + math.ceil(10 * math.log2(N + 2))


def smallest_eigenvalue_auto(
    params: WeightParams,
    N: int,
    rel_tol: float = 1e-6,
    policy: PrecisionPolicy | None = None,
    max_retries: int = 3,
) -> EigenResult:
    """Choose a precision, solve, and retry with doubled guard bits on failure."""
    policy = policy or PrecisionPolicy()
    guard = policy.base_guard_bits
    failures = []
    for attempt in range(max_retries + 1):
        p = PrecisionPolicy(guard, policy.slope_bits_per_order, policy.override_bits)
        bits = p.bits(N)
        if policy.override_bits is None:
            bits = max(bits, _predicted_bits(params, N, guard))
        H = hankel_matrix(params, N, bits)
        try:
            return smallest_eigenvalue(H, rel_tol, p, bits=bits)
        except PrecisionExhausted as exc:
            failures.append(f"{bits} bits: {exc}")
            log.warning("alpha=%s beta=%s N=%d: %s; retrying", params.alpha, params.beta, N, exc)
            guard *= 2
            if policy.override_bits is not None:
                policy = PrecisionPolicy(policy.base_guard_bits, policy.slope_bits_per_order,
                                         2 * policy.override_bits)
    raise PrecisionExhausted(
        f"alpha={params.alpha} beta={params.beta} N={N}: retries exhausted; "
        + "; ".join(failures),
        2 * bits,
    )
