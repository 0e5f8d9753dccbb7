"""Orthonormal polynomials of x^α(1-x)^β on [0, 1] via the Jacobi recurrence."""
from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .moments import MomentTable, WeightParams
from .mpcore import GUARD_BITS, DomainError, check_bits, gamma, working

__all__ = [
    "RecurrenceTable",
    "PolyValue",
    "recurrence_from_jacobi",
    "recurrence_from_moments",
    "eval_orthonormal",
    "exterior_asymptotic_ratio",
    "sigma_quadrature",
    "coefficients_from_moments",
    "sigma_from_coefficients",
]


@dataclass(frozen=True)
class RecurrenceTable:
    """Monic recurrence ``q_{k+1}(x) = (x - a_k) q_k(x) - b_k q_{k-1}(x)``.

    ``norms[k]`` is ``||q_k||`` in ``L²(w)``, so ``P_k = q_k / norms[k]``.
    ``b[0]`` is unused and stored as ``h_0``.
    """

    params: WeightParams
    a: tuple
    b: tuple
    norms: tuple
    bits: int

    @property
    def max_degree(self) -> int:
        return len(self.a) - 1


@dataclass(frozen=True)
class PolyValue:
    n: int
    z: mpc
    value: mpc


def recurrence_from_jacobi(params: WeightParams, max_degree: int, bits: int) -> RecurrenceTable:
    """Recurrence coefficients from the classical Jacobi family.

    With ``t = 2x - 1`` the weight becomes ``(1-t)^β (1+t)^α`` up to a constant,
    i.e. Jacobi parameters ``(β, α)``; the monic coefficients map as
    ``a_k = (1 + A_k)/2`` and ``b_k = B_k/4``.
    """
    bits = check_bits(bits)
    wb = bits + GUARD_BITS
    # Jacobi exponents on [-1, 1]: (1-t)^p (1+t)^q
    p, q = params.beta_mp(wb), params.alpha_mp(wb)
    with working(wb):
        s = p + q
        h0 = gamma(params.alpha_mp(wb) + 1, wb) * gamma(params.beta_mp(wb) + 1, wb) / gamma(s + 2, wb)
        A, B = [], [h0]
        for k in range(max_degree + 1):
            if k == 0:
                A.append((q - p) / (s + 2))
            else:
                A.append((q * q - p * p) / ((2 * k + s) * (2 * k + s + 2)))
            if k >= 1:
                if k == 1:
                    Bk = 4 * (1 + p) * (1 + q) / ((2 + s) ** 2 * (3 + s))
                else:
                    c = 2 * k + s
                    Bk = 4 * k * (k + p) * (k + q) * (k + s) / (c * c * (c + 1) * (c - 1))
                B.append(Bk)
        a = [(1 + Ak) / 2 for Ak in A]
        b = [h0] + [Bk / 4 for Bk in B[1:]]
        norms2 = [h0]
        for k in range(1, max_degree + 1):
            norms2.append(norms2[-1] * b[k])
        norms = [gmpy2.sqrt(v) for v in norms2]
    rnd = lambda xs: tuple(mpfr(v, bits) for v in xs)  # noqa: E731
    return RecurrenceTable(params, rnd(a), rnd(b), rnd(norms), bits)


def recurrence_from_moments(moments: MomentTable, max_degree: int, bits: int) -> RecurrenceTable:
    """Same table by the Stieltjes procedure on the moment functional.

    Needs about ``5 * max_degree`` extra bits of moment precision; meant as a
    cross-check at small degree.
    """
    if 2 * max_degree + 1 > moments.max_index:
        raise ValueError("need moments up to index 2*max_degree + 1")
    with working(bits + GUARD_BITS):
        h = [mpfr(v) for v in moments.h]

        def inner(u, v):
            # <u, v> for coefficient lists in the monomial basis
            acc = mpfr(0)
            for i, ui in enumerate(u):
                if ui == 0:
                    continue
                for j, vj in enumerate(v):
                    acc += ui * vj * h[i + j]
            return acc

        def times_x(u):
            return [mpfr(0)] + list(u)

        prev, cur = None, [mpfr(1)]
        a, b, norms2 = [], [h[0]], []
        for k in range(max_degree + 1):
            nk = inner(cur, cur)
            norms2.append(nk)
            ak = inner(times_x(cur), cur) / nk
            a.append(ak)
            if k >= 1:
                b.append(nk / norms2[k - 1])
            if k == max_degree:
                break
            nxt = times_x(cur)
            for i, c in enumerate(cur):
                nxt[i] -= ak * c
            if prev is not None:
                for i, c in enumerate(prev):
                    nxt[i] -= b[k] * c
            prev, cur = cur, nxt
        norms = [gmpy2.sqrt(v) for v in norms2]
    rnd = lambda xs: tuple(mpfr(v, bits) for v in xs)  # noqa: E731
    return RecurrenceTable(moments.params, rnd(a), rnd(b), rnd(norms), bits)


def _monic_values(table: RecurrenceTable, n: int, z):
    """``q_0(z), ..., q_n(z)`` by forward recurrence."""
    vals = [mpc(1)] if isinstance(z, mpc) else [mpfr(1)]
    if n >= 1:
        vals.append((z - table.a[0]) * vals[0])
    for k in range(1, n):
        vals.append((z - table.a[k]) * vals[k] - table.b[k] * vals[k - 1])
    return vals


def eval_orthonormal(table: RecurrenceTable, n: int, z, bits: int | None = None) -> PolyValue:
    """``P_n(z)`` for complex (or real) ``z``.

    Real ``z`` stays real throughout; ``value`` is returned as an ``mpc``.
    """
    if not 0 <= n <= table.max_degree:
        raise ValueError(f"degree {n} outside 0..{table.max_degree}")
    bits = bits or table.bits
    with working(bits + GUARD_BITS):
        zz = mpc(z) if isinstance(z, (mpc, complex)) else mpfr(z)
        q = _monic_values(table, n, zz)[n]
        v = mpc(q / table.norms[n])
        return PolyValue(n, mpc(zz), mpc(v, (bits, bits)))


def eval_orthonormal_all(table: RecurrenceTable, n: int, z) -> list:
    """``[P_0(z), ..., P_n(z)]`` in the caller's context precision."""
    return [q / table.norms[k] for k, q in enumerate(_monic_values(table, n, z))]


def exterior_asymptotic_ratio(params: WeightParams, n: int, z, bits: int = 256, target_digits: int = 30) -> mpfr:
    """``|P_n(z)| / |π^{-1/2} ζ(z)^n A(ζ(z))|``; tends to 1 as ``n`` grows.

    At ``z = -1`` the amplitude comes from its closed form, elsewhere from the
    Poisson-kernel quadrature at ``r = |ζ(z)|``, ``θ = arg ζ(z)``.
    """
    from .asymptotics import amplitude_at_minus_one, zeta_map
    from .quadrature import log_amplitude

    if n < 1:
        raise ValueError("n must be >= 1")
    zeta = zeta_map(z, bits)
    with working(bits):
        zc = mpc(z)
        if zc == -1:
            logA = gmpy2.log(amplitude_at_minus_one(params, bits))
        else:
            logA = log_amplitude(abs(zeta), gmpy2.phase(zeta), params, target_digits).value
    table = recurrence_from_jacobi(params, n, bits)
    Pn = eval_orthonormal(table, n, zc, bits).value
    with working(bits + GUARD_BITS):
        pred = n * gmpy2.log(abs(zeta)) + logA - gmpy2.log(gmpy2.const_pi()) / 2
        r = gmpy2.exp(gmpy2.log(abs(Pn)) - pred)
    return mpfr(r, bits)


def sigma_quadrature(
    params: WeightParams,
    m: int,
    n: int,
    bits: int = 256,
    table: RecurrenceTable | None = None,
    max_doublings: int = 16,
) -> mpfr:
    """``σ_{m,n} = (1/2π) ∫_0^{2π} P_m(e^{iθ}) P_n(e^{-iθ}) dθ`` by the trapezoid rule.

    The integrand is a trigonometric polynomial of degree ``m + n``, so the
    uniform rule is exact once it has more than ``m + n`` nodes; doubling
    stops when two levels agree to ``bits/2`` bits.  Indices are sorted
    first, which makes ``σ_{m,n}`` and ``σ_{n,m}`` the same computation.
    """
    m, n = sorted((m, n))
    bits = check_bits(bits)
    if table is None:
        table = recurrence_from_jacobi(params, n, bits)
    wb = bits + GUARD_BITS + 2 * n
    prev = None
    npts = 8
    with working(wb):
        tol = mpfr(2) ** (-(bits // 2))
        two_pi = 2 * gmpy2.const_pi()
        for _ in range(max_doublings):
            acc = mpfr(0)
            # real part only: the imaginary parts cancel between θ and 2π - θ
            for j in range(npts):
                th = two_pi * j / npts
                z = mpc(gmpy2.cos(th), gmpy2.sin(th))
                ps = eval_orthonormal_all(table, n, z)
                acc += (ps[m] * ps[n].conjugate()).real
            est = acc / npts
            if prev is not None and abs(est - prev) <= tol * abs(est):
                return mpfr(est, bits)
            prev = est
            npts *= 2
    raise ArithmeticError("circle quadrature did not converge")


def coefficients_from_moments(moments: MomentTable, N: int, bits: int) -> list[list[mpfr]]:
    """Lower-triangular ``A_N`` with ``A_N H_N A_N^T = I`` (row n holds ``a_{n,k}``).

    Inverse of the Cholesky factor of ``H_N``; small ``N`` only.
    """
    if 2 * N > moments.max_index:
        raise ValueError("need moments up to index 2N")
    n = N + 1
    with working(bits):
        h = moments.h
        L = [[mpfr(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1):
                s = mpfr(h[i + j]) - gmpy2.fsum(L[i][k] * L[j][k] for k in range(j))
                if i == j:
                    if not s > 0:
                        raise DomainError("moment matrix is not numerically positive definite")
                    L[i][i] = gmpy2.sqrt(s)
                else:
                    L[i][j] = s / L[j][j]
        A = [[mpfr(0)] * n for _ in range(n)]
        for i in range(n):
            A[i][i] = 1 / L[i][i]
            for j in range(i):
                A[i][j] = -gmpy2.fsum(L[i][k] * A[k][j] for k in range(j, i)) / L[i][i]
    return A


def sigma_from_coefficients(A: list[list[mpfr]], bits: int) -> list[list[mpfr]]:
    """``A A^T``, i.e. ``σ_{m,n} = Σ_k a_{m,k} a_{n,k}``."""
    n = len(A)
    with working(bits):
        return [[gmpy2.fsum(A[i][k] * A[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
