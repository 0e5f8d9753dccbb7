"""Cross-module consistency checks, run by ``hankelmin verify``."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

import gmpy2
import mpmath
from gmpy2 import mpfr

from . import asymptotics as asy
from . import quadrature as quad
from .eigensolver import smallest_eigenvalue, smallest_eigenvalue_auto
from .moments import WeightParams, hankel_matrix, moment_table
from .mpcore import working
from .orthopoly import coefficients_from_moments, sigma_from_coefficients, exterior_asymptotic_ratio

__all__ = ["Check", "quick_checks", "full_checks", "run_checks", "eigen_consistency"]

# (size N+1, reference smallest eigenvalue) for alpha = beta = -1/2
REFERENCE_SMALL = [(25, "8.0295e-36"), (50, "6.0370e-74")]


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _rel(x, y) -> float:
    with working(256):
        return float(abs(mpfr(x) - mpfr(y)) / abs(mpfr(y)))


def _stieltjes() -> Check:
    worst = 0.0
    for which, ts in ((1, (1, 2, 10)), (2, (1, 2, 10)), (3, (-1.5, -2, -10)), (4, (-1.5, -2, -10))):
        for t in ts:
            with working(160):
                d = abs(quad.stieltjes_integral(which, t).value - quad.stieltjes_integral_closed(which, t))
            worst = max(worst, float(d))
    return Check("Stieltjes-type integral closed forms", worst < 1e-25, f"max |lhs - rhs| = {worst:.2e}")


def _amplitude() -> Check:
    worst = 0.0
    for ab in ((0, 0), ("-1/2", "-1/2"), (1, 2), ("-7/8", "-1/8")):
        p = WeightParams(*ab)
        with working(160):
            q = quad.log_amplitude(asy.eta(), gmpy2.const_pi(), p).value
            d = abs(gmpy2.exp(q) - asy.amplitude_at_minus_one(p))
        worst = max(worst, float(d))
    return Check("amplitude quadrature vs closed form", worst < 1e-25, f"max diff = {worst:.2e}")


def _modulus_argmax() -> Check:
    n = 10_000
    with working(128):
        two_pi = 2 * gmpy2.const_pi()
        best = max(range(n), key=lambda j: asy.zeta_modulus_on_circle(two_pi * j / n, 128))
        at_pi = asy.zeta_modulus_on_circle(gmpy2.const_pi(), 256)
    ok = best == n // 2 and _rel(at_pi, asy.eta()) < 1e-30
    return Check("argmax |zeta(e^{i theta})| at pi", ok, f"grid argmax index {best} of {n}")


def _psi() -> Check:
    worst = 0.0
    for ab in ((0, 0), ("-1/2", "-1/2"), (1, 2), (10, 10), ("-7/8", "-1/8")):
        p = WeightParams(*ab)
        worst = max(worst, _rel(asy.psi(p), asy.psi_from_definition(p)))
    return Check("psi closed form vs definition", worst < 1e-30, f"max rel diff = {worst:.2e}")


def eigen_consistency(params: WeightParams, N: int, bits: int = 384) -> float:
    """Relative gap between ``1/lambda_min(H_N)`` and ``lambda_max(A_N A_N^T)``."""
    H = hankel_matrix(params, N, bits)
    lam = smallest_eigenvalue(H, 1e-20, bits=bits).lambda_min
    A = coefficients_from_moments(H.moments, N, bits)
    S = sigma_from_coefficients(A, bits)
    with mpmath.workprec(bits):
        ev = mpmath.eigsy(mpmath.matrix([[mpmath.mpf(str(v)) for v in row] for row in S]), eigvals_only=True)
        # mpmath prints at the ambient precision, so convert inside the block
        top = mpfr(mpmath.nstr(max(ev), int(bits * 0.30103) + 5, strip_zeros=False), bits)
    with working(bits):
        return float(abs(1 / lam - top) * lam)


def _eigen_consistency(seed: int = 2024) -> Check:
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(5):
        p = WeightParams(round(rng.uniform(-0.9, 2), 3), round(rng.uniform(-0.9, 2), 3))
        for N in range(1, 7):
            worst = max(worst, eigen_consistency(p, N))
    return Check("1/lambda_min(H) = lambda_max(A A^T)", worst < 1e-10, f"max rel diff = {worst:.2e}")


def _exterior_ratio() -> Check:
    p = WeightParams(0, 0)
    d100 = abs(float(exterior_asymptotic_ratio(p, 100, -1)) - 1)
    d200 = abs(float(exterior_asymptotic_ratio(p, 200, -1)) - 1)
    return Check("P_n(-1) asymptotic ratio converges", d200 < d100, f"|r-1|: {d100:.3e} -> {d200:.3e}")


def _moments_quadrature() -> Check:
    worst = 0.0
    for ab in ((0, 0), ("-1/2", "-1/2"), ("-7/8", "-1/8"), (1, 2)):
        p = WeightParams(*ab)
        h = moment_table(p, 8, 160)
        for k in range(9):
            worst = max(worst, _rel(quad.moment_by_quadrature(p, k).value, h[k]))
    return Check("moments vs quadrature", worst < 1e-25, f"max rel diff = {worst:.2e}")


def _reference_row(size: int, expected: str) -> Callable[[], Check]:
    def run() -> Check:
        r = smallest_eigenvalue_auto(WeightParams("-1/2", "-1/2"), size - 1, 1e-6)
        rel = _rel(r.lambda_min, expected)
        return Check(f"reference eigenvalue N+1={size}", rel < 5e-4, f"rel diff vs {expected} = {rel:.2e}")

    return run


def quick_checks() -> list[Callable[[], Check]]:
    return [_stieltjes, _amplitude, _modulus_argmax, _psi, _moments_quadrature, _eigen_consistency, _exterior_ratio]


def full_checks() -> list[Callable[[], Check]]:
    return quick_checks() + [_reference_row(s, v) for s, v in REFERENCE_SMALL]


def run_checks(level: str = "quick") -> list[Check]:
    checks = full_checks() if level == "full" else quick_checks()
    out = []
    for c in checks:
        try:
            out.append(c())
        except Exception as exc:  # report, keep going
            out.append(Check(getattr(c, "__name__", "check"), False, f"raised {exc!r}"))
    return out
