"""The analytic ingredients of the asymptotic, checked by brute force.

Each line below compares a closed form with an independent computation:
tanh-sinh quadrature for the integrals, finite differences for derivatives,
a dense mpmath eigensolver for the inverse-Cholesky identity, and the
three-term recurrence for the orthonormal polynomial asymptotics.

Run:  python demos/analytic_identities.py
"""
import gmpy2
from gmpy2 import mpfr

from hankelmin import asymptotics as asy
from hankelmin import quadrature as quad
from hankelmin.moments import WeightParams
from hankelmin.mpcore import format_sci, working
from hankelmin.orthopoly import exterior_asymptotic_ratio
from hankelmin.verify import run_checks

with working(192):
    l2 = gmpy2.log(mpfr(2))
    L = gmpy2.log(1 + gmpy2.sqrt(mpfr(2)))
    pieces = [
        ("ln 2 term", quad.poisson_log2_term().value, -l2 / 2),
        ("ln cos term", quad.poisson_log_cos_term().value, L / 2),
        ("ln sin term", quad.poisson_log_sin_term().value, L / 2 - l2 / 4),
    ]
    for name, got, want in pieces:
        print(f"{name:>12}: quadrature {format_sci(got, 20)}  closed {format_sci(want, 20)}")

# a Legendre weight is the classic case; the ratio approaches 1 like 1/n
p = WeightParams(0, 0)
for n in (25, 50, 100, 200):
    r = exterior_asymptotic_ratio(p, n, -1)
    print(f"|P_{n}(-1)| / asymptotic = {format_sci(r, 8)}")

print()
for c in run_checks("quick"):
    print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
