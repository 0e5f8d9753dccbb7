"""Smallest eigenvalues of the Chebyshev-weight Hankel matrices.

For w(x) = x^{-1/2}(1-x)^{-1/2} on [0, 1] the Hankel matrix of moments is
violently ill-conditioned: lambda_N falls like (1+sqrt 2)^{-4(N+1)}, so a
200x200 matrix has a smallest eigenvalue near 1e-303 while its largest is of
order one.  This script solves each size with the Sturm/secant solver at the
precision the policy picks, then compares it with the closed-form asymptotic.

Run:  python demos/chebyshev_weight_table.py [max_size]
"""
import sys
import time

from hankelmin import WeightParams, error_record, lambda_asymptotic, smallest_eigenvalue_auto
from hankelmin.mpcore import format_sci

sizes = [25, 50, 100, 150, 200]
if len(sys.argv) > 1:
    sizes = [s for s in sizes if s <= int(sys.argv[1])]

params = WeightParams("-1/2", "-1/2")
print(f"weight {params.label()}")
print(f"{'N+1':>5} {'bits':>6} {'numerical':>12} {'asymptotic':>12} {'error %':>9} {'time':>7}")
for size in sizes:
    N = size - 1
    t0 = time.perf_counter()
    r = smallest_eigenvalue_auto(params, N, rel_tol=1e-6)
    est = lambda_asymptotic(params, N)
    rec = error_record(r, est)
    print(
        f"{size:>5} {r.prec_used:>6} {format_sci(r.lambda_min, 5):>12} "
        f"{format_sci(est.lambda_theoretical, 5):>12} {rec.error_percent:>9.4f} {time.perf_counter() - t0:>6.1f}s"
    )

# the relative error shrinks roughly like 1/N: doubling the size halves it
