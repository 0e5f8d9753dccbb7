"""Where the asymptotic over- or under-estimates lambda_N.

Sweeping alpha over (-1, 2] at beta = 0 and N+1 = 100 shows the signed error
(theoretical - numerical)/numerical crossing zero twice.  One crossing sits
almost exactly at alpha = -1/2, where the closed form is accurate to a few
parts in a million.  For beta = -1/2 the error stays negative throughout.  The sweep runs
through the same job runner as ``hankelmin sweep``, so it uses a process pool
and still prints rows in grid order.

Run:  python demos/error_sign_sweep.py [beta] [points]
"""
import os
import sys

from hankelmin.cache import ResultCache
from hankelmin.cli import parse_range, run_jobs
from hankelmin.moments import WeightParams

beta = sys.argv[1] if len(sys.argv) > 1 else "0"
points = int(sys.argv[2]) if len(sys.argv) > 2 else 12
size = 100

grid = parse_range(f"-1:2:{points}")
jobs = [(WeightParams(a, beta), size) for a in grid]
rows = run_jobs(jobs, 1e-6, None, os.cpu_count() or 1, ResultCache(None))

print(f"beta = {beta}, N+1 = {size}")
print(f"{'alpha':>8} {'signed error %':>15}")
prev = None
for row in rows:
    pct = row.record.signed_error_percent
    flag = "  <- sign change" if prev is not None and (pct > 0) != (prev > 0) else ""
    print(f"{float(row.params.alpha):>8.3f} {pct:>15.4f}{flag}")
    prev = pct
