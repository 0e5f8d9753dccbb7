"""Command-line front end.

Commands::

    hankelmin lambda --alpha -0.5 --beta -0.5 --sizes 25,50
    hankelmin sweep --alpha-range -1:0:8 --beta 0 --size 200
    hankelmin verify --level quick
    hankelmin cache-stats --cache-dir .cache

Exit codes: 0 success, 1 usage error, 2 computation failure, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .asymptotics import error_record, lambda_asymptotic
from .cache import ResultCache, cache_key, result_from_dict, result_to_dict
from .eigensolver import PrecisionPolicy, smallest_eigenvalue_auto
from .moments import WeightParams, format_fraction
from .mpcore import DomainError, format_sci

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 0, 1, 2, 3

HEADER = ["size", "alpha", "beta", "lambda_numerical", "lambda_theoretical", "error_percent"]

log = logging.getLogger("hankelmin")


class UsageError(Exception):
    pass


@dataclass
class JobSpec:
    alpha: str
    beta: str
    sizes: list[int]
    rel_tol: float = 1e-6
    precision_override: int | None = None
    threads: int = 1

    def __post_init__(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise UsageError("sizes must be a nonempty list of integers >= 1")
        if not 0 < self.rel_tol < 1:
            raise UsageError("rel-tol must lie in (0, 1)")


@dataclass
class Row:
    params: WeightParams
    size: int
    record: object = None
    error: str = ""
    extra: dict = field(default_factory=dict)


def _solve(alpha: str, beta: str, N: int, rel_tol: float, bits: int | None) -> dict:
    """Worker entry point; returns a cache-ready dict (picklable, exact)."""
    params = WeightParams(alpha, beta)
    policy = PrecisionPolicy(override_bits=bits)
    return result_to_dict(smallest_eigenvalue_auto(params, N, rel_tol, policy))


def run_jobs(jobs, rel_tol, bits, threads, cache: ResultCache) -> list[Row]:
    """Solve ``(params, size)`` jobs, reusing cached results; output keeps job order."""
    rows = [Row(p, s) for p, s in jobs]
    todo = []
    for i, row in enumerate(rows):
        if row.size < 2:
            row.error = "the asymptotic estimate needs N+1 >= 2"
            continue
        key = cache_key(row.params, row.size - 1, rel_tol, bits)
        hit = cache.get(key)
        if hit is not None:
            row.extra["result"] = hit
        else:
            todo.append((i, key))
    args = [(str(rows[i].params.alpha), str(rows[i].params.beta), rows[i].size - 1, rel_tol, bits) for i, _ in todo]
    if threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(todo))) as pool:
            futures = [pool.submit(_solve, *a) for a in args]
            outcomes = []
            for f in futures:
                try:
                    outcomes.append((f.result(), None))
                except Exception as exc:  # per-job failure is reported, not fatal
                    outcomes.append((None, exc))
    else:
        outcomes = []
        for a in args:
            try:
                outcomes.append((_solve(*a), None))
            except Exception as exc:
                outcomes.append((None, exc))
    for (i, key), (res, exc) in zip(todo, outcomes):
        if exc is not None:
            rows[i].error = f"{type(exc).__name__}: {exc}"
            continue
        cache.put(key, res)
        rows[i].extra["result"] = res
    for row in rows:
        if "result" in row.extra:
            N = row.size - 1
            er = result_from_dict(row.extra["result"], row.params, N)
            row.record = error_record(er, lambda_asymptotic(row.params, N, max(er.prec_used, 256)))
    return rows


def format_rows(rows, signed: bool, fmt: str, with_error_column: bool) -> str:
    buf = io.StringIO()
    if fmt == "json":
        out = []
        for row in rows:
            d = {
                "size": row.size,
                "N": row.size - 1,
                "alpha": format_fraction(row.params.alpha),
                "beta": format_fraction(row.params.beta),
            }
            if row.record is not None:
                r = row.record
                digits = int(r.lambda_numerical.precision * 0.30103) + 1
                d.update(
                    lambda_numerical=format_sci(r.lambda_numerical, digits, e="e"),
                    lambda_theoretical=format_sci(r.lambda_theoretical, 40, e="e"),
                    signed_error_percent=repr(r.signed_error_percent),
                    error_percent=repr(r.error_percent),
                )
            if row.error or with_error_column:
                d["error"] = row.error
            out.append(d)
        json.dump(out, buf, indent=2)
        buf.write("\n")
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER + (["error"] if with_error_column else []))
    for row in rows:
        a, b = format_fraction(row.params.alpha), format_fraction(row.params.beta)
        if row.record is None:
            cells = [row.size, a, b, "", "", ""]
        else:
            r = row.record
            pct = r.signed_error_percent if signed else r.error_percent
            cells = [
                row.size,
                a,
                b,
                format_sci(r.lambda_numerical, 5, exp_digits=4),
                format_sci(r.lambda_theoretical, 5, exp_digits=4),
                f"{pct:.4f}",
            ]
        if with_error_column:
            cells.append(row.error)
        w.writerow(cells)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(alpha: str, beta: str) -> WeightParams:
    try:
        return WeightParams(alpha, beta)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def _parse_sizes(s: str) -> list[int]:
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --sizes value {s!r}") from exc


def parse_range(text: str) -> list[Fraction]:
    """``lo:hi:n`` -> the ``n`` points ``lo + (hi-lo) k/n``, ``k = 1..n``.

    The grid is left-open and right-closed, matching ranges such as
    ``-1 < alpha <= 2``.
    """
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = Fraction(lo), Fraction(hi), int(n)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected lo:hi:count") from exc
    if n < 1 or hi <= lo:
        raise UsageError(f"bad range {text!r}")
    return [lo + (hi - lo) * k / n for k in range(1, n + 1)]


def cmd_lambda(args, cache: ResultCache) -> int:
    job = JobSpec(args.alpha, args.beta, _parse_sizes(args.sizes), args.rel_tol, args.precision_bits, args.threads)
    params = _params(job.alpha, job.beta)
    rows = run_jobs([(params, s) for s in job.sizes], job.rel_tol, job.precision_override, job.threads, cache)
    failed = [r for r in rows if r.error]
    _emit(format_rows(rows, args.signed, args.format, with_error_column=False), args.out)
    for r in failed:
        print(f"error: alpha={r.params.alpha} beta={r.params.beta} N={r.size - 1}: {r.error}", file=sys.stderr)
    return EXIT_COMPUTE if failed else EXIT_OK


def cmd_sweep(args, cache: ResultCache) -> int:
    alphas = parse_range(args.alpha_range)
    if args.beta_range is not None:
        betas = parse_range(args.beta_range)
    elif args.beta is not None:
        betas = [Fraction(args.beta)]
    else:
        raise UsageError("sweep needs --beta-range or --beta")
    if args.size < 2:
        raise UsageError("--size must be >= 2")
    jobs = [(_params(a, b), args.size) for a in alphas for b in betas]
    if len(jobs) > args.max_jobs:
        raise UsageError(f"grid has {len(jobs)} points, more than --max-jobs={args.max_jobs}")
    if not 0 < args.rel_tol < 1:
        raise UsageError("rel-tol must lie in (0, 1)")
    rows = run_jobs(jobs, args.rel_tol, args.precision_bits, args.threads, cache)
    _emit(format_rows(rows, args.signed, args.format, with_error_column=True), args.out)
    return EXIT_OK


def cmd_verify(args, cache: ResultCache) -> int:
    from .verify import run_checks

    results = run_checks(args.level)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}" for c in results]
    npass = sum(c.passed for c in results)
    lines.append(f"{npass}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if npass == len(results) else EXIT_VERIFY


def cmd_cache_stats(args, cache: ResultCache) -> int:
    _emit(json.dumps(cache.stats(), indent=2) + "\n", args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hankelmin", description="Smallest eigenvalues of Jacobi-weight Hankel matrices.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, solver=True):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--cache-dir", default=None, help="result cache directory (env HANKEL_CACHE_DIR)")
        if solver:
            p.add_argument("--rel-tol", type=float, default=1e-6)
            p.add_argument("--precision-bits", type=int, default=None, help="override the precision policy")
            p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
            p.add_argument("--signed", action="store_true", help="report the signed percent error")
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("lambda", help="numerical vs asymptotic lambda_N for given sizes N+1")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--sizes", required=True, help="comma-separated list of N+1")
    common(p)
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("sweep", help="error grid over alpha (and beta) at one size")
    p.add_argument("--alpha-range", required=True, help="lo:hi:count")
    p.add_argument("--beta-range", default=None, help="lo:hi:count")
    p.add_argument("--beta", default=None, help="fixed beta when no --beta-range is given")
    p.add_argument("--size", type=int, required=True, help="matrix size N+1")
    p.add_argument("--max-jobs", type=int, default=1024)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the cross-module consistency checks")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    common(p, solver=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cache-stats", help="summarise the result cache")
    common(p, solver=False)
    p.set_defaults(func=cmd_cache_stats)
    return parser


_SIGNED_VALUE = re.compile(r"^-\d+(\.\d*)?([eE][-+]?\d+)?(/\d+)?$|^-\d*\.\d+([eE][-+]?\d+)?$")
_VALUE_OPTIONS = {"--alpha", "--beta", "--alpha-range", "--beta-range"}


def _join_signed_values(argv: list[str]) -> list[str]:
    """Rewrite ``--alpha -1/2`` as ``--alpha=-1/2``; argparse reads ``-1/2`` as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            nxt = argv[i + 1]
            if _SIGNED_VALUE.match(nxt) or (":" in nxt and not nxt.startswith("--")):
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_join_signed_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    cache = ResultCache.from_env(args.cache_dir)
    try:
        return args.func(args, cache)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # computation failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
