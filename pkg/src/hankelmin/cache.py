"""Append-only JSON-lines store of solver results."""
from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass
from pathlib import Path

import gmpy2
from gmpy2 import mpfr

from .eigensolver import EigenResult
from .moments import WeightParams

__all__ = ["SOLVER_VERSION", "ResultCache", "CacheEntry", "encode_mpfr", "decode_mpfr"]

log = logging.getLogger(__name__)

SOLVER_VERSION = "householder-sturm-secant/1"
CACHE_FILE = "results.jsonl"
ENV_VAR = "HANKEL_CACHE_DIR"


def encode_mpfr(x: mpfr) -> list:
    """Exact ``[mantissa, exponent, precision]`` triple (value = m * 2**e)."""
    m, e = x.as_mantissa_exp()
    return [str(m), int(e), x.precision]


def decode_mpfr(triple) -> mpfr:
    m, e, p = triple
    p = int(p)
    # m fits in p bits, so the shift is exact at precision p
    with gmpy2.context(precision=p, emax=gmpy2.get_emax_max(), emin=gmpy2.get_emin_min()):
        return gmpy2.mul_2exp(mpfr(gmpy2.mpz(m)), int(e))


def cache_key(params: WeightParams, N: int, rel_tol: float, precision_bits: int | None) -> str:
    return json.dumps(
        [str(params.alpha), str(params.beta), N, repr(float(rel_tol)), precision_bits, SOLVER_VERSION]
    )


@dataclass(frozen=True)
class CacheEntry:
    key: str
    value: dict
    timestamp: float


def result_to_dict(r: EigenResult) -> dict:
    return {
        "lambda_min": encode_mpfr(r.lambda_min),
        "prec_used": r.prec_used,
        "bisection_steps": r.bisection_steps,
        "secant_steps": r.secant_steps,
        "bracket": [encode_mpfr(r.bracket[0]), encode_mpfr(r.bracket[1])],
        "elapsed": r.elapsed,
    }


def result_from_dict(d: dict, params: WeightParams, N: int) -> EigenResult:
    return EigenResult(
        decode_mpfr(d["lambda_min"]),
        d["prec_used"],
        d["bisection_steps"],
        d["secant_steps"],
        (decode_mpfr(d["bracket"][0]), decode_mpfr(d["bracket"][1])),
        d["elapsed"],
        params,
        N,
    )


class ResultCache:
    """Results keyed by (alpha, beta, N, rel_tol, precision override, solver version).

    Lines are written whole and flushed, so a reader only ever sees a torn
    final line, which :meth:`load` skips with a warning.  An unusable
    directory disables the cache instead of failing the run.
    """

    def __init__(self, directory: str | os.PathLike | None):
        self.enabled = directory is not None
        self.path = Path(directory) / CACHE_FILE if directory is not None else None
        self.entries: dict[str, CacheEntry] = {}
        self.corrupt_lines = 0
        if self.enabled:
            try:
                Path(directory).mkdir(parents=True, exist_ok=True)
                self.path.touch(exist_ok=True)
                if not os.access(self.path, os.W_OK):
                    raise PermissionError(str(self.path))
            except OSError as exc:
                log.warning("cache disabled: %s", exc)
                self.enabled = False
            else:
                self.load()

    @classmethod
    def from_env(cls, directory: str | None):
        return cls(directory or os.environ.get(ENV_VAR) or None)

    def load(self) -> None:
        self.entries.clear()
        self.corrupt_lines = 0
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    raw = json.loads(line)
                    entry = CacheEntry(raw["key"], raw["value"], raw["timestamp"])
                    decode_mpfr(entry.value["lambda_min"])
                except (ValueError, KeyError, TypeError) as exc:
                    self.corrupt_lines += 1
                    log.warning("%s:%d: skipping corrupt cache line (%s)", self.path, lineno, exc)
                    continue
                self.entries[entry.key] = entry

    def get(self, key: str):
        if not self.enabled:
            return None
        e = self.entries.get(key)
        return e.value if e else None

    def put(self, key: str, value: dict) -> None:
        if not self.enabled:
            return
        entry = CacheEntry(key, value, time.time())
        line = json.dumps({"key": key, "value": value, "timestamp": entry.timestamp}) + "\n"
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
        except OSError as exc:
            log.warning("cache write failed, disabling cache: %s", exc)
            self.enabled = False
            return
        self.entries[key] = entry

    def stats(self) -> dict:
        return {
            "enabled": self.enabled,
            "path": str(self.path) if self.path else None,
            "entries": len(self.entries),
            "corrupt_lines": self.corrupt_lines,
            "bytes": self.path.stat().st_size if self.enabled and self.path.exists() else 0,
        }
