import random

import gmpy2
import mpmath
import numpy as np
import pytest
from gmpy2 import mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelmin.eigensolver import (
    PrecisionExhausted,
    PrecisionPolicy,
    Tridiagonal,
    ZeroPivot,
    inertia_below,
    smallest_eigenvalue,
    smallest_eigenvalue_auto,
    tridiagonalize,
)
from hankelmin.moments import WeightParams, hankel_matrix
from hankelmin.mpcore import format_sci, working


def tri_eigs(T):
    """Dense eigenvalues of a Tridiagonal via mpmath (independent oracle)."""
    n = T.size
    with mpmath.workprec(T.bits):
        M = mpmath.zeros(n, n)
        for i in range(n):
            M[i, i] = mpmath.mpf(str(T.diag[i]))
            if i < n - 1:
                M[i, i + 1] = M[i + 1, i] = mpmath.mpf(str(T.offdiag[i]))
        return sorted(mpmath.eigsy(M, eigvals_only=True))


def test_policy_formula():
    p = PrecisionPolicy()
    assert p.bits(99) == 509 + 96 + 67
    assert PrecisionPolicy(override_bits=300).bits(99) == 300


def test_tridiagonalize_1x1():
    H = hankel_matrix(WeightParams("-1/2", "-1/2"), 0, 128)
    T = tridiagonalize(H)
    assert T.diag == (H[0, 0],) and T.offdiag == ()


def test_tridiagonalize_hilbert_2x2():
    H = hankel_matrix(WeightParams(0, 0), 1, 128)
    ev = tri_eigs(tridiagonalize(H))
    with mpmath.workprec(128):
        s13 = mpmath.sqrt(13)
        expect = [(4 - s13) / 6, (4 + s13) / 6]
        for got, want in zip(ev, expect):
            assert abs(got - want) < mpmath.mpf(2) ** -120


def test_tridiagonalize_hilbert_5x5_vs_numpy():
    H = hankel_matrix(WeightParams(0, 0), 4, 128)
    ev = [float(v) for v in tri_eigs(tridiagonalize(H))]
    ref = np.linalg.eigvalsh(np.array([[1.0 / (i + j + 1) for j in range(5)] for i in range(5)]))
    assert np.allclose(ev, ref, rtol=1e-10, atol=0)


@pytest.mark.parametrize("ab", [(0, 0), ("1.5", "-0.3"), ("-0.9", "4")])
def test_trace_preserved(ab):
    H = hankel_matrix(WeightParams(*ab), 30, 400)
    T = tridiagonalize(H)
    with working(432):
        tr = gmpy2.fsum(T.diag)
        assert abs(tr - H.trace()) <= mpfr(2) ** (-400 + 12) * H.trace()


def hilbert2():
    H = hankel_matrix(WeightParams(0, 0), 1, 128)
    return tridiagonalize(H)


def test_inertia_examples():
    T = hilbert2()
    assert inertia_below(T, 0) == 0
    assert inertia_below(T, "0.1") == 1
    assert inertia_below(T, 2) == 2


def test_inertia_zero_not_below_for_family():
    rng = random.Random(3)
    for _ in range(5):
        p = WeightParams(round(rng.uniform(-0.9, 3), 2), round(rng.uniform(-0.9, 3), 2))
        T = tridiagonalize(hankel_matrix(p, 12, 256))
        assert inertia_below(T, 0) == 0


def test_zero_pivot_signal():
    T = Tridiagonal((mpfr(1, 64), mpfr(2, 64)), (mpfr(1, 64),), 64)
    with pytest.raises(ZeroPivot):
        inertia_below(T, 1)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=-0.5, max_value=2.5, allow_nan=False), min_size=2, max_size=2))
def test_inertia_monotone(shifts):
    T = _T10()
    s1, s2 = sorted(shifts)
    try:
        c1, c2 = inertia_below(T, s1), inertia_below(T, s2)
    except ZeroPivot:
        return
    assert c1 <= c2


_cache = {}


def _T10():
    if "T" not in _cache:
        _cache["T"] = tridiagonalize(hankel_matrix(WeightParams("0.25", "1.5"), 9, 160))
    return _cache["T"]


def test_inertia_counts_match_dense():
    T = _T10()
    ev = tri_eigs(T)
    for s in ("1e-12", "1e-6", "0.001", "0.3", "1"):
        assert inertia_below(T, s) == sum(1 for v in ev if v < mpmath.mpf(s))


def test_one_by_one_exact():
    H = hankel_matrix(WeightParams("0.7", "0.2"), 0, 128)
    r = smallest_eigenvalue(H, 1e-6)
    assert r.lambda_min == mpfr(H[0, 0], r.prec_used)


@pytest.mark.parametrize("seed", range(5))
def test_small_n_matches_numpy(seed):
    rng = random.Random(seed)
    a, b = rng.uniform(-0.9, 2), rng.uniform(-0.9, 2)
    N = rng.randint(1, 10)
    p = WeightParams(round(a, 3), round(b, 3))
    r = smallest_eigenvalue_auto(p, N, 1e-8)
    H = hankel_matrix(p, N, 64)
    dense = np.array([[float(H[i, j]) for j in range(N + 1)] for i in range(N + 1)])
    ref = np.linalg.eigvalsh(dense)[0]
    assert abs(float(r.lambda_min) / ref - 1) < 1e-3


def test_matches_mpmath_at_moderate_size():
    p = WeightParams("0.5", "-0.25")
    N = 19
    r = smallest_eigenvalue_auto(p, N, 1e-12)
    H = hankel_matrix(p, N, 400)
    with mpmath.workprec(400):
        M = mpmath.matrix([[mpmath.mpf(str(H[i, j])) for j in range(N + 1)] for i in range(N + 1)])
        ref = min(mpmath.eigsy(M, eigvals_only=True))
        assert abs(mpmath.mpf(str(r.lambda_min)) / ref - 1) < 1e-11


@pytest.mark.parametrize("ab,N", [((0, 0), 8), (("-1/2", "-1/2"), 24), ((10, 10), 40), (("-0.875", "3"), 30)])
def test_bracket_certificate(ab, N):
    p = WeightParams(*ab)
    r = smallest_eigenvalue_auto(p, N, 1e-7)
    T = tridiagonalize(hankel_matrix(p, N, r.prec_used))
    lo, hi = r.bracket
    assert lo <= r.lambda_min <= hi
    with working(r.prec_used):
        assert (hi - lo) / lo <= 1e-7
    assert inertia_below(T, lo) == 0
    assert inertia_below(T, hi) >= 1


def test_chebyshev_size25():
    r = smallest_eigenvalue_auto(WeightParams("-1/2", "-1/2"), 24, 1e-4)
    assert format_sci(r.lambda_min, 5) == "8.0295E-36"


def test_hilbert_size100():
    H = hankel_matrix(WeightParams(0, 0), 99, PrecisionPolicy().bits(99))
    r = smallest_eigenvalue(H, 1e-4)
    assert format_sci(r.lambda_min, 5) in ("5.7797E-151", "5.7798E-151", "5.7796E-151")
    assert abs(float(gmpy2.log10(r.lambda_min / mpfr("5.7797e-151", 64)))) < 1e-4


@pytest.mark.parametrize(
    "ab,expect", [(("-7/8", "-1/8"), "3.0997E-150"), (("2", "-1/2"), "3.0068E-152"), ((10, 10), "7.7362E-163")]
)
def test_auto_table_rows(ab, expect):
    r = smallest_eigenvalue_auto(WeightParams(*ab), 99, 1e-6)
    assert format_sci(r.lambda_min, 5) == expect


def test_deterministic():
    p = WeightParams("1/3", "2/3")
    r1 = smallest_eigenvalue_auto(p, 40)
    r2 = smallest_eigenvalue_auto(p, 40)
    assert r1.lambda_min == r2.lambda_min and r1.lambda_min.precision == r2.lambda_min.precision


def test_insufficient_precision_detected():
    # 64 bits cannot hold a 41x41 Hilbert matrix's smallest eigenvalue (~1e-60)
    H = hankel_matrix(WeightParams(0, 0), 40, 64)
    with pytest.raises(PrecisionExhausted) as info:
        smallest_eigenvalue(H, 1e-6, bits=64)
    assert info.value.recommended_bits > 64


def test_auto_retries_from_low_precision(caplog):
    r = smallest_eigenvalue_auto(WeightParams(0, 0), 30, 1e-6, PrecisionPolicy(override_bits=64))
    ref = smallest_eigenvalue_auto(WeightParams(0, 0), 30, 1e-6)
    assert r.prec_used > 64
    with working(512):
        assert abs(r.lambda_min / ref.lambda_min - 1) < 1e-5


def test_rel_tol_validated():
    H = hankel_matrix(WeightParams(0, 0), 3, 128)
    with pytest.raises(ValueError):
        smallest_eigenvalue(H, 0)
