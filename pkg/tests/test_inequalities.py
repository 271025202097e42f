import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from planepart.inequalities import (
    CERTIFIED,
    INCONCLUSIVE,
    CacheRangeError,
    IntPolynomial,
    certify_logconcavity,
    count_real_roots,
    find_analytic_threshold,
    hermite,
    hermite_renormalize,
    is_hyperbolic,
    jensen_poly,
    logconcave_analytic,
    logconcave_exact,
    squarefree_decomposition,
    turan_check_range,
)
from planepart.sequence import PlCache


def test_int_polynomial_strips():
    p = IntPolynomial((1, 2, 0, 0))
    assert p.coeffs == (1, 2) and p.degree == 1
    assert IntPolynomial((0,)).is_zero()


def test_hyperbolic_basic():
    assert is_hyperbolic(IntPolynomial((-2, 0, 1)))
    assert not is_hyperbolic(IntPolynomial((1, 0, 1)))
    assert is_hyperbolic(IntPolynomial((5,)))
    assert is_hyperbolic(IntPolynomial((3, 7)))


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        is_hyperbolic(IntPolynomial((0,)))


def test_multiple_roots():
    # (x-1)^3 (x+2)^2 is real-rooted; (x-1)^2 (x^2+1) is not
    x = sp.symbols("x")
    for expr, want in (((x - 1) ** 3 * (x + 2) ** 2, True), ((x - 1) ** 2 * (x**2 + 1), False), (x**4, True)):
        c = [int(v) for v in sp.Poly(expr, x).all_coeffs()[::-1]]
        assert is_hyperbolic(c) is want


def test_squarefree_decomposition_multiplicities():
    x = sp.symbols("x")
    c = [int(v) for v in sp.Poly((x - 1) ** 3 * (x + 2) ** 2 * (x - 5), x).all_coeffs()[::-1]]
    parts = squarefree_decomposition(c)
    assert sorted((len(f) - 1, m) for f, m in parts) == [(1, 1), (1, 2), (1, 3)]


def _sign(coeffs, x):
    v = sum(Fraction(c) * x**k for k, c in enumerate(coeffs))
    return (v > 0) - (v < 0)


def numeric_distinct_real_roots(coeffs):
    """Real roots from numpy, each confirmed by an exact sign change in a small window."""
    roots = np.roots(coeffs[::-1])
    real = sorted({round(r.real, 9) for r in roots if abs(r.imag) < 1e-7})
    confirmed = 0
    for r in real:
        for eps in (1e-6, 1e-5, 1e-4):
            a, b = Fraction(r - eps), Fraction(r + eps)
            if _sign(coeffs, a) * _sign(coeffs, b) < 0:
                confirmed += 1
                break
    return confirmed, len(real)


def test_sturm_matches_numeric_roots():
    rng = random.Random(2024)
    x = sp.symbols("x")
    checked = 0
    while checked < 200:
        d = rng.randint(1, 6)
        c = [rng.randint(-20, 20) for _ in range(d + 1)]
        if c[-1] == 0:
            continue
        if d >= 2 and sp.discriminant(sp.Poly(c[::-1], x)) == 0:
            continue  # repeated roots defeat the sign-change validation
        confirmed, found = numeric_distinct_real_roots(c)
        assert confirmed == found
        assert count_real_roots(c) == found, c
        checked += 1


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=7).filter(lambda c: c[-1] != 0),
       st.integers(-9, 9).filter(lambda k: k != 0))
def test_scale_invariance(c, k):
    assert is_hyperbolic(c) == is_hyperbolic([k * v for v in c])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), st.integers(1, 4))
def test_products_of_linear_factors_hyperbolic(roots, lead):
    x = sp.symbols("x")
    expr = lead * sp.prod([x - r for r in roots])
    c = [int(v) for v in sp.Poly(expr, x).all_coeffs()[::-1]]
    assert is_hyperbolic(c)


def test_jensen_examples(cache):
    assert jensen_poly(3, 0, cache).coeffs == (1, 3, 9, 6)
    for n in (0, 5, 100):
        assert is_hyperbolic(jensen_poly(1, n, cache))
    p = jensen_poly(4, 10, cache)
    assert p.coeffs == tuple(math.comb(4, j) * cache[10 + j] for j in range(5))


def test_jensen_range_error():
    small = PlCache().require(10)
    with pytest.raises(CacheRangeError) as err:
        jensen_poly(3, 9, small)
    assert err.value.required == 12


def test_logconcave_exact_small(cache):
    assert logconcave_exact(12, cache)
    assert logconcave_exact(2, cache)
    assert cache[2] ** 2 == 9 and cache[1] * cache[3] == 6
    assert [n for n in range(1, 12) if not logconcave_exact(n, cache)] == [1, 3, 5, 7, 9, 11]


def test_logconcave_exact_range_error():
    with pytest.raises(CacheRangeError):
        logconcave_exact(10, PlCache().require(10))


def test_discriminant_biconditional(cache):
    for n in range(2, 2001):
        assert is_hyperbolic(jensen_poly(2, n - 1, cache)) == logconcave_exact(n, cache), n


def test_turan_d2_ranges(cache):
    assert turan_check_range(2, 12, 10**4, cache, strict=True).failures == []
    rep = turan_check_range(2, 1, 11, cache)
    assert rep.failures and rep.status == "refuted"


def test_turan_d3_eventual(cache):
    rep = turan_check_range(3, 1, 3000, cache)
    n_star = rep.analytic_threshold
    assert n_star is not None and rep.status == CERTIFIED
    assert all(n < n_star for n in rep.failures)
    assert n_star - 1 in rep.failures or n_star == 1


def test_turan_shift_zero_matches_shifted_range(cache):
    a = turan_check_range(3, 30, 200, cache, shift=0)
    b = turan_check_range(3, 31, 201, cache, shift=-1)
    assert [n - 1 for n in b.failures] == a.failures


def test_hermite_known():
    assert hermite(0).coeffs == (1,)
    assert hermite(1).coeffs == (0, 1)
    assert hermite(2).coeffs == (-2, 0, 1)
    assert hermite(3).coeffs == (0, -6, 0, 1)
    assert hermite(4).coeffs == (12, 0, -12, 0, 1)


def test_hermite_generating_function():
    t, X = sp.symbols("t X")
    gen = sp.series(sp.exp(-t**2 + X * t), t, 0, 9).removeO()
    for d in range(9):
        expected = sp.Poly(sp.expand(gen.coeff(t, d) * sp.factorial(d)), X)
        got = [int(v) for v in expected.all_coeffs()[::-1]]
        assert hermite(d).coeffs == tuple(got)


def test_hermite_renormalize_d2(cache):
    a = hermite_renormalize(2, 1000, cache)
    b = hermite_renormalize(2, 10000, cache)
    assert b.hermite_distance < a.hermite_distance
    assert b.hermite_distance < 0.1
    assert b.delta_n > 0


def test_hermite_renormalize_d3_trend(cache):
    dist = [hermite_renormalize(3, n, cache).hermite_distance for n in (500, 1000, 2000, 4000, 8000)]
    assert all(b < a for a, b in zip(dist, dist[1:]))


def test_hermite_renormalize_d1(cache):
    a = hermite_renormalize(1, 500, cache)
    b = hermite_renormalize(1, 8000, cache)
    assert b.hermite_distance < a.hermite_distance < 0.1


def test_renorm_fields(cache):
    r = hermite_renormalize(4, 2000, cache)
    assert r.d == 4 and r.n == 2000 and len(r.renormalized_coeffs) == 5
    assert abs(r.renormalized_coeffs[-1] - 1) < 0.01


def test_logconcave_analytic_threshold(ks2):
    assert logconcave_analytic(8820, 2, ks2) == CERTIFIED
    assert logconcave_analytic(10**4, 2, ks2) == CERTIFIED
    assert logconcave_analytic(100, 2, ks2) == INCONCLUSIVE
    assert logconcave_analytic(50, 2, ks2) == INCONCLUSIVE  # below the closed-form floor


def test_find_threshold(ks2):
    n0 = find_analytic_threshold(2, ks2)
    assert n0 <= 10**4
    assert logconcave_analytic(n0 - 1, 2, ks2) != CERTIFIED


def test_analytic_soundness_spot_check(ks2, cache):
    rng = random.Random(9)
    for n in rng.sample(range(8820, 11999), 40):
        if logconcave_analytic(n, 2, ks2) == CERTIFIED:
            assert logconcave_exact(n, cache)


def test_certify_refutation_path(ks2, cache):
    rep = certify_logconcavity(2, cache, n_from=1, ks=ks2)
    assert rep.status == "refuted"
    assert {1, 3, 5, 7, 9, 11} <= set(rep.failures)


def test_certify_from_12(ks2, cache):
    rep = certify_logconcavity(2, cache, n_from=12, ks=ks2)
    assert rep.status == CERTIFIED and rep.failures == []
    assert rep.analytic_threshold <= 10**4
    methods = {m for _, m, _ in rep.records}
    assert methods == {"exact", "analytic"}
    ns = [n for n, _, _ in rep.records]
    assert ns == sorted(ns) and len(ns) == len(set(ns))


def test_certify_cache_too_small(ks2):
    with pytest.raises(CacheRangeError) as err:
        certify_logconcavity(2, PlCache().require(100), ks=ks2, extend=False)
    assert err.value.required > 8000


def test_report_serialization(cache):
    rep = turan_check_range(2, 1, 11, cache)
    text = rep.to_text()
    first = text.splitlines()[0].split("\t")
    assert first == ["1", "exact", "fails"]
    assert "status: refuted" in text
    rec = rep.to_records()
    for key in ("claim=", "range=", "threshold=", "failures=", "status="):
        assert key in rec
