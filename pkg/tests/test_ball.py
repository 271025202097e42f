from fractions import Fraction

import mpmath
from mpmath.libmp import mpf_cmp
import pytest
from hypothesis import assume, given, settings, strategies as st

from planepart.ball import BallReal, ball, ball_max, pow_real

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 10**4), max_value=10**4, max_denominator=10**6)


def overlaps_iv(b, enc):
    # compare raw tuples; wrapping them as mpf would round to the global precision
    lo, hi = enc._mpi_
    return mpf_cmp(b._lo(), hi) <= 0 and mpf_cmp(lo, b._hi()) <= 0


@given(fractions, fractions)
def test_field_ops_contain_exact(a, b):
    x, y = ball(a), ball(b)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if b != 0:
        assert (x / y).contains(a / b)


@given(fractions, st.integers(-6, 6))
def test_int_powers(a, k):
    assume(a != 0 or k >= 0)
    assert (ball(a) ** k).contains(Fraction(a) ** k)


@settings(max_examples=60)
@given(positive)
def test_transcendentals_against_interval_oracle(q):
    iv = mpmath.iv
    old = iv.prec
    iv.prec = 400
    try:
        x = iv.mpf(q.numerator) / q.denominator
        oracle = {"exp": iv.exp(x), "log": iv.log(x), "sqrt": iv.sqrt(x),
                  "cbrt": iv.exp(iv.log(x) / 3), "cos": iv.cos(x), "sin": iv.sin(x)}
    finally:
        iv.prec = old
    b = ball(q)
    for name, enc in oracle.items():
        assert overlaps_iv(getattr(b, name)(), enc), name


@given(positive, st.fractions(min_value=-5, max_value=5, max_denominator=12))
def test_real_power(x, y):
    with mpmath.workprec(400):
        ref = mpmath.power(mpmath.mpf(x.numerator) / x.denominator, mpmath.mpf(y.numerator) / y.denominator)
    assert pow_real(ball(x), y).contains(ref) or pow_real(ball(x), y).overlaps(ball(ref))


def test_comparisons_are_certified():
    a = BallReal.from_endpoints(mpmath.mpf(1)._mpf_, mpmath.mpf(2)._mpf_)
    b = ball(Fraction(3, 2))
    assert not (a < b) and not (a > b) and not (a <= b) and not (a >= b)
    assert ball(1) < ball(2)
    assert ball(2) >= 2


def test_abs_straddling_zero():
    a = BallReal.from_endpoints(mpmath.mpf(-1)._mpf_, mpmath.mpf(3)._mpf_)
    r = abs(a)
    assert r.lower() >= 0 and r.upper() >= 3


def test_division_by_ball_containing_zero():
    a = BallReal.from_endpoints(mpmath.mpf(-1)._mpf_, mpmath.mpf(1)._mpf_)
    with pytest.raises(ZeroDivisionError):
        ball(1) / a


def test_log_of_nonpositive():
    with pytest.raises(ValueError):
        ball(-1).log()


def test_pi_encloses():
    with mpmath.workprec(600):
        assert BallReal.pi(192).contains(+mpmath.pi)
        assert BallReal.pi(64).contains(+mpmath.pi)


def test_precision_nesting():
    with mpmath.workprec(800):
        ref = mpmath.exp(mpmath.mpf(1) / 3)
    lo = ball(Fraction(1, 3), 64).exp()
    hi = ball(Fraction(1, 3), 256).exp()
    assert lo.contains(ref) and hi.contains(ref)
    assert hi.radius < lo.radius
    assert lo.overlaps(hi)


def test_large_int_rounded_outward():
    n = 3**500
    assert ball(n, 64).contains(n)


def test_format_and_max():
    assert "±" in ball(Fraction(1, 3)).format(10)
    m = ball_max(ball(1), ball(3), ball(2))
    assert m.contains(3)


def test_unhashable():
    with pytest.raises(TypeError):
        hash(ball(1))
