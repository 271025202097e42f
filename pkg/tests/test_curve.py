import math

import mpmath
import numpy as np
import pytest

from planepart.constants import constant_set
from planepart.curve import (
    Q_MAX,
    chi,
    chi_point_bounds,
    d_r_constant,
    t_of_v,
    tail_bound,
    v_of_q,
)


def chi_derivative_oracle(s, q, K, dps=40):
    """|d^K/dt^K chi_s(v(t))| / K! by numerical differentiation of the implicit inverse of t(v)."""
    with mpmath.workdps(dps):
        v0 = mpmath.mpc(v_of_q(q))
        # polish the start point on the curve, then follow the root in t
        t0 = mpmath.re(-1j * (v0 - 1) * mpmath.sqrt(2 * v0 + 1) / v0)

        def v_of_t(t):
            return mpmath.findroot(lambda v: -1j * (v - 1) * mpmath.sqrt(2 * v + 1) / v - t, v0)

        def f(t):
            v = v_of_t(t)
            return v ** (2 * s + mpmath.mpf(25) / 12) * mpmath.sqrt(2 * v + 1) / (2 * mpmath.pi * (v * v + v + 1))

        return abs(mpmath.diff(f, t0, K)) / mpmath.factorial(K)


@pytest.mark.parametrize("q", [0.3, 0.8, 1.05])
def test_t_is_real_on_curve(q):
    v = v_of_q(q)
    t = t_of_v(v)
    assert abs(t.imag) < 1e-12
    assert abs(t * t - (3 - 2 * v - v**-2)) < 1e-9


@pytest.mark.parametrize("q", [0.2, 0.6, 1.1])
def test_same_curve_as_x_parametrization(q):
    # v = x + i sqrt(sqrt(x) - x^2) with x = Re v
    v = v_of_q(q)
    x = v.real
    assert abs(v.imag - math.sqrt(math.sqrt(x) - x * x)) < 1e-12


def test_chi0_at_one():
    assert abs(chi(0, 1) - 1 / (2 * math.pi * math.sqrt(3))) < 1e-15
    assert abs(v_of_q(Q_MAX) - 1) < 1e-12


@pytest.mark.parametrize("q,s", [(0.8, 3), (0.5, 1), (1.1, 0), (0.95, 2)])
def test_point_bounds_bracket_oracle(q, s):
    K = 8
    ref = float(chi_derivative_oracle(s, q, K))
    lows, highs = chi_point_bounds(np.array([q]), K, [s])
    assert lows[0][0] <= ref <= highs[0][0]
    # float64 balls through the series pipeline: sharp to well under 1% relative
    assert highs[0][0] - lows[0][0] < 1e-2 * ref


def test_d2_bounds():
    res = d_r_constant(2)
    assert res.certified
    assert res.lower <= res.upper <= 5.3
    sample = float(chi_derivative_oracle(1, 0.8, 8))
    assert res.upper >= sample


def test_d1_below_d2():
    d1 = d_r_constant(1)
    assert d1.lower <= d1.upper < d_r_constant(2).upper


def test_tail_bound_small():
    assert 0 <= tail_bound(8, [0, 1, 2, 3]) < 1e-3


def test_constant_set_uses_curve_bound():
    ks = constant_set(2)
    assert ks.source["D_r"] == "curve"
    assert float(ks.D_r.upper()) <= 5.3
