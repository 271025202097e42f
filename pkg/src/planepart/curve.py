"""Upper bound for the Taylor-remainder constant D_r on the steepest-descent curve.

On the curve (x^2 + y^2)^2 = x the quantity t, with t^2 = 3 - 2v - v^{-2},
is real.  Writing v = rho e^{i theta} the curve is rho^3 = cos(theta); the
upper branch theta in [0, pi/2) carries t from 0 to +infinity and the lower
branch is its mirror image (t -> -t, chi -> conj chi), which does not change
|chi^{(K)}|.

We parametrize the upper branch by q in (0, (pi/2)^{1/3}] through

    theta = pi/2 - q^3,   v = sin(q^3)^{1/3} e^{i theta},

which is smooth at both ends (v ~ i q near the origin).  For each cell of
q values we enclose v in a complex ball, invert the relation
t = H(v) = -i (v - 1) sqrt(2v + 1) / v as a power series around the cell
and read off the order-K Taylor coefficient of

    chi_s(t) = v^{2s+25/12} sqrt(2v + 1) / (2 pi (v^2 + v + 1)),

i.e. chi_s^{(K)}(t)/K!.  H'(v) = -i (v^2+v+1) / (v^2 sqrt(2v+1)) never
vanishes on the curve, so the series inversion is valid everywhere.

All arithmetic uses float64 complex balls with rounding errors pushed into
the radius, so the maximization is rigorous under the assumption that the
platform's sin/cos/pow are accurate to a few ulps (a 1e-10 relative margin
is applied to every transcendental evaluation).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries

log = logging.getLogger(__name__)

U = 2.0**-53
INFL = 1.0 + 8 * U
ETA = 1e-300
LIBM_MARGIN = 1e-10

Q_MAX = (math.pi / 2) ** (1.0 / 3.0)
Q_MIN = 2.0**-10


class CBall:
    """Arrays of complex balls: center re + i im, radius rad (elementwise)."""

    __slots__ = ("re", "im", "rad")

    def __init__(self, re, im, rad):
        self.re = re
        self.im = im
        self.rad = rad

    @classmethod
    def exact(cls, re, im=0.0, shape=None):
        re = np.broadcast_to(np.asarray(re, dtype=float), shape or np.shape(re)).copy()
        im = np.broadcast_to(np.asarray(im, dtype=float), re.shape).copy()
        return cls(re, im, np.zeros_like(re))

    def norm1(self):
        """|re| + |im|, an upper bound for the modulus of the center (up to one rounding)."""
        return np.abs(self.re) + np.abs(self.im)

    def abs_upper(self):
        return (np.hypot(self.re, self.im) * (1 + 4 * U) + self.rad) * INFL

    def abs_lower(self):
        return np.maximum(np.hypot(self.re, self.im) * (1 - 4 * U) - self.rad * INFL, 0.0)

    def __neg__(self):
        return CBall(-self.re, -self.im, self.rad)

    def _coerce(self, other):
        if isinstance(other, CBall):
            return other
        if isinstance(other, complex):
            return CBall.exact(other.real, other.imag, self.re.shape)
        return CBall.exact(float(other), 0.0, self.re.shape)

    def __add__(self, other):
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            re = self.re + other
            return CBall(re, self.im, (self.rad + U * np.abs(re)) * INFL + ETA)
        o = self._coerce(other)
        re = self.re + o.re
        im = self.im + o.im
        rad = (self.rad + o.rad + U * (np.abs(re) + np.abs(im))) * INFL + ETA
        return CBall(re, im, rad)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return self + (-other)
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            c = float(other)
            if c != other:
                raise ValueError("integer scale factor not exactly representable")
            re = self.re * c
            im = self.im * c
            rad = (abs(c) * self.rad + U * (np.abs(re) + np.abs(im))) * INFL + ETA
            return CBall(re, im, rad)
        o = self._coerce(other)
        a, b, c, d = self.re, self.im, o.re, o.im
        re = a * c - b * d
        im = a * d + b * c
        n1 = self.norm1()
        n2 = o.norm1()
        # propagation |m1| r2 + |m2| r1 + r1 r2 plus the rounding of the center
        rad = (n1 * o.rad + n2 * self.rad + self.rad * o.rad + 3 * U * n1 * n2) * INFL + ETA
        return CBall(re, im, rad)

    __rmul__ = __mul__

    def mul_i(self, sign=1):
        """Multiply by +-i exactly."""
        if sign > 0:
            return CBall(-self.im, self.re.copy(), self.rad)
        return CBall(self.im.copy(), -self.re, self.rad)

    def __truediv__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            k = float(other)
            if k != other or k == 0:
                raise ValueError("bad integer divisor")
            re = self.re / k
            im = self.im / k
            rad = (self.rad / abs(k) + U * (np.abs(re) + np.abs(im))) * INFL + ETA
            return CBall(re, im, rad)
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def reciprocal(self):
        mlo = np.hypot(self.re, self.im) * (1 - 4 * U)
        gap = mlo - self.rad * INFL
        bad = gap <= 0
        den = self.re * self.re + self.im * self.im
        with np.errstate(divide="ignore", invalid="ignore"):
            re = self.re / den
            im = -self.im / den
            rad = (self.rad / (mlo * gap) + 8 * U / mlo) * INFL + ETA
        rad = np.where(bad, np.inf, rad)
        re = np.where(bad, 0.0, re)
        im = np.where(bad, 0.0, im)
        return CBall(re, im, rad)

    def sqrt_right(self):
        """Principal square root of balls lying in the open right half plane."""
        bad = self.re - self.rad * INFL <= 0
        z = self.re + 1j * self.im
        w = np.sqrt(z)
        mlo = np.hypot(self.re, self.im) * (1 - 4 * U)
        with np.errstate(divide="ignore", invalid="ignore"):
            # |sqrt z - sqrt m| = |z - m| / |sqrt z + sqrt m| <= r / sqrt|m| in the right half plane
            rad = (self.rad / np.sqrt(mlo) * (1 + 4 * U) + 4 * U * np.abs(w)) * INFL + ETA
        rad = np.where(bad, np.inf, rad)
        return CBall(w.real.copy(), w.imag.copy(), rad)

    def __getitem__(self, idx):
        return CBall(self.re[idx], self.im[idx], self.rad[idx])


def _vertex_balls(q_lo, q_hi):
    """Complex balls enclosing v(q) for q in each cell [q_lo, q_hi]."""
    qc = 0.5 * (q_lo + q_hi)
    half = 0.5 * (q_hi - q_lo)
    x = qc**3
    rho = np.sin(x) ** (1.0 / 3.0)
    theta = math.pi / 2 - x
    re = rho * np.cos(theta)
    im = rho * np.sin(theta)
    center_err = 64 * U * rho + LIBM_MARGIN * rho
    # |dv/dq|^2 = q^4 cos^2(q^3) sin(q^3)^{-4/3} + 9 q^4 sin(q^3)^{2/3}
    #          <= (1 - q^6/6)^{-4/3} + 9 q^4 sin(q^3)^{2/3}, increasing in q
    q2 = q_hi
    speed = np.sqrt((1 - q2**6 / 6) ** (-4.0 / 3.0) + 9 * q2**4 * np.sin(q2**3) ** (2.0 / 3.0))
    rad = (center_err + half * speed * (1 + LIBM_MARGIN)) * INFL
    rho_max = np.sin(np.minimum(q_hi, Q_MAX) ** 3) ** (1.0 / 3.0) * (1 + LIBM_MARGIN)
    return CBall(re, im, rad), rho_max, speed


def _linear(c0: CBall, c1, order):
    zero = c0 * 0
    coeffs = [c0, c1 if isinstance(c1, CBall) else zero + c1] + [zero] * (order - 1)
    return TruncatedSeries(coeffs)


def _normalized_coeffs(V: CBall, K: int, s_values):
    """Balls for [h^K] chi_s(t0 + h) / V^a, a = 2s + 25/12, at every V in the array."""
    zero = V * 0
    inv_v = V.reciprocal()
    two_v1 = V * 2 + 1
    sq = two_v1.sqrt_right()
    inv_2v1 = two_v1.reciprocal()

    eps_over_v = _linear(zero, inv_v, K)          # eps / V
    eps_2v1 = _linear(zero, inv_2v1 * 2, K)       # 2 eps / (2V + 1)
    sqrt_factor = eps_2v1.binomial_power(1, 2) * sq
    # H(V + eps) = -i (V - 1 + eps) sqrt(2V+1) (1 + 2eps/(2V+1))^{1/2} / V (1 + eps/V)^{-1}
    H = _linear(V - 1, 1.0, K) * sqrt_factor * eps_over_v.binomial_power(-1, 1) * inv_v
    H = TruncatedSeries([c.mul_i(-1) for c in H.coeffs])
    H.coeffs[0] = zero
    w = H.revert()                                  # eps as a series in h = t - t0

    quad = TruncatedSeries([V * V + V + 1, two_v1, zero + 1] + [zero] * (K - 2))
    base = sqrt_factor * quad.reciprocal()
    out = []
    for s in s_values:
        F = eps_over_v.binomial_power(24 * s + 25, 12) * base
        out.append(F.compose(w).coeffs[K])
    return out


def _exponent(s):
    return 2 * s + 25.0 / 12.0


def chi_point_bounds(q, K, s_values):
    """Rigorous lower and upper bounds for |chi_s^{(K)}|/K! at the points v(q).

    Returns two arrays of shape (len(s_values), len(q)).
    """
    q = np.asarray(q, dtype=float)
    V, _, _ = _vertex_balls(q, q)
    rho = np.sin(q**3) ** (1.0 / 3.0)
    lows, highs = [], []
    for s, c in zip(s_values, _normalized_coeffs(V, K, s_values)):
        a = _exponent(s)
        scale = rho**a / (2 * math.pi)
        lows.append(c.abs_lower() * scale * (1 - LIBM_MARGIN) * (1 - 8 * U))
        highs.append(c.abs_upper() * scale * (1 + LIBM_MARGIN) * INFL)
    return np.array(lows), np.array(highs)


def chi_cell_bounds(V: CBall, rho_max, K, s_values):
    """Crude upper bounds for |chi_s^{(K)}|/K! over whole cells (ball evaluation)."""
    out = []
    for s, c in zip(s_values, _normalized_coeffs(V, K, s_values)):
        a = _exponent(s)
        out.append(c.abs_upper() * rho_max**a * (1 + LIBM_MARGIN) / (2 * math.pi) * INFL)
    return np.array(out)


def dt_dq_bound(V: CBall, speed):
    """Upper bound of |dt/dq| = |H'(v)| |dv/dq| with H'(v) = -i (v^2+v+1) / (v^2 sqrt(2v+1))."""
    num = (V * V + V + 1).abs_upper()
    den = (V * V).abs_lower() * (V * 2 + 1).sqrt_right().abs_lower()
    with np.errstate(divide="ignore"):
        return np.where(den > 0, num / den * speed * INFL, np.inf)


def tail_bound(K: int, s_values, q_min: float = Q_MIN) -> float:
    """Bound for |chi_s^{(K)}(t)|/K! on the piece q < q_min (t large).

    For |t| >= t0/2 the map v -> i (1 - v) sqrt(1 + 2v) / t is a contraction
    of |v| <= 1.03/|t| (valid once |t| >= 100), so v(t) is analytic there
    with |v| <= 2.06/t0.  Hence |chi_s| <= M = (2.06/t0)^a 1.01 / (2 pi 0.98)
    on the disc |t - t0| <= t0/2, and Cauchy's estimate gives M / (t0/2)^K.
    The bound decreases in t0, so it is evaluated at the smallest t0 on the
    piece, a rigorous lower bound for t(q_min).
    """
    V, _, _ = _vertex_balls(np.array([q_min]), np.array([q_min]))
    # |t| = |v - 1| |sqrt(2v+1)| / |v|
    num = (V - 1).abs_lower() * (V * 2 + 1).sqrt_right().abs_lower()
    t0 = float(num[0] / V.abs_upper()[0]) * (1 - 1e-9)
    if t0 < 200:
        raise ValueError("q_min too large for the contraction argument")
    worst = 0.0
    for s in s_values:
        a = 2 * s + 25.0 / 12.0
        M = (2.06 / t0) ** a * 1.01 / (2 * math.pi * 0.98)
        worst = max(worst, M / (t0 / 2) ** K)
    return worst * (1 + 1e-9)


@dataclass
class DrResult:
    r: int
    upper: float
    lower: float
    certified: bool
    evaluations: int
    cells: int
    tail: float
    argmax_q: float
    argmax_s: int


def d_r_constant(r: int, initial_cells: int = 2**12, budget: int = 2**20, rel_tol: float = 0.01,
                 q_min: float = Q_MIN) -> DrResult:
    """Certified upper bound for D_r = max_s sup_t |chi_s^{(2r+4)}(t)| / (2r+4)!.

    Branch and bound over q cells.  On a cell with center q_c and half width
    h the bound is the centered form

        |c_K(q)| <= |c_K(q_c)| + h (K+1) sup|c_{K+1}| sup|dt/dq|,

    since d c_K/dq = (K+1) c_{K+1} dt/dq, with c_k = chi^{(k)}/k!.  The center
    value is a tight point enclosure; the sup terms come from crude whole-cell
    ball evaluations.  Cells are bisected while their bound exceeds
    (1 + rel_tol) times the best rigorous point value.  On budget exhaustion
    the current maximum of cell bounds is returned (still sound).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    K = 2 * r + 4
    s_values = list(range(r + 2))
    edges = np.linspace(q_min, Q_MAX, initial_cells + 1)
    lo, hi = edges[:-1], edges[1:].copy()
    hi[-1] = Q_MAX
    evaluations = 0
    best_lower = 0.0
    best_q, best_s = float("nan"), -1
    settled_upper = 0.0
    while lo.size:
        mids = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        lb_all, ub_center = chi_point_bounds(mids, K, s_values)
        V, rho_max, speed = _vertex_balls(lo, hi)
        slope = chi_cell_bounds(V, rho_max, K + 1, s_values) * (K + 1)
        dtdq = dt_dq_bound(V, speed)
        with np.errstate(invalid="ignore", over="ignore"):
            ub_all = (ub_center + half * (1 + 4 * U) * slope * dtdq) * INFL
        ub_all = np.where(np.isnan(ub_all), np.inf, ub_all)
        ub = ub_all.max(axis=0)
        lb = lb_all.max(axis=0)
        evaluations += lo.size
        k = int(np.argmax(lb))
        if lb[k] > best_lower:
            best_lower = float(lb[k])
            best_q = float(mids[k])
            best_s = int(s_values[int(np.argmax(lb_all[:, k]))])
        refine = ub > best_lower * (1 + rel_tol)
        done = ~refine
        if done.any():
            settled_upper = max(settled_upper, float(ub[done].max()))
        if not refine.any():
            break
        if evaluations + 2 * int(refine.sum()) > budget:
            settled_upper = max(settled_upper, float(ub[refine].max()))
            break
        lo, hi = lo[refine], hi[refine]
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    tail = tail_bound(K, s_values, q_min)
    upper = max(settled_upper, tail, best_lower)
    log.info("D_%d <= %.6g (lower %.6g, %d evaluations)", r, upper, best_lower, evaluations)
    return DrResult(
        r=r,
        upper=upper,
        lower=best_lower,
        certified=r in (1, 2) and math.isfinite(upper),
        evaluations=evaluations,
        cells=int(initial_cells),
        tail=tail,
        argmax_q=best_q,
        argmax_s=best_s,
    )


def v_of_q(q: float) -> complex:
    """Point of the upper branch for parameter q (plain floats)."""
    x = q**3
    rho = math.sin(x) ** (1.0 / 3.0)
    return rho * complex(math.cos(math.pi / 2 - x), math.sin(math.pi / 2 - x))


def t_of_v(v: complex) -> complex:
    return -1j * (v - 1) * (2 * v + 1) ** 0.5 / v


def chi(s: int, v: complex) -> complex:
    return v ** (2 * s + 25 / 12) * (2 * v + 1) ** 0.5 / (2 * math.pi * (v * v + v + 1))
