"""Certified constants consumed by the effective asymptotic.

Everything here is either an exact rational (alpha_s, beta_s, the rational
part of b_{s,m}) or a :class:`BallReal` whose radius accounts for both
rounding and truncation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath
from mpmath.libmp import mpf_cmp

from .ball import DEFAULT_PRECISION, BallReal, ball
from .series import TruncatedSeries

log = logging.getLogger(__name__)

MAX_PRECISION = 4096

# rounded upper bounds for C_2 and D_2, used only when explicitly requested
FALLBACK_C2 = Fraction(20007, 10000)
FALLBACK_D2 = Fraction(53, 10)


class InconclusiveError(ArithmeticError):
    """A ball comparison stayed undecided up to the maximum precision."""


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2)."""
    p, q = mpmath.bernfrac(n)
    return Fraction(int(p), int(q))


# -- zeta(3) ---------------------------------------------------------------


def _rising(s, k):
    out = 1
    for i in range(k):
        out *= s + i
    return out


def zeta3(precision: int = DEFAULT_PRECISION) -> BallReal:
    """Ball for zeta(3) with radius below 2**(4 - precision).

    Euler-Maclaurin with N head terms and M correction terms; all terms are
    rational so the head is summed exactly and only the remainder
    4 (3)_{2M} / (2 pi)^{2M} * N^{-2-2M} / (2+2M) is carried as radius.
    """
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    target = Fraction(1, 2 ** (precision + 2))
    n_head = max(16, precision // 8)
    s = 3
    # (2 pi)^{2M} >= 6^{2M} keeps the remainder rational and still an upper bound
    m = 1
    while True:
        rem = Fraction(4 * _rising(s, 2 * m), 6 ** (2 * m)) / (Fraction(n_head) ** (s - 1 + 2 * m) * (s + 2 * m - 1))
        if rem < target:
            break
        m += 1
        if m > 4 * precision:
            n_head *= 2
            m = 1
    total = sum(Fraction(1, k**3) for k in range(1, n_head))
    total += Fraction(1, 2 * n_head**2) + Fraction(1, 2 * n_head**3)
    for j in range(1, m + 1):
        total += bernoulli(2 * j) / factorial(2 * j) * _rising(s, 2 * j - 1) / Fraction(n_head) ** (s + 2 * j - 1)
    return _widen(ball(total, precision + 8), rem).with_precision(precision)


def zeta3_alternating(precision: int = DEFAULT_PRECISION) -> BallReal:
    """Second, independent enclosure of zeta(3): (5/2) sum (-1)^{k+1} / (k^3 C(2k,k)).

    The series alternates with decreasing terms, so the first omitted term
    bounds the tail.
    """
    target = Fraction(1, 2 ** (precision + 2))
    total = Fraction(0)
    k = 1
    while True:
        term = Fraction(5, 2 * k**3 * comb(2 * k, k))
        if term < target:
            break
        total += term if k % 2 else -term
        k += 1
    return _widen(ball(total, precision + 8), term).with_precision(precision)


def _widen(x: BallReal, extra) -> BallReal:
    """Add an exact nonnegative rational ``extra`` to the radius of ``x``."""
    e = ball(Fraction(extra), 64)
    return x + BallReal(ball(0, x.prec).mid, e._hi(), x.prec)


# -- zeta'(-1) -------------------------------------------------------------


def zeta_prime_minus_one(precision: int = DEFAULT_PRECISION) -> BallReal:
    """Ball for zeta'(-1) = -0.16542...

    Euler-Maclaurin for sum_k g(k), g(x) = -x log x (the s-derivative of
    x^{-s} at s = -1):

        zeta'(-1) = -sum_{k<N} k log k + N^2 log N / 2 - N^2 / 4 - N log N / 2
                    - sum_{j=1}^{J} B_{2j}/(2j)! g^{(2j-1)}(N) + R,

    with g'(x) = -log x - 1, g^{(m)}(x) = (m-2)!/x^{m-1} for odd m >= 3 and
    |R| <= |B_{2J}| (2J-2)! / ((2J)! (2J-2) N^{2J-2}).
    """
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    wp = precision + 24
    target = Fraction(1, 2 ** (precision + 2))
    n_head = max(16, precision // 4)
    while True:
        j_max = None
        best = None
        for J in range(2, 4 * precision):
            rem = abs(bernoulli(2 * J)) * factorial(2 * J - 2) / (
                factorial(2 * J) * (2 * J - 2) * Fraction(n_head) ** (2 * J - 2))
            if best is not None and rem > best:
                break
            best = rem
            if rem < target:
                j_max = J
                break
        if j_max is not None:
            break
        n_head *= 2
    logs = [None, ball(0, wp)] + [ball(k, wp).log() for k in range(2, n_head + 1)]
    head = ball(0, wp)
    for k in range(2, n_head):
        head = head - logs[k] * k
    N = n_head
    logN = logs[N]
    total = head + logN * Fraction(N * N, 2) - Fraction(N * N, 4) - logN * Fraction(N, 2)
    # j = 1 term: B_2/2! * g'(N) with g'(N) = -log N - 1
    total = total - (-logN - 1) * (bernoulli(2) / 2)
    corr = Fraction(0)
    for j in range(2, j_max + 1):
        m = 2 * j - 1
        corr += bernoulli(2 * j) / factorial(2 * j) * Fraction(factorial(m - 2), N ** (m - 1))
    total = total - corr
    return _widen(total, rem).with_precision(precision)


# -- exact rational constants ---------------------------------------------


@lru_cache(maxsize=None)
def alpha_exact(s: int) -> Fraction:
    """alpha_s = (2s+1) |B_{2s}| |B_{2s+2}| / (2s (2s+2)!), exactly.

    Follows from writing zeta(2s) and zeta(2s+2) through Bernoulli numbers;
    the powers of 2 pi cancel.
    """
    if s < 1:
        raise ValueError("alpha_s is defined for s >= 1")
    return (2 * s + 1) * abs(bernoulli(2 * s)) * abs(bernoulli(2 * s + 2)) / (2 * s * factorial(2 * s + 2))


def alpha(s: int, precision: int = DEFAULT_PRECISION) -> BallReal:
    return ball(alpha_exact(s), precision)


@lru_cache(maxsize=None)
def beta_exact(r: int) -> tuple:
    """beta_0..beta_{r+1}: Taylor coefficients of exp(-sum_{i=1}^{r+1} alpha_i y^i)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    order = r + 1
    S = TruncatedSeries([Fraction(0)] + [-alpha_exact(i) for i in range(1, order + 1)])
    return tuple(S.exp().coeffs)


def beta_coeffs(r: int, precision: int = DEFAULT_PRECISION) -> list:
    return [ball(b, precision) for b in beta_exact(r)]


@lru_cache(maxsize=None)
def b_rational(s: int, m: int) -> Fraction:
    """The rational q with b_{s,m} = 3^{-m-1/2} q.

    (1+y)^{2s+2m+13/12} (3+2y)^{-(m+1/2)}
        = 3^{-m-1/2} (1+y)^{(24s+24m+13)/12} (1+2y/3)^{-(2m+1)/2}.
    """
    if s < 0 or m < 0:
        raise ValueError("s and m must be nonnegative")
    order = 2 * m
    y = [Fraction(0), Fraction(1)] + [Fraction(0)] * (order - 1) if order >= 1 else [Fraction(0)]
    u = TruncatedSeries(y)
    v = TruncatedSeries([Fraction(0), Fraction(2, 3)] + [Fraction(0)] * (order - 1)) if order >= 1 else u
    p1 = u.binomial_power(24 * s + 24 * m + 13, 12)
    p2 = v.binomial_power(-(2 * m + 1), 2)
    return (p1 * p2)[order]


def b_coeff(s: int, m: int, precision: int = DEFAULT_PRECISION) -> BallReal:
    three = ball(3, precision)
    return ball(b_rational(s, m), precision) / (three ** m * three.sqrt())


def gamma_half(m: int, precision: int = DEFAULT_PRECISION) -> BallReal:
    """Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!)."""
    return BallReal.pi(precision).sqrt() * Fraction(factorial(2 * m), 4**m * factorial(m))


# -- thresholds ------------------------------------------------------------


def _decide(predicate, n, precision):
    """Evaluate a ball-valued predicate, doubling precision while undecided."""
    prec = precision
    while prec <= MAX_PRECISION:
        verdict = predicate(n, prec)
        if verdict is not None:
            return verdict
        prec *= 2
    raise InconclusiveError(f"threshold predicate undecided at n={n} up to {MAX_PRECISION} bits")


def _n_r_value(r, n, prec) -> BallReal:
    A = zeta3(prec)
    A13 = A.cbrt()
    n13 = ball(n, prec).cbrt()
    pi2 = BallReal.pi(prec) ** 2
    two76 = ball(2, prec) ** Fraction(7, 6)
    twoA13 = (A * 2).cbrt()
    total = ball(0, prec)
    for s in range(1, r + 2):
        base = A13 * s / (two76 * n13)
        total = total + base ** (2 * s) * (pi2 * n13 / (twoA13 * s) + 2)
    return total * Fraction(56, 1000)


def _n_r_predicate(r):
    def pred(n, prec):
        v = _n_r_value(r, n, prec)
        if v < 1:
            return True
        if v >= 1:
            return False
        return None
    return pred


def threshold_n_r(r: int, precision: int = DEFAULT_PRECISION, n_max: int = 10**6) -> int:
    """Least n >= 1 with 0.056 sum_{s<=r+1} (s A^{1/3} / (2^{7/6} n^{1/3}))^{2s} (...) < 1.

    The expression decreases in n, so the first n where the predicate is
    certified true is the threshold.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    pred = _n_r_predicate(r)
    for n in range(1, n_max + 1):
        if _decide(pred, n, precision):
            return n
    raise InconclusiveError(f"n_r not found below {n_max}")


def n_n(n, A: BallReal) -> BallReal:
    """Saddle scale N_n = (n / (2A))^{1/3}."""
    return (ball(n, A.prec) / (A * 2)).cbrt()


def _ell_r_value(r, n, prec) -> BallReal:
    A = zeta3(prec)
    N = n_n(n, A)
    pi3 = BallReal.pi(prec) ** 3
    first = pi3 * alpha(r + 2, prec) * (2 ** (r + 4)) * N ** (-(2 * r + 4))
    second = (N * Fraction(-47, 10)).exp() * 5
    return first + second


def threshold_ell_r(r: int, precision: int = DEFAULT_PRECISION, n_max: int = 10**6) -> int:
    """Least n >= 1 with 2^{r+4} pi^3 alpha_{r+2} N_n^{-2r-4} + 5 e^{-4.7 N_n} < 1/2."""
    if r < 1:
        raise ValueError("r must be >= 1")
    half = Fraction(1, 2)

    def pred(n, prec):
        v = _ell_r_value(r, n, prec)
        if v < half:
            return True
        if v >= half:
            return False
        return None

    for n in range(1, n_max + 1):
        if _decide(pred, n, precision):
            return n
    raise InconclusiveError(f"ell_r not found below {n_max}")


# -- C_r -------------------------------------------------------------------


def _g_ball(t: BallReal, alphas):
    # log|exp(-sum alpha_s e^{ist})| = -sum alpha_s cos(st), and its t-derivative
    total = ball(0, t.prec)
    deriv = ball(0, t.prec)
    for s, a in enumerate(alphas, start=1):
        st = t * s
        total = total - st.cos() * a
        deriv = deriv + st.sin() * (a * s)
    return total, deriv


def c_r_constant(r: int, precision: int = DEFAULT_PRECISION, grid: int = 2**8, tol=mpmath.mpf(2) ** -52) -> BallReal:
    """Ball whose upper end bounds C_r = 2 max_{|z|=1} |exp(-sum_{s<=r+1} alpha_s z^s)|.

    The log-modulus g(t) = -sum alpha_s cos(st) is even and 2 pi periodic;
    it is maximized over [0, pi] by a grid with Lipschitz slack L h / 2,
    L = sum s alpha_s (tightened near flat maxima by the second-order bound
    |g'(c)| h/2 + M2 h^2/8, M2 = sum s^2 alpha_s), refining only cells whose
    upper bound can still beat the best lower bound.  The lower end comes from actual grid values, so
    the ball encloses the true C_r.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    prec = max(64, precision)
    alphas_q = [alpha_exact(s) for s in range(1, r + 2)]
    alphas = [ball(a, prec) for a in alphas_q]
    L = sum(s * a for s, a in enumerate(alphas_q, start=1))
    M2 = sum(s * s * a for s, a in enumerate(alphas_q, start=1))
    pi = BallReal.pi(prec)
    # cells are (center index k, level) with center pi (k + 1/2) / (grid 2^level)
    cells = [(k, 0) for k in range(grid)]
    best_lo = None
    budget = 2**16
    evaluated = 0
    while True:
        scored = []
        for k, lev in cells:
            width = Fraction(1, grid * 2**lev)
            t = pi * (Fraction(2 * k + 1, 2) * width)
            g, dg = _g_ball(t, alphas)
            evaluated += 1
            g_lo = g._lo()
            half = pi * (width / 2)
            # first order: |g'| <= L; second order: |g''| <= M2
            lip = g + half * L
            taylor = g + abs(dg) * half + half * half * (M2 / 2)
            g_hi = min(lip._hi(), taylor._hi(), key=mpmath.mpf)
            if best_lo is None or mpf_cmp(g_lo, best_lo) > 0:
                best_lo = g_lo
            scored.append((g_hi, k, lev))
        live = [(h, k, lev) for h, k, lev in scored if mpf_cmp(h, best_lo) >= 0]
        top = max((h for h, _, _ in live), key=mpmath.mpf)
        gap = mpmath.mpf(top) - mpmath.mpf(best_lo)
        if gap <= tol or evaluated >= budget:
            break
        cells = []
        for h, k, lev in live:
            if mpmath.mpf(h) - mpmath.mpf(best_lo) > tol:
                cells.extend([(2 * k, lev + 1), (2 * k + 1, lev + 1)])
        if not cells:
            break
    g_enc = BallReal.from_endpoints(best_lo, top, prec)
    return g_enc.exp() * 2


# -- ConstantSet -----------------------------------------------------------


@dataclass
class ConstantSet:
    """Everything the effective asymptotic consumes, for one r."""

    r: int
    precision: int
    A: BallReal
    c: BallReal
    alpha: list
    beta: list
    b: list
    C_r: BallReal
    D_r: BallReal
    n_r: int
    ell_r: int
    certified: bool = True
    source: dict = field(default_factory=dict)

    @property
    def validity_floor(self) -> int:
        return max(self.n_r, self.ell_r, 87)

    def report(self, digits: int = 20) -> str:
        """One ``name = midpoint ± radius`` line per constant."""
        lines = [f"r = {self.r}", f"precision = {self.precision}"]
        lines.append(f"A = {self.A.format(digits)}")
        lines.append(f"c = {self.c.format(digits)}")
        for s, a in enumerate(self.alpha, start=1):
            lines.append(f"alpha_{s} = {a.format(digits)}")
        for s, bt in enumerate(self.beta):
            lines.append(f"beta_{s} = {bt.format(digits)}")
        for s, row in enumerate(self.b):
            for m, v in enumerate(row):
                lines.append(f"b_{s},{m} = {v.format(digits)}")
        lines.append(f"C_{self.r} = {self.C_r.format(digits)}")
        lines.append(f"D_{self.r} = {self.D_r.format(digits)}")
        lines.append(f"n_{self.r} = {self.n_r}")
        lines.append(f"ell_{self.r} = {self.ell_r}")
        lines.append(f"certified = {'yes' if self.certified else 'no'}")
        for k in sorted(self.source):
            lines.append(f"source_{k} = {self.source[k]}")
        return "\n".join(lines)


_CONSTANT_SETS: dict = {}


@lru_cache(maxsize=None)
def _d_r_cached(r: int):
    # D_r is computed in float64 balls, so it does not depend on the working precision
    from .curve import d_r_constant

    return d_r_constant(r)


def constant_set(r: int = 2, precision: int = DEFAULT_PRECISION, fallback: bool = False) -> ConstantSet:
    """Build (and memoize) the ConstantSet for ``r``.

    ``fallback=True`` takes the rounded bounds C_2 <= 2.0007, D_2 <= 5.3 instead of
    recomputing them (only available for r = 2).
    """
    key = (r, precision, fallback)
    if key in _CONSTANT_SETS:
        return _CONSTANT_SETS[key]

    source = {}
    if fallback:
        if r != 2:
            raise ValueError("the fallback table only covers r = 2")
        C = ball(FALLBACK_C2, precision)
        D = ball(FALLBACK_D2, precision)
        source = {"C_r": "table", "D_r": "table"}
        certified = True
    else:
        C = c_r_constant(r, precision)
        d = _d_r_cached(r)
        D = ball(d.upper, precision)
        certified = d.certified
        source = {"C_r": "grid", "D_r": "curve"}
    ks = ConstantSet(
        r=r,
        precision=precision,
        A=zeta3(precision),
        c=zeta_prime_minus_one(precision),
        alpha=[alpha(s, precision) for s in range(1, r + 3)],
        beta=beta_coeffs(r, precision),
        b=[[b_coeff(s, m, precision) for m in range(r + 2)] for s in range(r + 2)],
        C_r=C,
        D_r=D,
        n_r=threshold_n_r(r),
        ell_r=threshold_ell_r(r),
        certified=certified,
        source=source,
    )
    _CONSTANT_SETS[key] = ks
    return ks
