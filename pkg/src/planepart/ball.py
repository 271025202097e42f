"""Ball arithmetic on top of mpmath's low-level binary floats.

A :class:`BallReal` is a midpoint ``mid`` and a radius ``rad`` such that the
represented real lies in ``[mid - rad, mid + rad]``.  Midpoints are rounded
to nearest at the ball's working precision and every rounding error is added
to the radius; radii are always rounded upward.  Monotone elementary
functions are evaluated at the two endpoints with directed rounding.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from mpmath import libmp, mpf
from mpmath.libmp import (
    fzero,
    mpf_abs,
    mpf_add,
    mpf_cbrt,
    mpf_cmp,
    mpf_cos,
    mpf_div,
    mpf_exp,
    mpf_log,
    mpf_mul,
    mpf_neg,
    mpf_pi,
    mpf_sin,
    mpf_sqrt,
    mpf_sub,
    round_ceiling,
    round_floor,
    round_nearest,
)

DEFAULT_PRECISION = 192
RAD_PREC = 64

_ONE = libmp.from_int(1)


def _ulp_bound(x, prec):
    """Upper bound for the nearest-rounding error committed when producing ``x`` at ``prec`` bits."""
    if x == fzero:
        return fzero
    _, man, exp, bc = x
    return (0, 1, exp + bc - prec, 1)


def _radd(*xs):
    out = fzero
    for x in xs:
        out = mpf_add(out, x, RAD_PREC, round_ceiling)
    return out


def _rmul(a, b):
    return mpf_mul(a, b, RAD_PREC, round_ceiling)


class BallReal:
    """Real number enclosure ``mid ± rad`` at ``prec`` bits."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=fzero, prec=DEFAULT_PRECISION):
        self.mid = mid
        self.rad = rad
        self.prec = prec

    # -- construction -----------------------------------------------------

    @classmethod
    def coerce(cls, x, prec=DEFAULT_PRECISION) -> "BallReal":
        if isinstance(x, BallReal):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            mid = libmp.from_int(x, prec, round_nearest)
            err = fzero
            if x.bit_length() > prec:
                err = _ulp_bound(mid, prec)
            return cls(mid, err, prec)
        if isinstance(x, Rational):
            return cls.from_fraction(Fraction(x.numerator, x.denominator), prec)
        if isinstance(x, float):
            return cls(libmp.from_float(x), fzero, prec)
        if isinstance(x, mpf):
            return cls(x._mpf_, fzero, prec)
        raise TypeError(f"cannot make a ball from {type(x).__name__}")

    @classmethod
    def from_fraction(cls, q, prec=DEFAULT_PRECISION) -> "BallReal":
        q = Fraction(q)
        if q.denominator == 1:
            return cls.coerce(q.numerator, prec)
        lo = libmp.from_rational(q.numerator, q.denominator, prec, round_floor)
        hi = libmp.from_rational(q.numerator, q.denominator, prec, round_ceiling)
        return cls.from_endpoints(lo, hi, prec)

    @classmethod
    def from_endpoints(cls, lo, hi, prec=DEFAULT_PRECISION) -> "BallReal":
        """Smallest convenient ball containing the mpf interval ``[lo, hi]``."""
        if mpf_cmp(lo, hi) > 0:
            lo, hi = hi, lo
        mid = libmp.mpf_shift(mpf_add(lo, hi, prec, round_nearest), -1)
        r1 = mpf_sub(hi, mid, RAD_PREC, round_ceiling)
        r2 = mpf_sub(mid, lo, RAD_PREC, round_ceiling)
        rad = r1 if mpf_cmp(r1, r2) >= 0 else r2
        return cls(mid, rad, prec)

    @classmethod
    def pi(cls, prec=DEFAULT_PRECISION) -> "BallReal":
        return cls.from_endpoints(mpf_pi(prec, round_floor), mpf_pi(prec, round_ceiling), prec)

    @classmethod
    def interval(cls, lo, hi, prec=DEFAULT_PRECISION) -> "BallReal":
        """Ball containing both (ball or exact) values ``lo`` and ``hi``."""
        a = cls.coerce(lo, prec)
        b = cls.coerce(hi, prec)
        return cls.from_endpoints(a._lo(), b._hi(), prec)

    # -- inspection --------------------------------------------------------

    def _lo(self):
        return mpf_sub(self.mid, self.rad, self.prec, round_floor)

    def _hi(self):
        return mpf_add(self.mid, self.rad, self.prec, round_ceiling)

    def lower(self) -> mpf:
        return mpf(self._lo())

    def upper(self) -> mpf:
        return mpf(self._hi())

    @property
    def midpoint(self) -> mpf:
        return mpf(self.mid)

    @property
    def radius(self) -> mpf:
        return mpf(self.rad)

    def __float__(self):
        return libmp.to_float(self.mid)

    def __repr__(self):
        return f"BallReal({self.format(12)})"

    def format(self, digits=15) -> str:
        """Decimal ``mid ± rad`` rendering."""
        m = libmp.to_str(self.mid, digits)
        r = libmp.to_str(self.rad, 3)
        return f"{m} ± {r}"

    def contains(self, x) -> bool:
        """True if the exact value ``x`` (int, Fraction, mpf, ball) lies inside this ball."""
        if isinstance(x, BallReal):
            return mpf_cmp(self._lo(), x._lo()) <= 0 and mpf_cmp(x._hi(), self._hi()) <= 0
        if isinstance(x, int):
            t = libmp.from_int(x)
            return mpf_cmp(self._lo(), t) <= 0 and mpf_cmp(t, self._hi()) <= 0
        if isinstance(x, Rational):
            q = Fraction(x)
            return _mpf_to_fraction(self._lo()) <= q <= _mpf_to_fraction(self._hi())
        x = BallReal.coerce(x, self.prec)
        return self.contains(x)

    def overlaps(self, other) -> bool:
        other = BallReal.coerce(other, self.prec)
        return mpf_cmp(self._lo(), other._hi()) <= 0 and mpf_cmp(other._lo(), self._hi()) <= 0

    def is_positive(self) -> bool:
        """Certified ``> 0``."""
        return mpf_cmp(self._lo(), fzero) > 0

    def is_negative(self) -> bool:
        return mpf_cmp(self._hi(), fzero) < 0

    def is_finite(self) -> bool:
        bad = (libmp.finf, libmp.fninf, libmp.fnan)
        return self.mid not in bad and self.rad not in bad

    def rel_accuracy_bits(self) -> float:
        """Roughly log2(|mid| / rad); ``inf`` for exact balls."""
        if self.rad == fzero:
            return float("inf")
        if self.mid == fzero:
            return float("-inf")
        ratio = mpf_div(mpf_abs(self.mid), self.rad, 53)
        return float(libmp.to_float(mpf_log(ratio, 53))) / 0.6931471805599453

    # comparisons are certified: they hold only when the balls are disjoint in order
    def __lt__(self, other):
        other = BallReal.coerce(other, self.prec)
        return mpf_cmp(self._hi(), other._lo()) < 0

    def __le__(self, other):
        other = BallReal.coerce(other, self.prec)
        return mpf_cmp(self._hi(), other._lo()) <= 0

    def __gt__(self, other):
        other = BallReal.coerce(other, self.prec)
        return mpf_cmp(self._lo(), other._hi()) > 0

    def __ge__(self, other):
        other = BallReal.coerce(other, self.prec)
        return mpf_cmp(self._lo(), other._hi()) >= 0

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def _other(self, other):
        if isinstance(other, BallReal):
            return other
        return BallReal.coerce(other, self.prec)

    def __neg__(self):
        return BallReal(mpf_neg(self.mid), self.rad, self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        if mpf_cmp(self.mid, fzero) >= 0:
            out = self
        else:
            out = -self
        if mpf_cmp(out._lo(), fzero) >= 0:
            return out
        # ball straddles zero: [0, hi]
        return BallReal.from_endpoints(fzero, out._hi(), self.prec)

    def __add__(self, other):
        if not isinstance(other, (BallReal, int, float, Rational, mpf)):
            return NotImplemented
        o = self._other(other)
        prec = max(self.prec, o.prec)
        mid = mpf_add(self.mid, o.mid, prec, round_nearest)
        rad = _radd(self.rad, o.rad, _ulp_bound(mid, prec))
        return BallReal(mid, rad, prec)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (BallReal, int, float, Rational, mpf)):
            return NotImplemented
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, (BallReal, int, float, Rational, mpf)):
            return NotImplemented
        o = self._other(other)
        prec = max(self.prec, o.prec)
        mid = mpf_mul(self.mid, o.mid, prec, round_nearest)
        am = mpf_abs(self.mid)
        bm = mpf_abs(o.mid)
        rad = _radd(_rmul(am, o.rad), _rmul(bm, self.rad), _rmul(self.rad, o.rad), _ulp_bound(mid, prec))
        return BallReal(mid, rad, prec)

    __rmul__ = __mul__

    def reciprocal(self) -> "BallReal":
        lo, hi = self._lo(), self._hi()
        if mpf_cmp(lo, fzero) <= 0 <= mpf_cmp(hi, fzero):
            raise ZeroDivisionError("ball contains zero")
        # 1/x is decreasing on either side of zero
        return BallReal.from_endpoints(
            mpf_div(_ONE, hi, self.prec, round_floor), mpf_div(_ONE, lo, self.prec, round_ceiling), self.prec)

    def __truediv__(self, other):
        if not isinstance(other, (BallReal, int, float, Rational, mpf)):
            return NotImplemented
        if isinstance(other, int) and other != 0 and self.rad == fzero:
            mid = mpf_div(self.mid, libmp.from_int(other), self.prec, round_nearest)
            return BallReal(mid, _ulp_bound(mid, self.prec), self.prec)
        o = self._other(other)
        if isinstance(other, int):
            prec = self.prec
            mid = mpf_div(self.mid, o.mid, prec, round_nearest)
            rad = _radd(mpf_div(self.rad, mpf_abs(o.mid), RAD_PREC, round_ceiling), _ulp_bound(mid, prec))
            return BallReal(mid, rad, prec)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self._other(other) * self.reciprocal()

    def __pow__(self, k):
        if isinstance(k, int):
            if k < 0:
                return (self ** (-k)).reciprocal()
            result = BallReal.coerce(1, self.prec)
            base = self
            while k:
                if k & 1:
                    result = result * base
                k >>= 1
                if k:
                    base = base * base
            return result
        return pow_real(self, k)

    # -- elementary functions ---------------------------------------------

    def _monotone(self, fn, increasing=True, domain_lo=None):
        lo, hi = self._lo(), self._hi()
        if domain_lo is not None and mpf_cmp(lo, domain_lo) < 0:
            raise ValueError("ball leaves the function's domain")
        if increasing:
            return BallReal.from_endpoints(fn(lo, self.prec, round_floor), fn(hi, self.prec, round_ceiling), self.prec)
        return BallReal.from_endpoints(fn(hi, self.prec, round_floor), fn(lo, self.prec, round_ceiling), self.prec)

    def exp(self) -> "BallReal":
        return self._monotone(mpf_exp)

    def log(self) -> "BallReal":
        lo = self._lo()
        if mpf_cmp(lo, fzero) <= 0:
            raise ValueError("log of a ball reaching zero or below")
        return self._monotone(mpf_log)

    def sqrt(self) -> "BallReal":
        return self._monotone(mpf_sqrt, domain_lo=fzero)

    def cbrt(self) -> "BallReal":
        return self._monotone(mpf_cbrt, domain_lo=fzero)

    def _periodic(self, fn):
        c_lo = fn(self.mid, self.prec, round_floor)
        c_hi = fn(self.mid, self.prec, round_ceiling)
        # |cos'|, |sin'| <= 1
        lo = mpf_sub(c_lo, self.rad, self.prec, round_floor)
        hi = mpf_add(c_hi, self.rad, self.prec, round_ceiling)
        one, mone = _ONE, mpf_neg(_ONE)
        if mpf_cmp(lo, mone) < 0:
            lo = mone
        if mpf_cmp(hi, one) > 0:
            hi = one
        return BallReal.from_endpoints(lo, hi, self.prec)

    def cos(self) -> "BallReal":
        return self._periodic(mpf_cos)

    def sin(self) -> "BallReal":
        return self._periodic(mpf_sin)

    def with_precision(self, prec) -> "BallReal":
        return BallReal(self.mid, self.rad, prec)


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x
    if x in (libmp.finf, libmp.fninf, libmp.fnan):
        raise ValueError("non-finite endpoint")
    if x == fzero:
        return Fraction(0)
    v = Fraction(man) * (Fraction(2) ** exp)
    return -v if sign else v


def pow_real(x: BallReal, y) -> BallReal:
    """``x ** y`` for a positive ball ``x`` and real (ball/rational) exponent ``y``."""
    y = BallReal.coerce(y, x.prec)
    return (y * x.log()).exp()


def ball(x, prec=DEFAULT_PRECISION) -> BallReal:
    return BallReal.coerce(x, prec)


def ball_max(*balls: BallReal) -> BallReal:
    """Enclosure of the maximum of several balls."""
    prec = max(b.prec for b in balls)
    lo = max((b._lo() for b in balls), key=mpf)
    hi = max((b._hi() for b in balls), key=mpf)
    return BallReal.from_endpoints(lo, hi, prec)
