"""Truncated formal power series with coefficients in any exact or ball ring.

Coefficients only need ``+``, ``-``, ``*`` and division by a Python ``int``;
``reciprocal`` additionally needs ``1 / c0``.  That covers ``Fraction``,
:class:`~planepart.ball.BallReal` and the complex-ball arrays used on the
curve.  All recurrences below only divide by integers, so exact inputs stay
exact and ball inputs stay enclosures.
"""

from __future__ import annotations

from fractions import Fraction


def _zero_like(x):
    return x * 0


class TruncatedSeries:
    """sum_{k=0}^{order} coeffs[k] * y**k, everything above ``order`` dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order, zero=None):
        zero = _zero_like(c) if zero is None else zero
        return cls([c] + [zero] * order)

    @classmethod
    def variable(cls, order, one=Fraction(1), zero=None):
        """The series ``y``."""
        zero = _zero_like(one) if zero is None else zero
        coeffs = [zero] * (order + 1)
        if order >= 1:
            coeffs[1] = one
        return cls(coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries({self.coeffs!r})"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def truncate(self, order) -> "TruncatedSeries":
        if order > self.order:
            zero = _zero_like(self.coeffs[0])
            return TruncatedSeries(self.coeffs + [zero] * (order - self.order))
        return TruncatedSeries(self.coeffs[: order + 1])

    def _align(self, other):
        if isinstance(other, TruncatedSeries):
            order = min(self.order, other.order)
            return self.coeffs[: order + 1], other.coeffs[: order + 1]
        other_c = [other] + [_zero_like(self.coeffs[0])] * self.order
        return self.coeffs, other_c

    def __add__(self, other):
        a, b = self._align(other)
        return TruncatedSeries([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._align(other)
        return TruncatedSeries([x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([x * other for x in self.coeffs])
        order = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(order + 1):
            acc = a[0] * b[k]
            for j in range(1, k + 1):
                acc = acc + a[j] * b[k - j]
            out.append(acc)
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def scale_int(self, num, den=1) -> "TruncatedSeries":
        """Multiply every coefficient by the rational num/den."""
        return TruncatedSeries([(x * num) / den for x in self.coeffs])

    def reciprocal(self) -> "TruncatedSeries":
        a = self.coeffs
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, len(a)):
            acc = a[1] * out[k - 1]
            for j in range(2, k + 1):
                acc = acc + a[j] * out[k - j]
            out.append(-(acc * inv0))
        return TruncatedSeries(out)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return TruncatedSeries([x / other for x in self.coeffs])

    def derivative(self) -> "TruncatedSeries":
        """Formal derivative; the result has order one less (at least 0)."""
        if self.order == 0:
            return TruncatedSeries([_zero_like(self.coeffs[0])])
        return TruncatedSeries([self.coeffs[k] * k for k in range(1, len(self.coeffs))])

    def _require_zero_constant(self, what):
        c0 = self.coeffs[0]
        if isinstance(c0, (int, Fraction)) and c0 != 0:
            raise ValueError(f"{what} needs a series with zero constant term")

    def exp(self) -> "TruncatedSeries":
        """exp(S) for S with zero constant term: e_k = (1/k) sum_j j s_j e_{k-j}."""
        self._require_zero_constant("exp")
        s = self.coeffs
        zero = _zero_like(s[0])
        out = [zero + 1]
        for k in range(1, len(s)):
            acc = zero
            for j in range(1, k + 1):
                acc = acc + s[j] * out[k - j] * j
            out.append(acc / k)
        return TruncatedSeries(out)

    def log1p(self) -> "TruncatedSeries":
        """log(1 + S) for S with zero constant term."""
        self._require_zero_constant("log1p")
        s = self.coeffs
        zero = _zero_like(s[0])
        # l' (1 + S) = S'  =>  k l_k = k s_k - sum_{j=1}^{k-1} j l_j s_{k-j}
        out = [zero]
        for k in range(1, len(s)):
            acc = s[k] * k
            for j in range(1, k):
                acc = acc - out[j] * s[k - j] * j
            out.append(acc / k)
        return TruncatedSeries(out)

    def binomial_power(self, num: int, den: int = 1) -> "TruncatedSeries":
        """(1 + U)**(num/den) for U with zero constant term.

        Uses p' (1 + U) = a U' p, i.e.
        p_k = sum_{j=1}^{k} (num*j - den*(k-j)) u_j p_{k-j} / (den*k),
        which divides only by integers.
        """
        self._require_zero_constant("binomial_power")
        if den <= 0:
            raise ValueError("den must be positive")
        u = self.coeffs
        zero = _zero_like(u[0])
        out = [zero + 1]
        for k in range(1, len(u)):
            acc = zero
            for j in range(1, k + 1):
                acc = acc + u[j] * out[k - j] * (num * j - den * (k - j))
            out.append(acc / (den * k))
        return TruncatedSeries(out)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(y)) for ``inner`` with zero constant term (Horner)."""
        inner._require_zero_constant("compose")
        order = min(self.order, inner.order)
        inner = inner.truncate(order)
        acc = TruncatedSeries.constant(self.coeffs[order], order, _zero_like(inner.coeffs[0]))
        for k in range(order - 1, -1, -1):
            acc = acc * inner + self.coeffs[k]
        return acc

    def revert(self) -> "TruncatedSeries":
        """Compositional inverse g with self(g(y)) = y; needs c0 = 0 and c1 invertible.

        Coefficients are produced one at a time: g_k = -[y^k] sum_{j>=2} c_j g^j / c1,
        where the right side only involves g_1..g_{k-1}.  Each coefficient is
        computed once, which keeps ball radii from compounding.
        """
        self._require_zero_constant("revert")
        order = self.order
        c = self.coeffs
        zero = _zero_like(c[0])
        g = [zero] * (order + 1)
        if order == 0:
            return TruncatedSeries(g)
        inv1 = 1 / c[1]
        g[1] = inv1
        for k in range(2, order + 1):
            w = TruncatedSeries(g[: k + 1])
            power = w
            acc = zero
            for j in range(2, k + 1):
                power = power * w
                acc = acc + c[j] * power.coeffs[k]
            g[k] = -(acc * inv1)
        return TruncatedSeries(g)

    def evaluate(self, y):
        """Horner evaluation of the polynomial part at ``y``."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * y + c
        return acc


def series_from_poly(coeffs, order, zero=Fraction(0)) -> TruncatedSeries:
    coeffs = list(coeffs)[: order + 1]
    return TruncatedSeries(coeffs + [zero] * (order + 1 - len(coeffs)))
