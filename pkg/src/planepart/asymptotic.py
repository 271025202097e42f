"""Effective Wright-type asymptotic for PL(n) with certified error radii."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .ball import BallReal, ball
from .constants import ConstantSet, gamma_half, n_n

__all__ = [
    "DomainError",
    "Enclosure",
    "ErrorLedger",
    "ClosedForm",
    "main_term",
    "major_error_bound",
    "minor_error_bound",
    "estimate",
    "closed_form",
    "closed_form_coefficients",
    "normalized_error",
    "n_n",
]

MINOR_FLOOR = 87
CLOSED_FORM_FLOOR = {1: 105, 2: 87}


class DomainError(ValueError):
    """The requested n lies below the range where a bound is proven."""


@dataclass(frozen=True)
class ErrorLedger:
    X_r: BallReal
    Y_r: BallReal
    Z_r: BallReal


@dataclass(frozen=True)
class Enclosure:
    n: int
    r: int
    N_n: BallReal
    main: BallReal
    major_radius: BallReal
    minor_radius: BallReal
    valid: bool
    ledger: ErrorLedger | None = None

    @property
    def radius(self) -> BallReal:
        return self.major_radius + self.minor_radius

    def lower(self):
        """Certified lower end of the bracket (as an mpf)."""
        return (self.main - self.radius).lower()

    def upper(self):
        return (self.main + self.radius).upper()

    def contains(self, value: int) -> bool:
        """Certified: ``value`` lies inside the bracket for every point of the balls."""
        lo = self.main - self.radius
        hi = self.main + self.radius
        return lo <= value and hi >= value


def main_term(n: int, r: int, ks: ConstantSet, max_total: int | None = None) -> BallReal:
    """e^{c+3AN^2}/(2 pi) sum_{s,m<=r+1} (-1)^m beta_s b_{s,m} Gamma(m+1/2) / (A^{m+1/2} N^{2s+2m+25/12}).

    ``max_total`` keeps only the terms with s + m <= max_total.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if r > ks.r:
        raise ValueError(f"constant set built for r={ks.r}, asked for r={r}")
    prec = ks.precision
    A = ks.A
    N = n_n(n, A)
    sqrtA = A.sqrt()
    N_base = N ** Fraction(25, 12)
    total = ball(0, prec)
    for s in range(r + 2):
        for m in range(r + 2):
            if max_total is not None and s + m > max_total:
                continue
            term = ks.beta[s] * ks.b[s][m] * gamma_half(m, prec) / (A**m * sqrtA * N ** (2 * s + 2 * m) * N_base)
            total = total - term if m % 2 else total + term
    pref = (ks.c + ks.A * N * N * 3).exp() / (BallReal.pi(prec) * 2)
    return pref * total


def major_error_bound(n: int, r: int, ks: ConstantSet):
    """Return (ErrorLedger, E_hat) with E_hat = (X + Y) e^{2AN^2} / (N pi) + |Z|.

    beta_s enter the Y and Z sums in absolute value (triangle inequality).
    """
    if r > ks.r:
        raise ValueError(f"constant set built for r={ks.r}, asked for r={r}")
    prec = ks.precision
    A, c = ks.A, ks.c
    N = n_n(n, A)
    pi = BallReal.pi(prec)
    two = ball(2, prec)
    eAN2 = (c + A * N * N).exp()
    cr_part = two ** (Fraction(r) + Fraction(49, 24)) * ks.C_r * N ** (-Fraction(2 * r) - Fraction(49, 12))
    X = eAN2 * cr_part
    alpha_next = ks.alpha[r + 1] if len(ks.alpha) > r + 1 else None
    if alpha_next is None:
        from .constants import alpha

        alpha_next = alpha(r + 2, prec)
    tail = pi**3 * alpha_next * (2 ** (r + 5)) * N ** (-(2 * r + 4)) + (N * Fraction(-47, 10)).exp() * 10
    beta_sum = ball(0, prec)
    for s in range(r + 2):
        beta_sum = beta_sum + abs(ks.beta[s]) * two ** (Fraction(s) + Fraction(1, 24)) * N ** (-Fraction(2 * s) - Fraction(1, 12))
    Y = abs(eAN2 * tail * (cr_part + beta_sum))
    AN2 = A * N * N
    gamma_r = gamma_half(r + 2, prec)
    beta_sum_z = ball(0, prec)
    for s in range(r + 2):
        beta_sum_z = beta_sum_z + abs(ks.beta[s]) * N ** (-Fraction(2 * s) - Fraction(13, 12))
    Z = c.exp() * (
        ks.D_r * gamma_r * AN2 ** (-Fraction(5, 2) - r) * (AN2 * 3).exp()
        + (AN2 * 2).exp() * Fraction(64, 100) * (2 ** (r + 1))
    ) * beta_sum_z
    Z = abs(Z)
    total = (X + Y) * (AN2 * 2).exp() / (N * pi) + Z
    return ErrorLedger(X, Y, Z), total


def minor_error_bound(n: int, ks: ConstantSet) -> BallReal:
    """exp((3A - 2/5) N_n^2), proven for n >= 87."""
    if n < MINOR_FLOOR:
        raise DomainError(f"minor-arc bound is only proven for n >= {MINOR_FLOOR}, got {n}")
    N = n_n(n, ks.A)
    return ((ks.A * 3 - Fraction(2, 5)) * N * N).exp()


def estimate(n: int, r: int, ks: ConstantSet) -> Enclosure:
    """Main term with major- and minor-arc radii; ``valid`` records n >= max(n_r, ell_r, 87)."""
    N = n_n(n, ks.A)
    main = main_term(n, r, ks)
    ledger, major = major_error_bound(n, r, ks)
    floor = max(ks.n_r, ks.ell_r, MINOR_FLOOR)
    valid = n >= floor
    if n >= MINOR_FLOOR:
        minor = minor_error_bound(n, ks)
    else:
        minor = ((ks.A * 3 - Fraction(2, 5)) * N * N).exp()
    return Enclosure(n=n, r=r, N_n=N, main=main, major_radius=major, minor_radius=minor, valid=valid, ledger=ledger)


# -- closed forms ----------------------------------------------------------


_COEFF_CACHE: dict = {}


def closed_form_coefficients(r: int, ks: ConstantSet) -> list:
    """F_k with PL_hat_r(n) = e^{3AN^2} n^{-25/36} sum_k F_k n^{-2k/3}.

    F_k = e^c/(2 pi) (2A)^{25/36 + 2k/3} sum_{s+m=k} (-1)^m beta_s b_{s,m} Gamma(m+1/2) A^{-m-1/2},
    i.e. the double sum regrouped by s + m, keeping k <= r + 1.
    """
    if r not in CLOSED_FORM_FLOOR:
        raise ValueError("closed forms exist for r = 1 and r = 2")
    key = (id(ks), r)
    hit = _COEFF_CACHE.get(key)
    if hit is not None and hit[0] is ks:
        return hit[1]
    prec = ks.precision
    A = ks.A
    pref = ks.c.exp() / (BallReal.pi(prec) * 2)
    sqrtA = A.sqrt()
    out = []
    for k in range(r + 2):
        acc = ball(0, prec)
        for s in range(k + 1):
            m = k - s
            term = ks.beta[s] * ks.b[s][m] * gamma_half(m, prec) / (A**m * sqrtA)
            acc = acc - term if m % 2 else acc + term
        out.append(pref * (A * 2) ** (Fraction(25, 36) + Fraction(2 * k, 3)) * acc)
    _COEFF_CACHE[key] = (ks, out)
    return out


@dataclass(frozen=True)
class ClosedForm:
    n: int
    r: int
    main: BallReal
    envelope: BallReal

    def lower(self):
        return (self.main - self.envelope).lower()

    def upper(self):
        return (self.main + self.envelope).upper()


def _scale(n: int, ks: ConstantSet) -> BallReal:
    """e^{3AN^2} n^{-25/36}."""
    N = n_n(n, ks.A)
    return (ks.A * N * N * 3).exp() * ball(n, ks.precision) ** Fraction(-25, 36)


def closed_form(n: int, r: int, ks: ConstantSet, enforce_floor: bool = True) -> ClosedForm:
    """PL_hat_r(n) with its closed-form error envelope.

    r = 1: envelope 527 n^{-5/3} e^{3AN^2} n^{-25/36}, valid for n >= 105.
    r = 2: envelope 227 e^{3AN^2} n^{-109/36} + e^{(3A - 2/5) N^2}, valid for n >= 87.
    """
    if r not in CLOSED_FORM_FLOOR:
        raise ValueError("closed forms exist for r = 1 and r = 2")
    if enforce_floor and n < CLOSED_FORM_FLOOR[r]:
        raise DomainError(f"the r={r} closed form is only proven for n >= {CLOSED_FORM_FLOOR[r]}, got {n}")
    if ks.r < r:
        raise ValueError(f"constant set built for r={ks.r}, asked for r={r}")
    prec = ks.precision
    coeffs = closed_form_coefficients(r, ks)
    nb = ball(n, prec)
    total = ball(0, prec)
    for k, F in enumerate(coeffs):
        total = total + F * nb ** Fraction(-2 * k, 3)
    scale = _scale(n, ks)
    main = scale * total
    N = n_n(n, ks.A)
    if r == 1:
        env = scale * nb ** Fraction(-5, 3) * 527
    else:
        minor = ((ks.A * 3 - Fraction(2, 5)) * N * N).exp()
        env = (ks.A * N * N * 3).exp() * nb ** Fraction(-109, 36) * 227 + minor
    return ClosedForm(n=n, r=r, main=main, envelope=env)


def normalized_error(n: int, pl_n: int, ks: ConstantSet) -> BallReal:
    """E(n) = (PL(n) - PL_hat_1(n)) e^{-3AN^2} n^{25/36}, the quantity tabulated for r = 1.

    Defined for every n >= 1; the bound |E(n)| <= 527 n^{-5/3} is only proven for n >= 105.
    """
    cf = closed_form(n, 1, ks, enforce_floor=False)
    return (ball(pl_n, ks.precision) - cf.main) / _scale(n, ks)


def gamma_half_exact(m: int) -> Fraction:
    """Gamma(m + 1/2) / sqrt(pi) as an exact rational."""
    return Fraction(factorial(2 * m), 4**m * factorial(m))
