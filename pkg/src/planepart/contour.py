"""Floating-point circle-method oracle.

Splits Cauchy's integral for PL(n) on |x| = e^{-1/N_n} into the major arc
|theta| < 1/N_n and the minor arc, integrates each numerically, and lets the
tests compare J(n) + E^min(n) with the exact value.  Nothing here is
certified; it only cross-checks the analytic pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

# A = zeta(3) and c = zeta'(-1) in double precision (the certified values live in constants)
A_FLOAT = 1.2020569031595942
C_FLOAT = -0.16542114370045092
ORACLE_BUDGET = 200


class BudgetError(ValueError):
    """n is beyond what the floating oracle is meant for."""


class ContourDomainError(ValueError):
    pass


def n_n_float(n: int) -> float:
    return (n / (2 * A_FLOAT)) ** (1 / 3)


@dataclass(frozen=True)
class ContourParams:
    n: int
    N: float
    tol: float

    @property
    def split(self) -> float:
        return 1.0 / self.N

    def z(self, theta):
        return 1.0 / self.N - 1j * theta

    def w(self, theta):
        """Re(pi / (2 z))."""
        zz = self.z(theta)
        rho, phi = abs(zz), math.atan2(zz.imag, zz.real)
        return math.pi * math.cos(phi) / (2 * rho)


def tail_bound(a: float, M: int) -> float:
    """sum_{m>M} e^{-ma} / (m (1 - e^{-ma})^2) <= e^{-(M+1)a} / ((M+1) (1 - e^{-a})^3)."""
    return math.exp(-(M + 1) * a) / ((M + 1) * (-math.expm1(-a)) ** 3)


def truncation_for(a: float, tol: float) -> int:
    M = 1
    while tail_bound(a, M) > tol:
        M *= 2
    lo, hi = M // 2, M
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_bound(a, mid) <= tol:
            hi = mid
        else:
            lo = mid + 1
    return max(hi, 1)


def log_f(z: complex, M: int | None = None, tol: float = 1e-15):
    """(log f(e^{-z}), tail) with log f(e^{-z}) = sum_m e^{-mz} / (m (1 - e^{-mz})^2).

    If ``M`` is None the smallest truncation with tail bound <= ``tol`` is used.
    """
    z = complex(z)
    a = z.real
    if a <= 0:
        raise ContourDomainError("log f(e^{-z}) needs Re z > 0")
    if M is None:
        M = truncation_for(a, tol)
    m = np.arange(1, M + 1, dtype=float)
    q = np.exp(-m * z)
    val = complex(np.sum(q / (m * (1 - q) ** 2)))
    return val, tail_bound(a, M)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    imag_residue: float
    status: str  # ok | inconclusive


def _check_budget(n: int):
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > ORACLE_BUDGET:
        raise BudgetError(f"contour oracle is limited to n <= {ORACLE_BUDGET}, got {n}")


def _integrand(params: ContourParams, shift: float, M: int):
    n = params.n

    def f(theta):
        z = params.z(theta)
        lf, _ = log_f(z, M)
        return np.exp(lf + n * z - shift)

    return f


def _integrate(params: ContourParams, pieces, shift: float) -> QuadResult:
    M = truncation_for(1.0 / params.N, 1e-17)
    f = _integrand(params, shift, M)
    re_total = im_total = err_total = 0.0
    ok = True
    for a, b in pieces:
        for part, acc in ((lambda t: f(t).real, "re"), (lambda t: f(t).imag, "im")):
            val, err, info = _quad(part, a, b, params.tol)[:3]
            if info:
                ok = False
            err_total += err
            if acc == "re":
                re_total += val
            else:
                im_total += val
    scale = math.exp(shift) / (2 * math.pi)
    status = "ok" if ok else "inconclusive"
    return QuadResult(value=re_total * scale, error=err_total * scale, imag_residue=im_total * scale, status=status)


def _quad(func, a, b, tol):
    # returns (value, abserr, nonzero-if-warned)
    val, err, infodict, *rest = integrate.quad(func, a, b, epsabs=tol, epsrel=tol, limit=800, full_output=1)
    warned = 1 if rest else 0
    return val, err, warned


def _shift(params: ContourParams) -> float:
    return 3 * A_FLOAT * params.N**2


def major_integral(n: int, tol: float = 1e-9) -> QuadResult:
    """J(n) = (1/2pi) int_{|theta|<1/N_n} f(e^{-z}) e^{nz} dtheta, z = 1/N_n - i theta."""
    _check_budget(n)
    p = ContourParams(n=n, N=n_n_float(n), tol=tol)
    s = p.split
    return _integrate(p, [(-s, 0.0), (0.0, s)], _shift(p))


def _minor_pieces(p: ContourParams):
    # panels roughly one oscillation of e^{i n theta} wide keep quad's subdivision cheap
    s = p.split
    k = max(8, int(p.n * (math.pi - s) / math.pi) + 1)
    edges = np.linspace(s, math.pi, k + 1)
    right = [(float(a), float(b)) for a, b in zip(edges[:-1], edges[1:])]
    left = [(-b, -a) for a, b in reversed(right)]
    return left + right


def minor_integral(n: int, tol: float = 1e-9) -> QuadResult:
    """E^min(n): the same integral over 1/N_n < |theta| <= pi."""
    _check_budget(n)
    p = ContourParams(n=n, N=n_n_float(n), tol=tol)
    return _integrate(p, _minor_pieces(p), _shift(p))


def minor_arc_bound(n: int) -> float:
    """exp((3A - 2/5) N_n^2)."""
    N = n_n_float(n)
    return math.exp((3 * A_FLOAT - 0.4) * N * N)


def minor_modulus_check(n: int, samples: int = 400):
    """(max log|f(x)| over sampled minor-arc theta, A N^2 + 0.33 N - 0.5, log f(|x|))."""
    _check_budget(n)
    N = n_n_float(n)
    thetas = np.linspace(1.0 / N, math.pi, samples)
    worst = max(log_f(1.0 / N - 1j * t)[0].real for t in thetas)
    radial = log_f(1.0 / N)[0].real
    return worst, A_FLOAT * N * N + 0.33 * N - 0.5, radial


@dataclass(frozen=True)
class OracleReport:
    n: int
    J: QuadResult
    E_min: QuadResult
    exact: int
    residual: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.J.status == "ok" and self.E_min.status == "ok"


def decomposition(n: int, exact: int, tol: float = 1e-9) -> OracleReport:
    J = major_integral(n, tol)
    E = minor_integral(n, tol)
    residual = abs(J.value + E.value - exact) / exact
    return OracleReport(n=n, J=J, E_min=E, exact=exact, residual=residual, bound=minor_arc_bound(n))
