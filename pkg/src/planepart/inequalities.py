"""Log-concavity and Turan certification for PL(n).

Exact checks use Python integers only.  Hyperbolicity is decided by Sturm
sequences over the integers (primitive pseudo-remainders) after a squarefree
decomposition, so no floating point enters any verdict.  The analytic side
uses the certified closed forms from :mod:`planepart.asymptotic`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

import mpmath

from .asymptotic import CLOSED_FORM_FLOOR, closed_form
from .constants import MAX_PRECISION, constant_set
from .sequence import PlCache

log = logging.getLogger(__name__)


class CacheRangeError(IndexError):
    """The PL cache does not reach far enough; ``required`` is the limit needed."""

    def __init__(self, required, have):
        self.required = required
        self.have = have
        super().__init__(f"need PL up to {required}, cache has {have}")


def _need(cache: PlCache, limit: int):
    if limit > cache.limit:
        raise CacheRangeError(limit, cache.limit)


# -- integer polynomials ---------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """sum_j coeffs[j] X^j with integer (or rational) coefficients, trailing zeros stripped."""

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"


def _strip(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _deriv(c):
    return _strip([k * c[k] for k in range(1, len(c))] or [0])


def _primitive(c):
    """Divide by the positive content (keeps signs)."""
    g = 0
    for x in c:
        g = gcd(g, x)
    if g in (0, 1):
        return c
    return [x // g for x in c]


def _to_integer(c):
    den = 1
    for x in c:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    return [int(x * den) for x in c]


def _prem(a, b):
    """Primitive part of |lc(b)|^e a mod b over the integers.

    Each step is r <- |lc(b)| r - sign(lc(b)) lc(r) X^s b, so the result is a
    positive multiple of the true remainder and Sturm signs are preserved.
    """
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    sgn = 1 if lc > 0 else -1
    lc_abs = abs(lc)
    while len(r) - 1 >= db and not (len(r) == 1 and r[0] == 0):
        shift = len(r) - 1 - db
        lead = r[-1]
        r = [lc_abs * x for x in r]
        for i, bi in enumerate(b):
            r[i + shift] -= sgn * lead * bi
        r = _strip(r[:-1]) if len(r) > 1 else [0]
    return _primitive(_strip(r))


def sturm_sequence(coeffs) -> list:
    """Primitive integer Sturm chain p0 = p, p1 = p', p_{k+1} = -prem(p_{k-1}, p_k)."""
    p0 = _primitive(_strip(_to_integer(coeffs)))
    p1 = _primitive(_deriv(p0))
    chain = [p0, p1]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        if len(chain[-1]) == 1:
            break
        r = _prem(chain[-2], chain[-1])
        if len(r) == 1 and r[0] == 0:
            break
        chain.append([-x for x in r])
    return chain


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(coeffs) -> int:
    """Number of distinct real roots of a nonzero polynomial (Sturm's theorem at +-infinity)."""
    c = _strip(_to_integer(coeffs))
    if len(c) == 1:
        if c[0] == 0:
            raise ValueError("zero polynomial")
        return 0
    chain = sturm_sequence(c)
    at_pos = [1 if p[-1] > 0 else -1 for p in chain]
    at_neg = [(1 if p[-1] > 0 else -1) * (-1 if (len(p) - 1) % 2 else 1) for p in chain]
    return _variations(at_neg) - _variations(at_pos)


def _poly_divmod(a, b):
    """Division over the rationals."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, bi in enumerate(b):
            a[i + shift] -= f * bi
        a = _strip(a[:-1]) if len(a) > 1 else [Fraction(0)]
    return _strip(q), _strip(a)


def _poly_gcd(a, b):
    a, b = _strip([Fraction(x) for x in a]), _strip([Fraction(x) for x in b])
    while not (len(b) == 1 and b[0] == 0):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    lc = a[-1]
    return [x / lc for x in a]


def squarefree_decomposition(coeffs) -> list:
    """Yun's algorithm: list of (factor, multiplicity) with p = c * prod factor^multiplicity."""
    f = _strip([Fraction(x) for x in coeffs])
    if len(f) == 1:
        return []
    fp = _deriv(f)
    a = _poly_gcd(f, fp)
    b, _ = _poly_divmod(f, a)
    c, _ = _poly_divmod(fp, a)
    d = _strip([x - y for x, y in _zip_pad(c, _deriv(b))])
    out = []
    i = 1
    while len(b) > 1:
        a = _poly_gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b, _ = _poly_divmod(b, a)
        c, _ = _poly_divmod(d, a)
        d = _strip([x - y for x, y in _zip_pad(c, _deriv(b))])
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def is_hyperbolic(p) -> bool:
    """True iff every root of ``p`` is real (exact, with multiplicities)."""
    coeffs = p.coeffs if isinstance(p, IntPolynomial) else tuple(p)
    c = _strip(list(coeffs))
    if len(c) == 1:
        if c[0] == 0:
            raise ValueError("the zero polynomial has no hyperbolicity verdict")
        return True
    d = len(c) - 1
    if d == 1:
        return True
    total = 0
    for factor, mult in squarefree_decomposition(c):
        total += mult * count_real_roots(factor)
    return total == d


# -- Jensen / Hermite ------------------------------------------------------


def jensen_poly(d: int, n: int, cache: PlCache) -> IntPolynomial:
    """J^{d,n}(X) = sum_j C(d,j) PL(n+j) X^j."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    if n < 0:
        raise ValueError("shift must be >= 0")
    _need(cache, n + d)
    return IntPolynomial(tuple(comb(d, j) * cache[n + j] for j in range(d + 1)))


def hermite(d: int) -> IntPolynomial:
    """H_d from H_{d+1} = X H_d - 2d H_{d-1}, H_0 = 1, H_1 = X."""
    if d < 0:
        raise ValueError("d must be >= 0")
    prev, cur = [1], [0, 1]
    if d == 0:
        return IntPolynomial((1,))
    for k in range(1, d):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return IntPolynomial(tuple(cur))


@dataclass(frozen=True)
class RenormData:
    """Renormalized Jensen polynomial; the higher-order g_i(n) are deliberately not computed."""

    d: int
    n: int
    A_n: float
    delta_n: float
    renormalized_coeffs: tuple
    hermite_distance: float


def hermite_renormalize(d: int, n: int, cache: PlCache, dps: int = 60) -> RenormData:
    """delta^{-d}/PL(n) J^{d,n}((delta X - 1) e^{-A}) with A, delta from central differences of log PL."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _need(cache, n + d + 2)
    with mpmath.workdps(dps + 10 * d):
        L = {k: mpmath.log(mpmath.mpf(cache[k])) for k in (n - 1, n, n + 1)}
        A = (L[n + 1] - L[n - 1]) / 2
        second = L[n + 1] - 2 * L[n] + L[n - 1]
        delta_sq = -second / 2
        if delta_sq <= 0:
            raise ArithmeticError(f"delta(n)^2 = {mpmath.nstr(delta_sq, 5)} is not positive at n={n}")
        delta = mpmath.sqrt(delta_sq)
        pn = mpmath.mpf(cache[n])
        eA = mpmath.exp(-A)
        out = [mpmath.mpf(0)] * (d + 1)
        for j in range(d + 1):
            w = comb(d, j) * (mpmath.mpf(cache[n + j]) / pn) * eA**j
            # (delta X - 1)^j = sum_k C(j,k) delta^k X^k (-1)^{j-k}
            for k in range(j + 1):
                out[k] += w * comb(j, k) * delta**k * (-1) ** (j - k)
        coeffs = tuple(float(c / delta**d) for c in out)
        h = hermite(d).coeffs
        dist = max(abs(c - (h[k] if k < len(h) else 0)) for k, c in enumerate(coeffs))
        return RenormData(d=d, n=n, A_n=float(A), delta_n=float(delta),
                          renormalized_coeffs=coeffs, hermite_distance=float(dist))


# -- log-concavity ---------------------------------------------------------


def logconcave_exact(n: int, cache: PlCache) -> bool:
    """PL(n)^2 >= PL(n-1) PL(n+1), exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _need(cache, n + 1)
    return cache[n] * cache[n] >= cache[n - 1] * cache[n + 1]


CERTIFIED = "certified"
INCONCLUSIVE = "inconclusive"
REFUTED = "refuted"


def logconcave_margin(n: int, r: int, ks, memo: dict | None = None):
    """Ball of (PL_hat(n) - E(n))^2 - (PL_hat(n-1) + E(n-1)) (PL_hat(n+1) + E(n+1)).

    ``memo`` maps n to closed forms so a forward scan evaluates each n once.
    """
    if memo is None:
        memo = {}
    for k in (n - 1, n, n + 1):
        if k not in memo:
            memo[k] = closed_form(k, r, ks)
    lo, mid, hi = memo[n - 1], memo[n], memo[n + 1]
    a = mid.main - mid.envelope
    return a * a - (lo.main + lo.envelope) * (hi.main + hi.envelope)


def logconcave_analytic(n: int, r: int = 2, ks=None, precision: int | None = None,
                        memo: dict | None = None) -> str:
    """``certified`` iff the analytic lower bound for PL(n)^2 - PL(n-1)PL(n+1) is a positive ball.

    When the ball straddles zero the precision is doubled (up to 4096 bits);
    a ball that is certainly negative is reported inconclusive right away,
    since the analytic bound itself is too weak there.
    """
    if r not in CLOSED_FORM_FLOOR:
        raise ValueError("analytic certification uses the r = 1 or r = 2 closed forms")
    if n - 1 < CLOSED_FORM_FLOOR[r]:
        return INCONCLUSIVE
    if ks is None:
        ks = constant_set(r, precision or 192)
    prec = ks.precision
    while True:
        margin = logconcave_margin(n, r, ks, memo)
        if margin.is_positive():
            return CERTIFIED
        if margin.is_negative() or prec * 2 > MAX_PRECISION:
            return INCONCLUSIVE
        prec *= 2
        ks = constant_set(r, prec)
        memo = None


@dataclass
class CertReport:
    """Outcome of a certification run over [n_min, n_max]."""

    claim: str
    n_min: int
    n_max: int
    analytic_threshold: int | None = None
    failures: list = field(default_factory=list)
    records: list = field(default_factory=list)  # (n, method, verdict)
    status: str = INCONCLUSIVE
    notes: dict = field(default_factory=dict)

    def to_text(self, per_n: bool = True) -> str:
        lines = []
        if per_n:
            for n, method, verdict in self.records:
                lines.append(f"{n}\t{method}\t{verdict}")
        lines.append(f"claim: {self.claim}")
        lines.append(f"range: {self.n_min}..{self.n_max}")
        lines.append(f"threshold: {self.analytic_threshold if self.analytic_threshold is not None else 'none'}")
        lines.append(f"failures: {_fmt_list(self.failures)}")
        for k in sorted(self.notes):
            lines.append(f"{k}: {self.notes[k]}")
        lines.append(f"status: {self.status}")
        return "\n".join(lines)

    def to_records(self) -> str:
        thr = self.analytic_threshold if self.analytic_threshold is not None else "none"
        extra = "".join(f" {k}={self.notes[k]}" for k in sorted(self.notes))
        return (f"claim={self.claim} range={self.n_min}..{self.n_max} threshold={thr} "
                f"failures={_fmt_list(self.failures, sep=',')} status={self.status}{extra}")


def _fmt_list(xs, sep=" "):
    if not xs:
        return "none"
    return sep.join(str(x) for x in xs)


def find_analytic_threshold(r: int = 2, ks=None, hi_start: int = 128, hi_limit: int = 10**7) -> int:
    """Least N0 with the analytic check certified at N0, by doubling then binary search."""
    if ks is None:
        ks = constant_set(r)
    lo = CLOSED_FORM_FLOOR[r] + 1
    hi = max(hi_start, lo)
    while logconcave_analytic(hi, r, ks) != CERTIFIED:
        lo = hi + 1
        hi *= 2
        if hi > hi_limit:
            raise ArithmeticError(f"no analytic certificate below {hi_limit}")
    while lo < hi:
        mid = (lo + hi) // 2
        if logconcave_analytic(mid, r, ks) == CERTIFIED:
            hi = mid
        else:
            lo = mid + 1
    return hi


def certify_logconcavity(r: int = 2, cache: PlCache | None = None, n_from: int = 12,
                         exact_upto: int | None = None, ks=None, extend: bool = True) -> CertReport:
    """Certify PL(n)^2 >= PL(n-1) PL(n+1) for all n >= n_from.

    Analytic phase: the least N0 certified by the closed-form bound, then
    every n in [N0, 2 N0] checked analytically.  Exact phase: every n in
    [n_from, max(N0, exact_upto)] checked with integers.  Beyond 2 N0 the
    analytic bound's relative slack keeps shrinking as n grows.
    """
    if ks is None:
        ks = constant_set(r)
    cache = cache if cache is not None else PlCache()
    n0 = find_analytic_threshold(r, ks)
    top = max(n0, exact_upto or 0)
    if cache.limit < top + 1:
        if not extend:
            raise CacheRangeError(top + 1, cache.limit)
        cache.require(top + 1)
    report = CertReport(claim="logconcave", n_min=n_from, n_max=max(top, 2 * n0), analytic_threshold=n0)
    start = max(n_from, 1)
    exact_verdicts = {}
    for n in range(start, top + 1):
        ok = logconcave_exact(n, cache)
        exact_verdicts[n] = ok
        if not ok:
            report.failures.append(n)
    scan_failures = []
    analytic_verdicts = {}
    memo: dict = {}
    for n in range(n0, 2 * n0 + 1):
        verdict = logconcave_analytic(n, r, ks, memo=memo)
        memo.pop(n - 2, None)
        analytic_verdicts[n] = verdict
        if verdict != CERTIFIED:
            scan_failures.append(n)
    # one method per n: the analytic window wins, exact failures are kept regardless
    for n in range(start, max(top, 2 * n0) + 1):
        if n in analytic_verdicts:
            report.records.append((n, "analytic", analytic_verdicts[n]))
        elif n in exact_verdicts:
            report.records.append((n, "exact", "holds" if exact_verdicts[n] else "fails"))
    report.records.sort()
    if report.failures:
        report.status = REFUTED
    elif scan_failures:
        report.status = INCONCLUSIVE
        report.notes["analytic_gaps"] = ",".join(map(str, scan_failures[:20]))
    else:
        report.status = CERTIFIED
    report.notes["exact_range"] = f"{start}..{top}"
    report.notes["analytic_scan"] = f"{n0}..{2 * n0}"
    return report


def turan_check_range(d: int, n_min: int, n_max: int, cache: PlCache, shift: int = -1,
                      strict: bool = False) -> CertReport:
    """Exact hyperbolicity of J^{d, n+shift} for n in [n_min, n_max].

    The default shift -1 is the convention where the degree-d Turan
    inequality at n means J^{d,n-1} is hyperbolic; shift 0 is the form used
    for the large-n asymptotics.  ``analytic_threshold`` reports the least n*
    from which every checked n holds through n_max.

    The claim is eventual, so the status is ``certified`` when such an n*
    exists (the certified range is [n*, n_max], earlier failures are still
    listed).  With ``strict`` any failure refutes.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if n_min + shift < 0:
        raise ValueError("shifted index below 0")
    _need(cache, n_max + shift + d)
    report = CertReport(claim=f"turan(d={d})", n_min=n_min, n_max=n_max)
    last_fail = None
    for n in range(n_min, n_max + 1):
        ok = is_hyperbolic(jensen_poly(d, n + shift, cache))
        report.records.append((n, "exact", "holds" if ok else "fails"))
        if not ok:
            report.failures.append(n)
            last_fail = n
    n_star = n_min if last_fail is None else last_fail + 1
    report.analytic_threshold = n_star if n_star <= n_max else None
    report.notes["shift"] = shift
    report.notes["holds_from"] = n_star if n_star <= n_max else "none"
    if strict:
        report.status = CERTIFIED if not report.failures else REFUTED
    else:
        report.status = CERTIFIED if n_star <= n_max else REFUTED
    if report.status == CERTIFIED:
        report.notes["certified_range"] = f"{n_min if strict else n_star}..{n_max}"
    return report
