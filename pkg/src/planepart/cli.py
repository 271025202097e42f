"""Command-line entry point: ``planepart <command> ...``.

Exit status is 0 only when the command succeeded and, for ``certify`` and
``oracle``, when the claim was certified or the check passed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass

import mpmath

from . import asymptotic, contour, inequalities
from .ball import BallReal
from .constants import constant_set
from .sequence import CacheFormatError, open_cache, save_cache

log = logging.getLogger("planepart")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass
class CliConfig:
    precision: int = 192
    cache_path: str | None = None
    output_format: str = "text"
    r: int = 2

    def validate(self):
        if self.precision < 32:
            raise ValueError("--precision must be at least 32 bits")
        if self.r < 1:
            raise ValueError("--r must be at least 1")


def _sci(x, digits=4) -> str:
    if isinstance(x, BallReal):
        x = x.midpoint
    return mpmath.nstr(mpmath.mpf(x), digits, min_fixed=1, max_fixed=0)


def truncated(x, digits) -> str:
    """Leading ``digits`` significant digits, truncated toward zero ("5.92..." style)."""
    if isinstance(x, BallReal):
        x = x.midpoint
    with mpmath.workprec(256):
        x = mpmath.mpf(x)
        if x == 0:
            return "0"
        e = int(mpmath.floor(mpmath.log10(abs(x))))
        m = abs(x) / mpmath.mpf(10) ** e
        if m >= 10:  # log10 rounding at an exact power of ten
            m, e = m / 10, e + 1
        k = int(mpmath.floor(m * 10 ** (digits - 1)))
    sign = "-" if x < 0 else ""
    body = str(k)
    return f"{sign}{body[0]}.{body[1:]}e{e}" if digits > 1 else f"{sign}{body}e{e}"


def _emit(cfg: CliConfig, text_lines, record: dict | None = None):
    if cfg.output_format == "records" and record is not None:
        print(" ".join(f"{k}={v}" for k, v in record.items()))
    else:
        for line in text_lines:
            print(line)


def _parse_range(spec: str):
    if ":" in spec:
        a, b = spec.split(":", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(spec)
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range {spec!r}")
    return lo, hi


# -- commands --------------------------------------------------------------


def cmd_exact(cfg, args, cache):
    lo, hi = _parse_range(args.n)
    cache.require(hi)
    for n in range(lo, hi + 1):
        if cfg.output_format == "records":
            print(f"n={n} PL={cache[n]}")
        else:
            print(f"{n}\t{cache[n]}")
    return EXIT_OK


def cmd_estimate(cfg, args, cache):
    n, r = args.n, cfg.r
    ks = constant_set(r, cfg.precision)
    floor = ks.validity_floor
    if n < floor:
        print(f"error: n={n} is below the validity floor max(n_r, ell_r, 87) = {floor} for r={r}", file=sys.stderr)
        return EXIT_USAGE
    enc = asymptotic.estimate(n, r, ks)
    lines = [
        f"n = {n}",
        f"r = {r}",
        f"main = {_sci(enc.main, 12)}",
        f"major_radius = {_sci(enc.major_radius, 6)}",
        f"minor_radius = {_sci(enc.minor_radius, 6)}",
        f"lower = {_sci(enc.lower(), 12)}",
        f"upper = {_sci(enc.upper(), 12)}",
    ]
    rec = {"n": n, "r": r, "main": _sci(enc.main, 12), "major": _sci(enc.major_radius, 6),
           "minor": _sci(enc.minor_radius, 6), "lower": _sci(enc.lower(), 12), "upper": _sci(enc.upper(), 12)}
    if args.ledger:
        for name in ("X_r", "Y_r", "Z_r"):
            v = getattr(enc.ledger, name)
            lines.append(f"{name} = {_sci(v, 6)}")
            rec[name] = _sci(v, 6)
    if r in asymptotic.CLOSED_FORM_FLOOR and n >= asymptotic.CLOSED_FORM_FLOOR[r]:
        cf = asymptotic.closed_form(n, r, ks)
        env = "527 n^(-5/3) e^(3AN^2) n^(-25/36)" if r == 1 else "227 e^(3AN^2) n^(-109/36) + e^((3A-2/5)N^2)"
        lines += [
            f"closed_form = {_sci(cf.main, 12)}",
            f"closed_form_envelope = {_sci(cf.envelope, 6)}  [{env}]",
            f"closed_form_lower = {_sci(cf.lower(), 12)}",
            f"closed_form_upper = {_sci(cf.upper(), 12)}",
        ]
        rec.update(closed_form=_sci(cf.main, 12), envelope=_sci(cf.envelope, 6))
    if args.check:
        cache.require(n)
        inside = enc.contains(cache[n])
        lines.append(f"exact_inside = {'yes' if inside else 'no'}")
        rec["exact_inside"] = "yes" if inside else "no"
        _emit(cfg, lines, rec)
        return EXIT_OK if inside else EXIT_FAIL
    _emit(cfg, lines, rec)
    return EXIT_OK


TABLE1_N = (100, 200, 500)
TABLE2_N = (100, 200, 500, 1000)


def table1_rows(cache, precision=192):
    """(n, PL(n), E(n), 527 n^{-5/3}) for the r = 1 table."""
    ks = constant_set(1, precision)
    cache.require(max(TABLE1_N))
    rows = []
    for n in TABLE1_N:
        e = asymptotic.normalized_error(n, cache[n], ks)
        rows.append((n, cache[n], e, 527 * mpmath.power(n, mpmath.mpf(-5) / 3)))
    return rows


def table2_rows(cache, precision=192):
    ks = constant_set(2, precision)
    cache.require(max(TABLE2_N))
    rows = []
    for n in TABLE2_N:
        cf = asymptotic.closed_form(n, 2, ks)
        rows.append((n, cf.lower(), cache[n], cf.upper()))
    return rows


def cmd_tables(cfg, args, cache):
    # digits are truncated, not rounded ("5.92..." style)
    if args.which == 1:
        if cfg.output_format != "records":
            print("n\tPL(n)\tE(n)\t527*n^(-5/3)")
        for n, pl, e, bound in table1_rows(cache, cfg.precision):
            cols = [truncated(pl, 3), truncated(e, 3), truncated(bound, 3)]
            _emit(cfg, ["\t".join([str(n), *cols])], {"n": n, "PL": cols[0], "E": cols[1], "bound": cols[2]})
    else:
        if cfg.output_format != "records":
            print("n\tlower\tPL(n)\tupper")
        for n, lo, pl, hi in table2_rows(cache, cfg.precision):
            cols = [truncated(lo, 4), truncated(pl, 4), truncated(hi, 4)]
            _emit(cfg, ["\t".join([str(n), *cols])], {"n": n, "lower": cols[0], "PL": cols[1], "upper": cols[2]})
    return EXIT_OK


def cmd_certify(cfg, args, cache):
    if args.claim == "logconcave":
        r = cfg.r if cfg.r in asymptotic.CLOSED_FORM_FLOOR else 2
        ks = constant_set(r, cfg.precision)
        report = inequalities.certify_logconcavity(r, cache, n_from=args.n_from if args.n_from is not None else 12,
                                                   exact_upto=args.n_to, ks=ks)
    else:
        if args.d is None:
            print("error: certify turan needs --d", file=sys.stderr)
            return EXIT_USAGE
        lo = args.n_from if args.n_from is not None else 1
        hi = args.n_to if args.n_to is not None else 10**4
        cache.require(hi + args.shift + args.d)
        report = inequalities.turan_check_range(args.d, lo, hi, cache, shift=args.shift, strict=args.strict)
    if cfg.output_format == "records":
        print(report.to_records())
    else:
        print(report.to_text(per_n=not args.summary))
    return EXIT_OK if report.status == inequalities.CERTIFIED else EXIT_FAIL


def cmd_jensen(cfg, args, cache):
    cache.require(args.n + args.d)
    p = inequalities.jensen_poly(args.d, args.n, cache)
    hyp = inequalities.is_hyperbolic(p)
    coeffs = ",".join(str(c) for c in p.coeffs)
    _emit(cfg, [f"d = {args.d}", f"shift = {args.n}", f"coeffs = {coeffs}", f"hyperbolic = {'yes' if hyp else 'no'}"],
          {"d": args.d, "shift": args.n, "coeffs": coeffs, "hyperbolic": "yes" if hyp else "no"})
    return EXIT_OK


def cmd_hermite(cfg, args, cache):
    h = inequalities.hermite(args.d)
    hc = ",".join(str(c) for c in h.coeffs)
    if not args.n:
        _emit(cfg, [f"H_{args.d} = {hc}"], {"d": args.d, "coeffs": hc})
        return EXIT_OK
    cache.require(max(args.n) + args.d + 2)
    for n in args.n:
        rd = inequalities.hermite_renormalize(args.d, n, cache)
        rc = ",".join(f"{c:.6g}" for c in rd.renormalized_coeffs)
        _emit(cfg, [f"{n}\tA={rd.A_n:.8g}\tdelta={rd.delta_n:.8g}\tdistance={rd.hermite_distance:.6g}\tcoeffs={rc}"],
              {"d": args.d, "n": n, "A": f"{rd.A_n:.8g}", "delta": f"{rd.delta_n:.8g}",
               "distance": f"{rd.hermite_distance:.6g}", "coeffs": rc})
    return EXIT_OK


def cmd_oracle(cfg, args, cache):
    n = args.n
    if n > contour.ORACLE_BUDGET:
        print(f"error: oracle is limited to n <= {contour.ORACLE_BUDGET}", file=sys.stderr)
        return EXIT_USAGE
    cache.require(n)
    rep = contour.decomposition(n, cache[n], args.tol)
    within = n < 87 or abs(rep.E_min.value) <= rep.bound
    lines = [
        f"n = {n}",
        f"J = {rep.J.value:.12e}",
        f"E_min = {rep.E_min.value:.12e}",
        f"PL = {rep.exact}",
        f"residual = {rep.residual:.3e}",
        f"minor_bound = {rep.bound:.6e}",
        f"status = {'ok' if rep.ok else 'inconclusive'}",
    ]
    _emit(cfg, lines, {"n": n, "J": f"{rep.J.value:.12e}", "E_min": f"{rep.E_min.value:.12e}",
                       "residual": f"{rep.residual:.3e}", "bound": f"{rep.bound:.6e}",
                       "status": "ok" if rep.ok else "inconclusive"})
    good = rep.ok and rep.residual <= 1e-6 and within
    return EXIT_OK if good else EXIT_FAIL


def cmd_constants(cfg, args, cache):
    ks = constant_set(cfg.r, cfg.precision, fallback=args.fallback)
    text = ks.report(args.digits)
    if cfg.output_format == "records":
        print(" ".join(line.replace(" = ", "=").replace(" ± ", "+-") for line in text.splitlines()))
    else:
        print(text)
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def _globals(p, suppress):
    d = argparse.SUPPRESS
    p.add_argument("--precision", type=int, default=d if suppress else 192, help="working precision in bits (default 192)")
    p.add_argument("--cache", dest="cache_path", default=d if suppress else None, help="PL cache file (created if missing)")
    p.add_argument("--format", dest="output_format", choices=("text", "records"), default=d if suppress else "text")
    p.add_argument("--r", type=int, default=d if suppress else 2, help="truncation order (default 2)")
    p.add_argument("-v", "--verbose", action="store_true", default=d if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planepart", description="Plane partitions: exact values, certified asymptotics, inequality certification.")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="print PL(n) for n or a range a:b")
    p.add_argument("n")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("estimate", help="certified enclosure of PL(n)")
    p.add_argument("n", type=int)
    p.add_argument("--ledger", action="store_true", help="show the X_r, Y_r, Z_r components")
    p.add_argument("--check", action="store_true", help="also test the exact value against the enclosure")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("tables", help="reproduce the r=1 (1) or r=2 (2) numerics table")
    p.add_argument("which", type=int, choices=(1, 2))
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("certify", help="certify log-concavity or a Turan range")
    p.add_argument("claim", choices=("logconcave", "turan"))
    p.add_argument("--d", type=int, help="Jensen degree for turan")
    p.add_argument("--from", dest="n_from", type=int)
    p.add_argument("--to", dest="n_to", type=int, help="turan: last n; logconcave: exact phase upper limit")
    p.add_argument("--shift", type=int, default=-1, help="turan: J^{d,n+shift} (default -1)")
    p.add_argument("--strict", action="store_true", help="turan: any failure in the range refutes")
    p.add_argument("--summary", action="store_true", help="omit per-n records")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("jensen", help="Jensen polynomial J^{d,n} and its hyperbolicity")
    p.add_argument("n", type=int)
    p.add_argument("--d", type=int, default=3)
    p.set_defaults(func=cmd_jensen)

    p = sub.add_parser("hermite", help="H_d, or renormalized Jensen data at the given n")
    p.add_argument("n", type=int, nargs="*")
    p.add_argument("--d", type=int, default=3)
    p.set_defaults(func=cmd_hermite)

    p = sub.add_parser("oracle", help="numerical circle-method decomposition check (n <= 200)")
    p.add_argument("n", type=int)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("constants", help="dump the constant set")
    p.add_argument("--digits", type=int, default=20)
    p.add_argument("--fallback", action="store_true", help="use the rounded bounds C_2 <= 2.0007, D_2 <= 5.3 instead of computing them")
    p.set_defaults(func=cmd_constants)

    for sp in sub.choices.values():
        _globals(sp, suppress=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig(precision=args.precision, cache_path=args.cache_path, output_format=args.output_format, r=args.r)
    try:
        cfg.validate()
    except ValueError as exc:
        parser.error(str(exc))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cache = open_cache(cfg.cache_path)
    except CacheFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(cfg, args, cache)
    except (ValueError, asymptotic.DomainError, inequalities.CacheRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MemoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        if cache.source_path is not None and cache.limit > 0:
            save_cache(cache, cache.source_path)


if __name__ == "__main__":
    sys.exit(main())
