"""Time the compiled GMP kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py --limit 5000 --repeat 3

Both backends must produce identical PL(0..limit); the script exits 1 if
they do not.
"""

import argparse
import sys
import time

from planepart import kernels


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(limit, repeat):
    rows = []
    reference = None
    for mod in kernels.available_backends():
        t_sigma, sigma = _best(lambda: mod.sigma2_sieve(limit), repeat)
        t_pl, tail = _best(lambda: mod.pl_extend([1], sigma, limit), repeat)
        values = [1] + list(tail)
        if reference is None:
            reference = values
        rows.append((mod.BACKEND, t_sigma, t_pl, values == reference))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--limit", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    rows = run(args.limit, args.repeat)
    base = rows[-1][2]
    print(f"PL(0..{args.limit}), best of {args.repeat}")
    print(f"{'backend':<10}{'sigma2 [s]':>12}{'PL [s]':>12}{'speedup':>10}  agrees")
    for name, ts, tp, same in rows:
        print(f"{name:<10}{ts:>12.4f}{tp:>12.4f}{base / tp:>10.1f}  {same}")
    if len(rows) == 1:
        print("compiled extension not available; only the fallback was timed")
    return 0 if all(r[3] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
