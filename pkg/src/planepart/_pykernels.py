"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""

from operator import mul

BACKEND = "python"


def sigma2_sieve(limit):
    """Return a list ``s`` with ``s[k] = sum of d**2 over d | k`` for 0 <= k <= limit (s[0] = 0)."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    s = [0] * (limit + 1)
    for d in range(1, limit + 1):
        d2 = d * d
        for m in range(d, limit + 1, d):
            s[m] += d2
    return s


def pl_extend(prefix, sigma, new_limit):
    """Extend ``prefix = [PL(0), ..., PL(m-1)]`` through ``new_limit``.

    Same contract as the compiled kernel: returns PL(m), ..., PL(new_limit).
    """
    start = len(prefix)
    if start == 0:
        raise ValueError("prefix must contain PL(0)")
    if new_limit < start:
        return []
    if len(sigma) < new_limit + 1:
        raise ValueError("sigma table shorter than new_limit + 1")
    vals = list(prefix)
    sig = list(sigma[1:new_limit + 1])
    for n in range(start, new_limit + 1):
        # vals[n-1::-1] pairs PL(n-1), PL(n-2), ... with sigma(1), sigma(2), ...
        acc = sum(map(mul, sig[:n], vals[n - 1::-1]))
        q, r = divmod(acc, n)
        if r:
            raise ArithmeticError(f"recurrence sum not divisible by n={n}")
        vals.append(q)
    return vals[start:]
