"""Exact plane partition numbers PL(n).

PL(n) is computed from the divisor-square recurrence

    n * PL(n) = sum_{k=1}^{n} sigma_2(k) * PL(n - k),

which follows from x f'(x)/f(x) = sum_k sigma_2(k) x^k for the MacMahon
product f(x) = prod_{m>=1} (1 - x^m)^(-m).  Values are held in an
append-only :class:`PlCache`, optionally persisted as a text file.
"""

from __future__ import annotations

import contextlib
import logging
import os
import sys
import threading
from dataclasses import dataclass, field
from pathlib import Path

from . import kernels

log = logging.getLogger(__name__)

CACHE_HEADER = "PLCACHE v1"

# sigma_2(k) < 2*zeta(2)*k^2 stays below 2**63 for k below this bound
SIGMA2_INT64_LIMIT = 2_000_000_000


class CacheFormatError(ValueError):
    """Raised when a cache file does not follow the ``PLCACHE v1`` layout."""

    def __init__(self, path, lineno, reason):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}: line {lineno}: {reason}")


@dataclass(frozen=True)
class Sigma2Table:
    """sigma_2(k) for 1 <= k <= limit; ``values[0]`` is a zero placeholder."""

    limit: int
    values: tuple

    def __getitem__(self, k):
        if not 1 <= k <= self.limit:
            raise IndexError(f"sigma_2 index {k} outside 1..{self.limit}")
        return self.values[k]


def build_sigma2(limit: int) -> Sigma2Table:
    """Divisor sieve for sigma_2 up to ``limit`` (O(limit log limit) additions)."""
    if limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    if limit > SIGMA2_INT64_LIMIT:
        raise ValueError(f"limit {limit} exceeds the 64-bit sieve range")
    return Sigma2Table(limit, tuple(kernels.sigma2_sieve(limit)))


@dataclass
class PlCache:
    """Append-only table of exact PL(0..limit)."""

    values: list = field(default_factory=lambda: [1])
    source_path: Path | None = None

    def __post_init__(self):
        self._lock = threading.Lock()
        self._sigma: Sigma2Table | None = None

    @property
    def limit(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.values[n]
        if not 0 <= n <= self.limit:
            raise IndexError(f"PL({n}) not cached (limit {self.limit})")
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, PlCache):
            return NotImplemented
        return self.values == other.values

    def require(self, n: int) -> "PlCache":
        """Extend so PL(n) is available and return self."""
        if n > self.limit:
            extend_cache(self, n)
        return self

    def sigma(self, limit: int) -> Sigma2Table:
        if self._sigma is None or self._sigma.limit < limit:
            # grow geometrically so repeated small extensions don't re-sieve
            size = max(limit, 2 * (self._sigma.limit if self._sigma else 0), 64)
            self._sigma = build_sigma2(size)
        return self._sigma


def extend_cache(cache: PlCache, new_limit: int, chunk: int | None = None) -> PlCache:
    """Extend ``cache`` in place so that PL(0..new_limit) are exact.

    Existing entries are never modified.  With a ``source_path`` set, the
    cache is saved after each chunk so an interrupted run keeps its progress.
    """
    if new_limit < cache.limit:
        raise ValueError(f"new_limit {new_limit} below cache limit {cache.limit}")
    with cache._lock:
        if new_limit == cache.limit:
            return cache
        sigma = cache.sigma(new_limit).values
        if chunk is None:
            chunk = new_limit if cache.source_path is None else max(2000, new_limit // 8)
        try:
            while cache.limit < new_limit:
                target = min(new_limit, cache.limit + chunk)
                cache.values.extend(kernels.pl_extend(cache.values, sigma, target))
                if cache.source_path is not None and target < new_limit:
                    save_cache(cache, cache.source_path)
        except MemoryError:
            raise MemoryError(f"out of memory extending PL cache; kept PL(0..{cache.limit})")
        finally:
            if cache.source_path is not None:
                save_cache(cache, cache.source_path)
    log.debug("PL cache extended to %d (%s)", cache.limit, kernels.BACKEND)
    return cache


def pl_values(limit: int) -> list:
    """Convenience: exact PL(0..limit) as a list."""
    return extend_cache(PlCache(), limit).values


@contextlib.contextmanager
def _unlimited_int_digits():
    # large PL(n) exceed CPython's default int<->str digit cap
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def save_cache(cache: PlCache, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with _unlimited_int_digits(), open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(CACHE_HEADER)
        for n, v in enumerate(cache.values):
            fh.write(f"\n{n}\t{v}")
    os.replace(tmp, path)


def load_cache(path) -> PlCache:
    path = Path(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        # locate the offending line for the message
        lineno = raw[: exc.start].count(b"\n") + 1
        raise CacheFormatError(path, lineno, "non-ASCII content") from None
    lines = text.split("\n")
    if lines[0] != CACHE_HEADER:
        raise CacheFormatError(path, 1, f"expected header {CACHE_HEADER!r}, got {lines[0][:40]!r}")
    with _unlimited_int_digits():
        values = _parse_entries(path, lines)
    if not values:
        raise CacheFormatError(path, 1, "no entries")
    if values[0] != 1:
        raise CacheFormatError(path, 2, "PL(0) must be 1")
    return PlCache(values=values, source_path=path)


def _parse_entries(path, lines):
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2:
            raise CacheFormatError(path, lineno, "expected '<n>\\t<PL(n)>'")
        idx, digits = parts
        if not idx.isdigit() or int(idx) != len(values):
            raise CacheFormatError(path, lineno, f"expected index {len(values)}, got {idx!r}")
        if not digits.isdigit():
            raise CacheFormatError(path, lineno, "PL(n) is not a decimal integer")
        values.append(int(digits))
    return values


def open_cache(path=None) -> PlCache:
    """Load ``path`` if it exists, else start an empty cache bound to it."""
    if path is None:
        return PlCache()
    path = Path(path)
    if path.exists():
        return load_cache(path)
    return PlCache(source_path=path)
