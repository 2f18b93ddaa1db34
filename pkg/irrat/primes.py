"""Incremental segmented sieve backing ``nthprime``.

The table grows on demand one segment at a time and keeps every prime found so far
in a compact ``array``. A lock serialises growth so concurrent evaluations see the
same table; lookups of already-sieved indices never block on each other for long.
"""

from __future__ import annotations

import logging
import math
import threading
from array import array
from functools import lru_cache

from irrat.config import DEFAULT_PRIME_INDEX_CEILING
from irrat.errors import PrimeCeilingExceeded

logger = logging.getLogger(__name__)

_BOOTSTRAP_LIMIT = 1 << 16
_MAX_SEGMENT = 1 << 22


def _simple_sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit, p)))
    return [i for i, is_prime in enumerate(flags) if is_prime]


class PrimeTable:
    """The primes p₁ = 2, p₂ = 3, ... up to a configured index ceiling."""

    def __init__(self, ceiling: int = DEFAULT_PRIME_INDEX_CEILING) -> None:
        self.ceiling = ceiling
        self._lock = threading.Lock()
        self._primes = array("Q", _simple_sieve(_BOOTSTRAP_LIMIT))
        self._sieved_to = _BOOTSTRAP_LIMIT

    def __len__(self) -> int:
        return len(self._primes)

    def nth(self, index: int) -> int:
        """Return p_index (1-based)."""
        if index < 1:
            raise ValueError(f"prime index must be >= 1, got {index}")
        if index > self.ceiling:
            raise PrimeCeilingExceeded(index=index, ceiling=self.ceiling)
        if index > len(self._primes):
            with self._lock:
                while index > len(self._primes):
                    self._extend()
        return self._primes[index - 1]

    def _extend(self) -> None:
        lo = self._sieved_to
        hi = lo + min(max(lo, _BOOTSTRAP_LIMIT), _MAX_SEGMENT)
        segment = bytearray([1]) * (hi - lo)
        root = math.isqrt(hi - 1)
        for p in self._primes:
            if p > root:
                break
            start = max(p * p, -(-lo // p) * p)
            segment[start - lo :: p] = bytes(len(range(start, hi, p)))
        self._primes.extend(lo + i for i, flag in enumerate(segment) if flag)
        self._sieved_to = hi
        logger.debug("Sieved to %d (%d primes)", hi, len(self._primes))


@lru_cache(maxsize=8)
def shared_table(ceiling: int = DEFAULT_PRIME_INDEX_CEILING) -> PrimeTable:
    """Process-wide table for a given ceiling, so the sieve is only paid for once."""
    return PrimeTable(ceiling)
