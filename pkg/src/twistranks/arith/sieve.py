"""Segmented sieve for squarefree integers with their factorizations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = [
    "SquarefreeInt",
    "NotSquarefreeError",
    "primes_up_to",
    "factor_small",
    "sieve_segment",
    "squarefree_sieve",
    "count_squarefree",
]

MAX_FACTORS = 15
DEFAULT_SEGMENT = 1 << 18


class NotSquarefreeError(ValueError):
    pass


@dataclass(frozen=True)
class SquarefreeInt:
    d: int
    primes: tuple  # sorted distinct primes dividing |d|

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("d must be nonzero")
        if math.prod(self.primes) != abs(self.d):
            raise ValueError(f"factorization {self.primes} does not multiply to {self.d}")
        if list(self.primes) != sorted(set(self.primes)):
            raise NotSquarefreeError(f"{self.d} has a repeated or unsorted factor list")

    @property
    def factors(self) -> tuple:
        return tuple((p, 1) for p in self.primes)

    @property
    def sign(self) -> int:
        return 1 if self.d > 0 else -1

    @classmethod
    def of(cls, d: int) -> "SquarefreeInt":
        primes = factor_small(abs(d))
        if len(set(primes)) != len(primes):
            raise NotSquarefreeError(f"{d} is not squarefree")
        return cls(d, tuple(primes))

    def __int__(self):
        return self.d


def factor_small(n: int) -> list:
    """Prime factors of n with multiplicity, by trial division."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for p in (2, 3):
        while n % p == 0:
            out.append(p)
            n //= p
    f = 5
    while f * f <= n:
        for q in (f, f + 2):
            while n % q == 0:
                out.append(q)
                n //= q
        f += 6
    if n > 1:
        out.append(n)
    return out


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def sieve_segment(lo: int, hi: int, small_primes: np.ndarray = None):
    """Sieve [lo, hi) for squarefree numbers (lo >= 1).

    Returns (values, factors, counts): the squarefree values in the segment,
    a (k, MAX_FACTORS) array whose row i lists the primes of values[i] in
    increasing order, and the number of primes in each row.
    """
    if lo < 1 or hi <= lo:
        raise ValueError("need 1 <= lo < hi")
    root = math.isqrt(hi - 1)
    if small_primes is None or (len(small_primes) and small_primes[-1] < root):
        small_primes = primes_up_to(root)
    length = hi - lo
    vals = np.arange(lo, hi, dtype=np.int64)
    rem = vals.copy()
    sqfree = np.ones(length, dtype=bool)
    fac = np.zeros((length, MAX_FACTORS), dtype=np.int64)
    cnt = np.zeros(length, dtype=np.int64)
    for p in small_primes:
        p = int(p)
        if p > root:
            break
        first = (-lo) % p
        idx = np.arange(first, length, p)
        sqfree[(-lo) % (p * p)::p * p] = False
        # rows already marked non-squarefree may overflow; skip them
        ok = idx[cnt[idx] < MAX_FACTORS]
        fac[ok, cnt[ok]] = p
        cnt[ok] += 1
        rem[idx] //= p
    big = sqfree & (rem > 1)
    idx = np.flatnonzero(big)
    fac[idx, cnt[idx]] = rem[idx]
    cnt[idx] += 1
    keep = np.flatnonzero(sqfree)
    return vals[keep], fac[keep], cnt[keep]


def _parse_filter(filter: str):
    parts = {p.strip() for p in filter.replace("+", ",").split(",") if p.strip()}
    unknown = parts - {"all", "odd", "positive", "both-signs"}
    if unknown:
        raise ValueError(f"unknown sieve filter(s): {sorted(unknown)}")
    return "odd" in parts, "both-signs" in parts


def squarefree_sieve(H: int, filter: str = "positive",
                     segment: int = DEFAULT_SEGMENT) -> Iterator[SquarefreeInt]:
    """Every squarefree d with |d| <= H passing ``filter``, with factors.

    ``filter`` is a comma-separated combination of "all" (default),
    "odd", "positive" (default) and "both-signs".  Output is ordered by
    |d|, with -d just before d when both signs are requested.
    """
    if H < 1:
        raise ValueError("H must be at least 1")
    odd, both = _parse_filter(filter)
    small = primes_up_to(math.isqrt(H))
    for lo in range(1, H + 1, segment):
        hi = min(H + 1, lo + segment)
        vals, fac, cnt = sieve_segment(lo, hi, small)
        for v, row, c in zip(vals.tolist(), fac.tolist(), cnt.tolist()):
            if odd and v % 2 == 0:
                continue
            primes = tuple(row[:c])
            if both:
                yield SquarefreeInt(-v, primes)
            yield SquarefreeInt(v, primes)


def count_squarefree(H: int, odd: bool = False, segment: int = DEFAULT_SEGMENT) -> int:
    small = primes_up_to(math.isqrt(H))
    total = 0
    for lo in range(1, H + 1, segment):
        vals, _, _ = sieve_segment(lo, min(H + 1, lo + segment), small)
        total += int(np.count_nonzero(vals % 2 == 1)) if odd else len(vals)
    return total
