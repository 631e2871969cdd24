"""Compiled Monsky-matrix ranks for whole sieve segments."""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["monsky_r2_batch", "monsky_r2_segment"]


@njit(cache=True)
def _jacobi(a, n):
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@njit(cache=True)
def _bit(a, p):
    return 1 if _jacobi(a, p) == -1 else 0


@njit(cache=True)
def _rank_rows(rows, n):
    basis = np.zeros(64, dtype=np.int64)
    rank = 0
    for i in range(n):
        v = rows[i]
        for b in range(63, -1, -1):
            if not (v >> b) & 1:
                continue
            if basis[b] == 0:
                basis[b] = v
                rank += 1
                break
            v ^= basis[b]
    return rank


@njit(cache=True)
def monsky_r2_batch(fac, cnt, out):
    """out[i] = 2t - rank(M) for the odd d whose primes are fac[i, :cnt[i]]."""
    rows = np.zeros(64, dtype=np.int64)
    for i in range(fac.shape[0]):
        t = cnt[i]
        if t == 0:
            out[i] = 0
            continue
        for k in range(2 * t):
            rows[k] = 0
        for a in range(t):
            p = fac[i, a]
            diag = 0
            for b in range(t):
                if a != b:
                    s = _bit(fac[i, b], p)
                    if s:
                        # row a of A: block (0,0); row t+a: block (1,1)
                        rows[a] |= 1 << b
                        rows[t + a] |= 1 << (t + b)
                        diag ^= 1
            d2 = _bit(2, p)
            dm2 = _bit(p - 2, p)  # (-2/p)
            top = diag ^ d2
            bot = diag ^ dm2
            if top:
                rows[a] |= 1 << a
            if d2:
                rows[a] |= 1 << (t + a)
                rows[t + a] |= 1 << a
            if bot:
                rows[t + a] |= 1 << (t + a)
        out[i] = 2 * t - _rank_rows(rows, 2 * t)


def monsky_r2_segment(values, fac, cnt) -> np.ndarray:
    """r2 for the odd entries of a sieve segment; returns (odd values, r2)."""
    mask = (values % 2) == 1
    vals = values[mask]
    f = np.ascontiguousarray(fac[mask])
    c = np.ascontiguousarray(cnt[mask])
    out = np.zeros(len(vals), dtype=np.int64)
    monsky_r2_batch(f, c, out)
    return vals, out
