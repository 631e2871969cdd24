"""Compiled class-group kernel for sweeps over many d.

For each d the reduced forms of the fundamental discriminant are listed by
running over b and the divisors a of (b^2 - D)/4.  Ranks come from torsion
counts: #G[2^k] / #G[2^(k-1)] = 2^(r_{2^k}).  #G[2] is the number of
ambiguous forms; #G[4] and #G[8] come from one squaring pass, done only
when the caller says r_4 may be positive.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .sieve import primes_up_to

__all__ = ["smallest_prime_factors", "class_data", "class_data_batch"]


def smallest_prime_factors(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int32)
    for p in primes_up_to(math.isqrt(n)).tolist():
        block = spf[p * p::p]
        block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _reduce(a, b, c):
    while True:
        if a > c or (a == c and b < 0):
            t = a
            a = c
            c = t
            b = -b
            continue
        if b > a or b <= -a:
            k = (a - b) // (2 * a)
            c = c + b * k + a * k * k
            b = b + 2 * a * k
            continue
        return a, b, c


@njit(cache=True)
def _compose(a1, b1, c1, a2, b2, c2, D):
    beta = (b1 + b2) // 2
    # extended gcd of a1, a2
    r0, r1, x0, x1, y0, y1 = a1, a2, 1, 0, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    e1 = r0
    s0, s1, u0, u1, v0, v1 = e1, beta, 1, 0, 0, 1
    while s1:
        q = s0 // s1
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if s0 < 0:
        s0, u0, v0 = -s0, -u0, -v0
    e = s0
    x = x0 * u0
    y = y0 * u0
    z = v0
    A = a1 * a2 // (e * e)
    B = (x * a1 * b2 + y * a2 * b1 + z * ((b1 * b2 + D) // 2)) // e
    B = B % (2 * A)
    C = (B * B - D) // (4 * A)
    return _reduce(A, B, C)


@njit(cache=True)
def _forms(D, spf, fa, fb, fc, divs):
    """Fill fa/fb/fc with the reduced primitive forms of D; return the count."""
    h = 0
    absd = -D
    bmax = int(math.sqrt(absd / 3.0)) + 1
    b = D & 1
    while b <= bmax:
        N = (b * b - D) // 4
        # divisors of N
        nd = 1
        divs[0] = 1
        m = N
        while m > 1:
            p = spf[m]
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            base = nd
            pk = 1
            for _ in range(k):
                pk *= p
                for i in range(base):
                    divs[nd] = divs[i] * pk
                    nd += 1
        for i in range(nd):
            a = divs[i]
            if a < b or a == 0 or a * a > N:
                continue
            c = N // a
            if _gcd(_gcd(a, b), c) != 1:
                continue
            fa[h] = a
            fb[h] = b
            fc[h] = c
            h += 1
            if b != 0 and b != a and a != c:
                fa[h] = a
                fb[h] = -b
                fc[h] = c
                h += 1
        b += 2
    return h


@njit(cache=True)
def _square(a, b, c, D):
    # composition of (a, b, c) with itself: beta = b, one extended gcd
    r0, r1, x0, x1, y0, y1 = a, b, 1, 0, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 < 0:
        r0, x0, y0 = -r0, -x0, -y0
    e = r0
    A = a * a // (e * e)
    B = (x0 * a * b + y0 * ((b * b + D) // 2)) // e
    B = B % (2 * A)
    C = (B * B - D) // (4 * A)
    return _reduce(A, B, C)


@njit(cache=True)
def _is_ambiguous(a, b, c):
    return b == 0 or a == b or a == c


@njit(cache=True)
def _log2(n):
    k = 0
    while n > 1:
        n >>= 1
        k += 1
    return k


@njit(cache=True)
def class_data_batch(ds, want_r8, spf, out):
    """Fill out[i] = (disc, h, r2, r4, r8) for each positive squarefree ds[i].

    want_r8[i] = 0 means the caller already knows r_4 = 0, so r_8 = 0 and
    r_4 is taken from the ambiguous-form count without squaring.
    """
    cap = 1
    for i in range(len(ds)):
        d = ds[i]
        D = -d if (-d) % 4 == 1 else -4 * d
        bound = int(math.sqrt(-D / 3.0)) + 2
        if bound > cap:
            cap = bound
    size = 64 * cap + 64  # h < 64 * sqrt(|D|/3) for the sizes swept
    fa = np.empty(size, dtype=np.int64)
    fb = np.empty(size, dtype=np.int64)
    fc = np.empty(size, dtype=np.int64)
    sa = np.empty(size, dtype=np.int64)
    sb = np.empty(size, dtype=np.int64)
    divs = np.empty(4096, dtype=np.int64)
    width = 2 * cap + 2
    stamp = np.zeros((cap + 1) * width, dtype=np.int32)
    for i in range(len(ds)):
        d = ds[i]
        D = -d if (-d) % 4 == 1 else -4 * d
        h = _forms(D, spf, fa, fb, fc, divs)
        amb = 0
        for j in range(h):
            if _is_ambiguous(fa[j], fb[j], fc[j]):
                amb += 1
        r2 = _log2(amb)
        r4 = 0
        r8 = 0
        if want_r8[i]:
            # G[4] = forms whose square is ambiguous; G[8] = forms whose
            # square lies in G[4]
            tag = i + 1
            g4 = 0
            for j in range(h):
                a, b, c = _square(fa[j], fb[j], fc[j], D)
                sa[j] = a
                sb[j] = b
                if _is_ambiguous(a, b, c):
                    g4 += 1
                    stamp[fa[j] * width + fb[j] + cap] = tag
            g8 = 0
            for j in range(h):
                if stamp[sa[j] * width + sb[j] + cap] == tag:
                    g8 += 1
            r4 = _log2(g4 // amb)
            r8 = _log2(g8 // g4)
        out[i, 0] = D
        out[i, 1] = h
        out[i, 2] = r2
        out[i, 3] = r4
        out[i, 4] = r8


def class_data(ds, want_r8=None, spf=None) -> np.ndarray:
    """(disc, h, r2, r4, r8) rows for an array of positive squarefree d."""
    ds = np.ascontiguousarray(ds, dtype=np.int64)
    if want_r8 is None:
        want_r8 = np.ones(len(ds), dtype=np.int8)
    want_r8 = np.ascontiguousarray(want_r8, dtype=np.int8)
    if spf is None:
        top = int(ds.max()) if len(ds) else 1
        spf = smallest_prime_factors(2 * top + 2)
    out = np.zeros((len(ds), 5), dtype=np.int64)
    class_data_batch(ds, want_r8, spf, out)
    return out
