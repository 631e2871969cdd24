"""Class groups of imaginary quadratic fields via reduced binary quadratic forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .selmer import rank_f2
from .sieve import SquarefreeInt
from .symbols import additive, kronecker

__all__ = [
    "ClassGroupResult",
    "fundamental_discriminant",
    "reduce_form",
    "compose",
    "inverse",
    "identity_form",
    "reduced_forms",
    "class_number",
    "class_group",
    "two_power_ranks",
    "redei_rank4",
]


@dataclass(frozen=True)
class ClassGroupResult:
    d: int
    discriminant: int
    h: int
    cyclic_factors: tuple  # invariant factors n_1 | n_2 | ...
    r2k: tuple             # (r_2, r_4, r_8, ...) ending with a 0

    def rank(self, k: int) -> int:
        """r_{2^k}; zero beyond the stored range."""
        return self.r2k[k - 1] if 1 <= k <= len(self.r2k) else 0


def _as_int(d) -> int:
    d = int(d.d) if isinstance(d, SquarefreeInt) else int(d)
    if d < 1:
        raise ValueError("class_group takes positive squarefree d")
    return d


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt(-d)): -d when -d = 1 mod 4, else -4d."""
    d = _as_int(d)
    return -d if (-d) % 4 == 1 else -4 * d


def reduce_form(f):
    a, b, c = f
    while True:
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # normalize b into (-a, a]
            k = (a - b) // (2 * a)
            c = c + b * k + a * k * k
            b = b + 2 * a * k
            continue
        return a, b, c


def identity_form(D: int):
    return (1, D % 2, (D % 2 - D) // 4)


def inverse(f):
    return reduce_form((f[0], -f[1], f[2]))


def compose(f, g):
    """Dirichlet composition of primitive forms of equal discriminant."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    D = b1 * b1 - 4 * a1 * c1
    if b2 * b2 - 4 * a2 * c2 != D:
        raise ValueError("forms have different discriminants")
    beta = (b1 + b2) // 2
    e1, x1, y1 = _xgcd(a1, a2)
    e, x2, z = _xgcd(e1, beta)
    x, y = x1 * x2, y1 * x2
    A = a1 * a2 // (e * e)
    B = (x * a1 * b2 + y * a2 * b1 + z * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    return reduce_form((A, B, C))


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def reduced_forms(D: int) -> list:
    """All reduced primitive forms (a, b, c) of negative discriminant D."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
    return out


def class_number(d) -> int:
    return len(reduced_forms(fundamental_discriminant(d)))


def _power(f, n: int, D: int):
    result = identity_form(D)
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def two_power_ranks(forms, D: int) -> tuple:
    """(r_2, r_4, ...) from the sizes of the subgroups G^(2^k), ending at 0.

    Only the 2-part matters: with h = 2^a m, m odd, the 2-Sylow is G^m and
    #(2^{k-1} S) / #(2^k S) = 2^{r_{2^k}}.
    """
    h = len(forms)
    m = h
    while m % 2 == 0:
        m //= 2
    sylow = {_power(f, m, D) for f in forms}
    ranks = []
    layer = sylow
    while len(layer) > 1:
        nxt = {compose(f, f) for f in layer}
        ranks.append((len(layer) // len(nxt)).bit_length() - 1)
        layer = nxt
    ranks.append(0)
    return tuple(ranks)


def _invariant_factors(forms, D: int) -> tuple:
    """Invariant factors of the finite abelian group on ``forms``."""
    h = len(forms)
    factors_by_prime = {}
    n = h
    p = 2
    primes = []
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    for p in primes:
        m = h
        while m % p == 0:
            m //= p
        layer = {_power(f, m, D) for f in forms}
        ranks = []
        while len(layer) > 1:
            nxt = {_power(f, p, D) for f in layer}
            ratio = len(layer) // len(nxt)
            ranks.append(round(math.log(ratio, p)))
            layer = nxt
        # ranks[k] = number of cyclic p-factors of order >= p^(k+1)
        exps = []
        for k, r in enumerate(ranks):
            nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
            exps += [k + 1] * (r - nxt)
        factors_by_prime[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in factors_by_prime.values()), default=0)
    invariants = []
    for i in range(width):
        n_i = 1
        for p, exps in factors_by_prime.items():
            if i < len(exps):
                n_i *= p ** exps[i]
        invariants.append(n_i)
    return tuple(sorted(invariants))


def class_group(d) -> ClassGroupResult:
    d = _as_int(d)
    D = fundamental_discriminant(d)
    forms = reduced_forms(D)
    h = len(forms)
    return ClassGroupResult(d, D, h, _invariant_factors(forms, D), two_power_ranks(forms, D))


def _prime_discriminants(D: int) -> list:
    """Factor a fundamental discriminant into prime discriminants."""
    n = -D if D < 0 else D
    out = []
    odd = n
    while odd % 2 == 0:
        odd //= 2
    m = odd
    p = 3
    while p * p <= m:
        if m % p == 0:
            out.append(p if p % 4 == 1 else -p)
            m //= p
        p += 2
    if m > 1:
        out.append(m if m % 4 == 1 else -m)
    rest = D
    for q in out:
        rest //= q
    if rest != 1:
        out.insert(0, rest)  # one of -4, 8, -8
    return out


def redei_rank4(d, primes=None) -> int:
    """4-rank of Cl(Q(sqrt(-d))) from the Redei matrix over F_2.

    ``primes`` (the prime factors of d) may be passed to skip factoring.
    """
    d = _as_int(d)
    D = fundamental_discriminant(d)
    if primes is None:
        pds = _prime_discriminants(D)
    else:
        pds = [p if p % 4 == 1 else -p for p in primes if p != 2]
        rest = D
        for q in pds:
            rest //= q
        if rest != 1:
            pds.insert(0, rest)
    t = len(pds)
    if t <= 1:
        return 0
    primes = [abs(q) if q % 2 else 2 for q in pds]
    rows = []
    for i, p in enumerate(primes):
        row = [0] * t
        for j, q in enumerate(pds):
            if i != j:
                row[j] = additive(kronecker(q, p))
        row[i] = sum(row) % 2
        rows.append(row)
    return t - 1 - rank_f2(rows)
