"""2-Selmer ranks of the twists y^2 = x^3 - d^2 x of the congruent number curve.

Two methods are provided.  ``selmer_rank_descent`` is a complete 2-descent
using the rational 2-torsion: Selmer elements are pairs of square classes
(b1, b2) supported on {-1, 2, p | d} whose local images lie in the image of
the local Kummer map at every bad place.  The local images are found by
generating points over Q_v until the image has its known size.
``selmer_rank_monsky`` evaluates the F_2 matrix built from Legendre symbols
and is only trusted after it agrees with the descent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .sieve import SquarefreeInt
from .symbols import additive, legendre

__all__ = [
    "SelmerResult",
    "selmer_rank_descent",
    "selmer_rank_monsky",
    "monsky_matrix",
    "rank_f2",
    "torsion_images",
    "on_curve",
]


@dataclass(frozen=True)
class SelmerResult:
    d: SquarefreeInt
    sel2_dim: int
    torsion_dim: int
    r2: int
    method: str


def _as_sqf(d) -> SquarefreeInt:
    return d if isinstance(d, SquarefreeInt) else SquarefreeInt.of(int(d))


def on_curve(d: int, x, y) -> bool:
    x, y = Fraction(x), Fraction(y)
    return y * y == x ** 3 - d * d * x


# --- F_2 linear algebra on int bitmasks ---------------------------------

def _reduce(vec: int, basis: dict) -> int:
    # basis maps pivot bit -> row with that highest bit
    while vec:
        top = vec.bit_length() - 1
        row = basis.get(top)
        if row is None:
            return vec
        vec ^= row
    return 0


def _insert(vec: int, basis: dict) -> bool:
    vec = _reduce(vec, basis)
    if vec:
        basis[vec.bit_length() - 1] = vec
        return True
    return False


def rank_f2(rows) -> int:
    basis: dict = {}
    for r in rows:
        if not isinstance(r, int):
            r = int("".join("1" if int(v) % 2 else "0" for v in r) or "0", 2)
        _insert(r, basis)
    return len(basis)


# --- square classes ------------------------------------------------------

def _split(q: Fraction, p: int):
    """(v_p(q), unit part of q as a Fraction)."""
    num, den = q.numerator, q.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, num, den


def _class_bits(q: Fraction, place: int) -> int:
    """Square class of q in Q_v^*/Q_v^*2 as a bitmask.

    place 0 is the real place (1 bit: sign), an odd prime gives 2 bits
    (valuation parity, residue symbol of the unit) and 2 gives 3 bits.
    """
    if q == 0:
        raise ValueError("zero has no square class")
    if place == 0:
        return 1 if q < 0 else 0
    v, num, den = _split(q, place)
    if place == 2:
        u = (num * den) % 8  # same class as num/den, den odd
        eps = ((u - 1) // 2) % 2
        omega = ((u * u - 1) // 8) % 2
        return (v % 2) | (eps << 1) | (omega << 2)
    return (v % 2) | (additive(legendre(num * den, place)) << 1)


def _width(place: int) -> int:
    return 1 if place == 0 else (3 if place == 2 else 2)


def _is_local_square(q: Fraction, place: int) -> bool:
    return q != 0 and _class_bits(q, place) == 0


def _kummer(d: int, x: Fraction):
    """Kummer image (x - 0, x - d) of a point with abscissa x, as rationals."""
    e1, e2, e3 = 0, d, -d
    if x == e1:
        return Fraction((e1 - e2) * (e1 - e3)), Fraction(e1 - e2)
    if x == e2:
        return Fraction(e2 - e1), Fraction((e2 - e1) * (e2 - e3))
    return x - e1, x - e2


def torsion_images(d: int) -> list:
    """Kummer images of (0,0), (d,0), (-d,0) as pairs of rationals."""
    return [_kummer(d, Fraction(x)) for x in (0, d, -d)]


def _local_vec(pair, place: int) -> int:
    w = _width(place)
    return _class_bits(pair[0], place) | (_class_bits(pair[1], place) << w)


def _target_size(place: int) -> int:
    # |E(Q_v)/2E(Q_v)| for a curve with full rational 2-torsion
    return 2 if place == 0 else (8 if place == 2 else 4)


def _abscissae(d: int, place: int):
    """Deterministic stream of rational x to probe for local points."""
    yield from (Fraction(0), Fraction(d), Fraction(-d))
    p = 2 if place in (0, 2) else place
    span = 8 if place == 2 else max(4, min(place, 64))
    for k in range(-4, 7):
        scale = Fraction(p) ** k
        for c in (0, d, -d):
            for u in range(1, 4 * span):
                for s in (1, -1):
                    yield c + s * u * scale


def local_image(d: int, place: int) -> dict:
    """Image of E_d(Q_v) in (Q_v^*/Q_v^*2)^2 as an F_2 basis (pivot -> row)."""
    target = _target_size(place)
    basis: dict = {}
    f = lambda x: x ** 3 - d * d * x
    for x in _abscissae(d, place):
        fx = f(x)
        if fx != 0:
            if place == 0:
                if fx < 0:
                    continue
            elif not _is_local_square(fx, place):
                continue
        _insert(_local_vec(_kummer(d, x), place), basis)
        if 1 << len(basis) == target:
            return basis
    raise RuntimeError(f"local image at {place} for d={d} did not reach size {target}")


def _candidate_values(primes):
    """All squarefree integers supported on -1 and the given primes."""
    gens = [-1] + list(primes)
    for mask in range(1 << len(gens)):
        v = 1
        for i, g in enumerate(gens):
            if mask >> i & 1:
                v *= g
        yield mask, v


def selmer_rank_descent(d) -> SelmerResult:
    sd = _as_sqf(d)
    n = abs(sd.d)  # y^2 = x^3 - d^2 x only depends on d^2
    odd = [p for p in sd.primes if p != 2]
    support = [2] + odd
    places = [0, 2] + odd
    images = {v: local_image(n, v) for v in places}
    values = list(_candidate_values(support))
    locs = {v: {mask: _class_bits(Fraction(b), v) for mask, b in values} for v in places}
    survivors = set()
    for (m1, _), (m2, _) in product(values, values):
        ok = True
        for v in places:
            w = _width(v)
            vec = locs[v][m1] | (locs[v][m2] << w)
            if _reduce(vec, images[v]):
                ok = False
                break
        if ok:
            survivors.add((m1, m2))
    nbits = len(support) + 1
    packed = {m1 | (m2 << nbits) for m1, m2 in survivors}
    for a in packed:
        for b in packed:
            assert a ^ b in packed, f"Selmer candidates for d={sd.d} are not a group"
    size = len(packed)
    sel2 = size.bit_length() - 1
    assert 1 << sel2 == size

    def global_vec(q: Fraction) -> int:
        bits = 1 if q < 0 else 0
        for i, p in enumerate(support):
            v, _, _ = _split(q, p)
            bits |= (v % 2) << (i + 1)
        return bits

    tors = [global_vec(a) | (global_vec(b) << nbits) for a, b in torsion_images(n)]
    for t in tors:
        assert t in packed
    tdim = rank_f2(tors)
    return SelmerResult(sd, sel2, tdim, sel2 - tdim, "descent")


def monsky_matrix(primes) -> np.ndarray:
    """The 2t x 2t Monsky matrix over F_2 for d = product of odd primes."""
    t = len(primes)
    a = np.zeros((t, t), dtype=np.uint8)
    for i, p in enumerate(primes):
        for j, q in enumerate(primes):
            if i != j:
                a[i, j] = additive(legendre(q, p))
        a[i, i] = a[i].sum() % 2
    d2 = np.diag([additive(legendre(2, p)) for p in primes]).astype(np.uint8)
    dm2 = np.diag([additive(legendre(-2, p)) for p in primes]).astype(np.uint8)
    top = np.hstack([(a + d2) % 2, d2])
    bot = np.hstack([d2, (a + dm2) % 2])
    return np.vstack([top, bot])


def selmer_rank_monsky(d) -> SelmerResult:
    sd = _as_sqf(d)
    if sd.d < 0 or sd.d % 2 == 0:
        raise ValueError("the Monsky fast path takes odd positive d; use the descent")
    t = len(sd.primes)
    m = monsky_matrix(sd.primes)
    r2 = 2 * t - rank_f2(m.tolist()) if t else 0
    return SelmerResult(sd, r2 + 2, 2, r2, "monsky")
