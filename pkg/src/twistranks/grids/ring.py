"""The ring R = Z_ell[xi] (xi a primitive ell^k0-th root of unity) and R/omega^B.

Elements are integer coefficient tuples in the basis 1, omega, ..., omega^(e-1)
with omega = xi - 1 and e = (ell - 1) ell^(k0 - 1).  omega satisfies the
Eisenstein polynomial Phi_{ell^k0}(omega + 1), so a sum c_0 + c_1 omega + ...
has valuation min_i (e v_ell(c_i) + i); in R/omega^B coefficient i is
therefore taken modulo ell^ceil((B - i) / e).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

__all__ = ["RingSpec", "INF"]

INF = float("inf")


def _vl(n: int, ell: int) -> float:
    if n == 0:
        return INF
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class RingSpec:
    ell: int
    k0: int = 1
    B: int = 2

    def __post_init__(self):
        from ..ffstats import is_prime
        if not is_prime(self.ell):
            raise ValueError(f"ell={self.ell} is not prime")
        if self.k0 < 1 or self.B < 1:
            raise ValueError("k0 and B must be positive")

    @property
    def e(self) -> int:
        return (self.ell - 1) * self.ell ** (self.k0 - 1)

    @cached_property
    def eisenstein(self) -> tuple:
        """Coefficients E_0..E_e (low first) of Phi_{ell^k0}(omega + 1)."""
        q = self.ell ** (self.k0 - 1)
        # Phi(x) = sum_{i < ell} x^(i q); substitute x = omega + 1
        from math import comb
        out = [0] * (self.e + 1)
        for i in range(self.ell):
            n = i * q
            for k in range(n + 1):
                out[k] += comb(n, k)
        assert out[-1] == 1 and out[0] == self.ell
        return tuple(out)

    @cached_property
    def moduli(self) -> tuple:
        e = self.e
        return tuple(self.ell ** max(0, -(-(self.B - i) // e)) for i in range(e))

    # construction ---------------------------------------------------------
    def zero(self) -> tuple:
        return (0,) * self.e

    def one(self) -> tuple:
        return self.from_int(1)

    def from_int(self, n: int, exact: bool = False) -> tuple:
        v = (n,) + (0,) * (self.e - 1)
        return v if exact else self.reduce(v)

    def omega_power(self, k: int, exact: bool = False) -> tuple:
        v = [0] * (k + 1)
        v[k] = 1
        v = self._fold(v)
        return v if exact else self.reduce(v)

    # arithmetic -----------------------------------------------------------
    def reduce(self, a) -> tuple:
        return tuple(int(c) % m for c, m in zip(a, self.moduli))

    def _fold(self, poly) -> tuple:
        """Reduce a polynomial in omega modulo the Eisenstein polynomial."""
        poly = list(poly)
        e = self.e
        E = self.eisenstein
        for k in range(len(poly) - 1, e - 1, -1):
            c = poly[k]
            if c:
                poly[k] = 0
                for i in range(e):
                    poly[k - e + i] -= c * E[i]
        poly += [0] * (e - len(poly))
        return tuple(poly[:e])

    def add(self, a, b, exact: bool = False):
        v = tuple(x + y for x, y in zip(a, b))
        return v if exact else self.reduce(v)

    def sub(self, a, b, exact: bool = False):
        v = tuple(x - y for x, y in zip(a, b))
        return v if exact else self.reduce(v)

    def neg(self, a, exact: bool = False):
        v = tuple(-x for x in a)
        return v if exact else self.reduce(v)

    def mul(self, a, b, exact: bool = False):
        v = self._fold(_poly_mul(a, b))
        return v if exact else self.reduce(v)

    def scale(self, n: int, a, exact: bool = False):
        v = tuple(n * x for x in a)
        return v if exact else self.reduce(v)

    def is_zero(self, a) -> bool:
        return not any(self.reduce(a))

    def valuation(self, a, truncated: bool = True):
        """omega-adic valuation; B for zero in R/omega^B, inf when exact."""
        if truncated:
            a = self.reduce(a)
        v = min(self.e * _vl(c, self.ell) + i for i, c in enumerate(a))
        if truncated and v >= self.B:
            return self.B
        return v

    # division ---------------------------------------------------------------
    @cached_property
    def _ell_over_omega(self) -> tuple:
        # omega^e + E_{e-1} omega^{e-1} + ... + E_1 omega + ell = 0
        E = self.eisenstein
        return tuple(-E[i + 1] for i in range(self.e))

    def div_omega(self, a) -> tuple:
        """a / omega for an exact element of positive valuation."""
        c0 = a[0]
        if c0 % self.ell:
            raise ValueError("element is not divisible by omega")
        shifted = tuple(a[1:]) + (0,)
        return tuple(s + (c0 // self.ell) * t for s, t in zip(shifted, self._ell_over_omega))

    def unit_inverse(self, u, precision: int = None) -> tuple:
        """Inverse of a unit modulo omega^precision (default B), exact lift."""
        prec = self.B if precision is None else precision
        if u[0] % self.ell == 0:
            raise ValueError("not a unit")
        mod = self.ell ** (-(-prec // self.e) + 1)
        inv = (pow(u[0], -1, mod),) + (0,) * (self.e - 1)
        reached = 1
        two = self.from_int(2, exact=True)
        while reached < prec:
            inv = self.mul(inv, self.sub(two, self.mul(u, inv, True), True), True)
            inv = tuple(c % mod for c in inv)
            reached *= 2
        return inv

    def divide(self, t, a) -> tuple:
        """Some s in R/omega^B with a s = t, given v(t) >= v(a) (t truncated)."""
        t = self.reduce(t)
        if self.is_zero(t):
            return self.zero()
        v = self.valuation(a, truncated=False)
        if self.valuation(t) < v:
            raise ValueError("t is not divisible by a")
        u = tuple(a)
        for _ in range(v):
            u = self.div_omega(u)
        q = tuple(t)
        for _ in range(v):
            q = self.div_omega(q)
        return self.mul(q, self.unit_inverse(u, self.B + self.e))

    def elements(self):
        """All elements of R/omega^B (small rings only)."""
        from itertools import product
        for coeffs in product(*(range(m) for m in self.moduli)):
            yield tuple(coeffs)

    def to_str(self, a) -> str:
        a = self.reduce(a)
        if self.e == 1:
            return str(a[0])
        terms = [f"{c}w^{i}" if i else str(c) for i, c in enumerate(a) if c]
        return "+".join(terms) or "0"
