"""Quadratic residue symbols."""

from __future__ import annotations

__all__ = ["kronecker", "jacobi", "legendre", "symbol_pair", "additive"]


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n); agrees with Legendre for odd prime n."""
    if n == 0:
        raise ValueError("Kronecker symbol (a/0) is not supported")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(a, n)


def legendre(a: int, p: int) -> int:
    return jacobi(a, p)


def symbol_pair(p: int, q: int) -> int:
    """The symbol of the prime pair (p, q) over Q: the Legendre symbol (q/p).

    It does not depend on the Galois element it is evaluated at, so none is
    taken.
    """
    if p == q:
        raise ValueError("symbol_pair needs distinct primes")
    if p % 2 == 0 or q % 2 == 0:
        raise ValueError("symbol_pair needs odd primes")
    return kronecker(q, p)


def additive(symbol: int) -> int:
    """Map +1 -> 0 and -1 -> 1 (F_2 coordinates of a symbol)."""
    return 1 if symbol == -1 else 0
