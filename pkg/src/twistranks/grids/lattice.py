"""Incremental echelon forms over the local ring Z_(ell).

Rows are integer lists.  Row operations are integer combinations where the
row being modified is only ever scaled by integers prime to ell, so the
row module over Z_(ell) is preserved.  At each pivot column the stored row
has the smallest ell-adic valuation seen there, which makes reduction a
complete membership test.
"""

from __future__ import annotations

from math import gcd

__all__ = ["vl", "ZlEchelon"]

INF = float("inf")


def vl(n: int, ell: int):
    if n == 0:
        return INF
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def _unit_part(n: int, ell: int) -> int:
    while n % ell == 0:
        n //= ell
    return n


class ZlEchelon:
    """Echelon basis over Z_(ell) for the first ``nleft`` columns.

    Vectors whose first ``nleft`` entries reduce to zero are collected in
    ``null_rows``; with an identity block appended on the right these are a
    basis of the kernel (or of a submodule intersection).  Columns beyond
    ``nleft`` are carried along and, when ``right_modulus`` is given, kept
    reduced modulo it.
    """

    def __init__(self, ell: int, ncols: int, nleft: int = None, right_modulus: int = None):
        self.ell = ell
        self.ncols = ncols
        self.nleft = ncols if nleft is None else nleft
        self.right_modulus = right_modulus
        self.pivots = {}      # column -> (row, valuation of pivot entry)
        self.null_rows = []

    def _normalize(self, row):
        if self.right_modulus:
            m = self.right_modulus
            row = row[:self.nleft] + [x % m for x in row[self.nleft:]]
        g = 0
        for x in row:
            if x:
                g = gcd(g, x)
        if g > 1:
            u = _unit_part(g, self.ell)
            if u > 1:
                if self.right_modulus:
                    m = self.right_modulus
                    inv = pow(u, -1, m) if m > 1 else 0
                    row = ([x // u for x in row[:self.nleft]]
                           + [x * inv % m for x in row[self.nleft:]])
                else:
                    row = [x // u for x in row]
        return row

    def _lead(self, row):
        for c in range(self.nleft):
            if row[c]:
                return c
        return None

    def _eliminate(self, row, c, prow, pv):
        """Clear column c of row using the pivot row (needs v(row[c]) >= pv)."""
        p = prow[c]
        q = row[c]
        unit = p // self.ell ** pv          # p = ell^pv * unit
        factor = q // self.ell ** pv        # exact since v(q) >= pv
        return [unit * x - factor * y for x, y in zip(row, prow)]

    def insert(self, row) -> bool:
        """Add a vector; returns True if it enlarged the left-part span."""
        row = self._normalize(list(row))
        grew = False
        while True:
            c = self._lead(row)
            if c is None:
                if any(row):
                    self.null_rows.append(row)
                return grew
            v = vl(row[c], self.ell)
            if c not in self.pivots:
                self.pivots[c] = (row, v)
                return True
            prow, pv = self.pivots[c]
            if v < pv:
                # the new vector becomes the pivot, the old one is pushed down
                self.pivots[c] = (row, v)
                row, v, prow, pv = prow, pv, row, v
                grew = True
            row = self._normalize(self._eliminate(row, c, prow, pv))

    def reduce(self, row):
        """Reduce without inserting; None if the left part is not in the span."""
        row = list(row)
        while True:
            c = self._lead(row)
            if c is None:
                return row
            if c not in self.pivots:
                return None
            prow, pv = self.pivots[c]
            if vl(row[c], self.ell) < pv:
                return None
            row = self._eliminate(row, c, prow, pv)

    def contains(self, row) -> bool:
        return self.reduce(row) is not None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rows(self):
        return [self.pivots[c][0] for c in sorted(self.pivots)]
