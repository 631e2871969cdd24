"""Empirical probe of the bilinear character-sum bound.

lhs = sum over odd squarefree 0 < e < N1 of |sum over squarefree |d| < N2 of
a_d (d/e)|, computed exactly, next to N1 N2^(1/2) + N1^(3/4) N2 (log N2)^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..arith.sieve import sieve_segment

__all__ = ["JutilaRow", "jutila_probe", "jutila_table", "coefficients", "SCHEMES"]

SCHEMES = ("constant", "random", "mobius")


@dataclass(frozen=True)
class JutilaRow:
    N1: int
    N2: int
    lhs: int
    bound: float
    ratio: float
    normalized: float   # lhs / (N1 N2)


def _squarefree_below(n: int):
    """Squarefree 0 < m < n with prime counts."""
    if n <= 1:
        return np.zeros(0, dtype=np.int64), np.zeros((0, 1), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return sieve_segment(1, n)


def coefficients(ds: np.ndarray, omega: np.ndarray, scheme: str, seed: int = 0) -> np.ndarray:
    if scheme == "constant":
        return np.ones(len(ds), dtype=np.int64)
    if scheme == "random":
        rng = np.random.default_rng(seed)
        return rng.choice(np.array([-1, 1], dtype=np.int64), size=len(ds))
    if scheme == "mobius":
        return np.where(omega % 2 == 0, 1, -1).astype(np.int64)
    raise ValueError(f"unknown coefficient scheme {scheme!r}")


def _legendre_table(p: int) -> np.ndarray:
    t = -np.ones(p, dtype=np.int64)
    t[0] = 0
    k = np.arange(1, p, dtype=np.int64)
    t[(k * k) % p] = 1
    return t


def jutila_probe(N1: int, N2: int, scheme: str = "constant", seed: int = 0,
                 signs: str = "both") -> JutilaRow:
    if N1 < 1 or N2 < 1:
        raise ValueError("N1 and N2 must be positive")
    pos, _, pos_omega = _squarefree_below(N2)
    if signs == "both":
        ds = np.concatenate([-pos[::-1], pos])
        om = np.concatenate([pos_omega[::-1], pos_omega])
    elif signs == "positive":
        ds, om = pos, pos_omega
    elif signs == "negative":
        ds, om = -pos[::-1], pos_omega[::-1]
    else:
        raise ValueError("signs is both, positive or negative")
    a = coefficients(ds, om, scheme, seed)
    es, efac, ecnt = _squarefree_below(N1)
    tables = {}
    lhs = 0
    for e, row, c in zip(es.tolist(), efac.tolist(), ecnt.tolist()):
        if e % 2 == 0:
            continue
        chi = np.ones(len(ds), dtype=np.int64)
        for p in row[:c]:
            t = tables.get(p)
            if t is None:
                t = tables[p] = _legendre_table(p)
            chi *= t[ds % p]
        lhs += abs(int(np.dot(a, chi)))
    logn = math.log(N2) if N2 > 1 else 0.0
    bound = N1 * math.sqrt(N2) + N1 ** 0.75 * N2 * logn ** 3
    ratio = lhs / bound if bound else math.inf
    return JutilaRow(N1, N2, lhs, bound, ratio, lhs / (N1 * N2))


def jutila_table(pairs, scheme: str = "constant", seed: int = 0) -> list:
    return [jutila_probe(n1, n2, scheme, seed) for n1, n2 in pairs]
