"""Equidistribution of functions compatible with a fixed g on closed sets.

Values in (1/ell)Z/Z are stored as integers mod ell.  xi acts trivially on
(1/ell)Z/Z, so an element a of zs(Y_i) acts through its residue mod omega,
and compatibility a . f = a . g only has to be checked on an integer basis
of zs(Y_i) reduced mod ell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid, closure, integer_kernel

__all__ = [
    "RamseyCheck",
    "RamseyResult",
    "NotClosedError",
    "IncompatibleError",
    "ConstructionError",
    "ramsey_bound",
    "bye_ramsey_check",
    "bye_ramsey_construct",
    "random_battery",
    "compatible_shifts",
]


class NotClosedError(ValueError):
    pass


class IncompatibleError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class RamseyCheck:
    passed: bool
    slack: float
    deviation: float
    bound: float


@dataclass(frozen=True)
class RamseyResult:
    g: dict
    attempts: int
    batteries_checked: int
    min_slack: float


def ramsey_bound(grid: Grid, M: int) -> float:
    ell = grid.ring.ell
    n = len(grid)
    return math.sqrt(M * math.log(ell * n) * sum(1 / k for k in grid.sizes)) * n


def _kernel_mod(grid: Grid, Y) -> list:
    ell = grid.ring.ell
    return [{x: v % ell for x, v in vec.items() if v % ell}
            for vec in integer_kernel(grid, grid.S, Y)]


def bye_ramsey_check(grid: Grid, g: dict, Ys, f: dict, c: int, M: int = None) -> RamseyCheck:
    """Verify the deviation bound for f on Y = union of the Y_i.

    Raises NotClosedError or IncompatibleError when a precondition fails.
    """
    ell = grid.ring.ell
    Ys = [grid.check_subset(Y) for Y in Ys]
    M = len(Ys) if M is None else M
    if len(Ys) > M:
        raise ValueError("more sets than M")
    seen = set()
    for Y in Ys:
        if seen & set(Y):
            raise ValueError("the sets Y_i must be disjoint")
        seen |= set(Y)
        if closure(grid, Y) != Y:
            raise NotClosedError(f"Y_i of size {len(Y)} is not closed")
        for a in _kernel_mod(grid, Y):
            if sum(v * (f[x] - g[x]) for x, v in a.items()) % ell:
                raise IncompatibleError("f is not compatible with g on some Y_i")
    size = len(seen)
    hits = sum(1 for x in seen if f[x] % ell == c % ell)
    deviation = abs(hits - size / ell)
    bound = ramsey_bound(grid, max(M, 1))
    return RamseyCheck(deviation <= bound, bound - deviation, deviation, bound)


def _nullspace_mod(rows, cols, ell):
    """Basis of {h : row . h = 0 mod ell for every row}, rows as dicts."""
    idx = {x: i for i, x in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, a in enumerate(rows):
        for x, v in a.items():
            mat[r, idx[x]] = v % ell
    pivots = []
    row = 0
    for col in range(len(cols)):
        if row >= len(mat):
            break
        nz = np.flatnonzero(mat[row:, col])
        if not len(nz):
            continue
        p = row + nz[0]
        mat[[row, p]] = mat[[p, row]]
        mat[row] = mat[row] * pow(int(mat[row, col]), -1, ell) % ell
        for r in range(len(mat)):
            if r != row and mat[r, col]:
                mat[r] = (mat[r] - mat[r, col] * mat[row]) % ell
        pivots.append(col)
        row += 1
    free = [c for c in range(len(cols)) if c not in pivots]
    basis = []
    for fc in free:
        h = np.zeros(len(cols), dtype=np.int64)
        h[fc] = 1
        for r, pc in enumerate(pivots):
            h[pc] = (-mat[r, fc]) % ell
        basis.append(h)
    return basis


def compatible_shifts(grid: Grid, Y) -> list:
    """Basis mod ell of the h on Y with a . h = 0 for all a in zs(Y)."""
    Y = grid.check_subset(Y)
    basis = _nullspace_mod(_kernel_mod(grid, Y), Y, grid.ring.ell)
    return [dict(zip(Y, map(int, h))) for h in basis]


def _random_closed_sets(grid: Grid, M: int, rng) -> list:
    pts = list(grid.points)
    used = set()
    out = []
    for _ in range(M):
        free = [x for x in pts if x not in used]
        if not free:
            break
        k = int(rng.integers(1, max(2, len(free) // 2) + 1))
        pick = [free[i] for i in rng.choice(len(free), size=min(k, len(free)), replace=False)]
        Y = closure(grid, pick)
        if used & set(Y):
            continue
        used |= set(Y)
        out.append(Y)
    return out


def random_battery(grid: Grid, g: dict, M: int, rng):
    """A random instance (Ys, f, c) with f compatible with g."""
    ell = grid.ring.ell
    Ys = _random_closed_sets(grid, M, rng)
    f = {}
    for Y in Ys:
        shift = {x: 0 for x in Y}
        for h in compatible_shifts(grid, Y):
            k = int(rng.integers(ell))
            for x, v in h.items():
                shift[x] = (shift[x] + k * v) % ell
        for x in Y:
            f[x] = (g[x] + shift[x]) % ell
    c = int(rng.integers(ell))
    return Ys, f, c


def bye_ramsey_construct(grid: Grid, M: int, seed: int, batteries: int = 100,
                         cap: int = 64) -> RamseyResult:
    """Rejection-sample g until it passes a randomized battery of checks."""
    ell = grid.ring.ell
    rng = np.random.default_rng(seed)
    if len(grid) == 1:
        g = {grid.points[0]: 0}
        return RamseyResult(g, 1, 0, ramsey_bound(grid, M))
    for attempt in range(1, cap + 1):
        g = {x: int(v) for x, v in zip(grid.points, rng.integers(ell, size=len(grid)))}
        ok = True
        worst = math.inf
        for _ in range(batteries):
            Ys, f, c = random_battery(grid, g, M, rng)
            res = bye_ramsey_check(grid, g, Ys, f, c, M)
            worst = min(worst, res.slack)
            if not res.passed:
                ok = False
                break
        if ok:
            return RamseyResult(g, attempt, batteries, worst)
    raise ConstructionError(f"no g found in {cap} attempts; raise M or |X|")
