"""Random grids, ideals and subsets shared by the grid tests."""

from itertools import combinations

import numpy as np

from twistranks.grids import Grid


def random_grid(rng, max_axes=3, max_size=4, ells=(2, 3)):
    k = int(rng.integers(1, max_axes + 1))
    sizes = [int(rng.integers(1, max_size + 1)) for _ in range(k)]
    ell = int(rng.choice(ells))
    return Grid.of_sizes(sizes, ell)


def random_ideal(grid, rng):
    """A random downward-closed family of subsets of S and a valid b."""
    S = grid.S
    subsets = [frozenset(c) for k in range(len(S) + 1) for c in combinations(S, k)]
    top = [U for U in subsets if rng.random() < 0.5] + [frozenset()]
    ideal = {frozenset(V) for U in top for k in range(len(U) + 1) for V in combinations(sorted(U), k)}
    b = max(len(U) for U in ideal) + int(rng.integers(0, 2))
    return frozenset(ideal), b


def random_subset(grid, rng, p=None):
    p = rng.random() if p is None else p
    return tuple(x for x in grid.points if rng.random() < p)


def corpus(n, seed, **kw):
    rng = np.random.default_rng(seed)
    return [random_grid(rng, **kw) for _ in range(n)], rng
