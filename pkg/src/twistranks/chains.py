"""Markov chains on rank sequences driven by kernel statistics.

From state n the chain moves to j with probability P(j | n): the chance that
a random matrix of the ensemble attached to size n has a kernel of
dimension j.  Two families are supported: the alternating chain over F_2
and the general chain with row offset ``u`` over F_ell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from . import ffstats

__all__ = [
    "ChainSpec",
    "TransitionMatrix",
    "Absorption",
    "transition_probability",
    "transition_matrix",
    "limit_distribution",
    "prefix_probability",
    "absorption_distribution",
    "power_iteration_absorption",
    "sample_sequence",
    "sample_step",
    "NoAbsorbingStateError",
]

LIMIT = "limit"
Start = Union[str, Mapping[int, Union[Fraction, float, int]]]


class NoAbsorbingStateError(RuntimeError):
    pass


@dataclass(frozen=True)
class ChainSpec:
    kind: str = "alternating"  # or "general"
    u: int = 0
    ell: int = 2
    max_rank: int = 40

    def __post_init__(self):
        if self.kind not in ("alternating", "general"):
            raise ValueError(f"unknown chain kind {self.kind!r}")
        if self.max_rank < 1:
            raise ValueError("max_rank must be at least 1")
        if self.kind == "alternating" and self.ell != 2:
            raise ValueError("the alternating chain is defined over F_2")
        ffstats._check_ell(self.ell)

    @classmethod
    def alternating(cls, max_rank: int = 40) -> "ChainSpec":
        return cls("alternating", 0, 2, max_rank)

    @classmethod
    def general(cls, u: int = 0, ell: int = 2, max_rank: int = 40) -> "ChainSpec":
        return cls("general", u, ell, max_rank)


@dataclass(frozen=True)
class TransitionMatrix:
    chain: ChainSpec
    entries: tuple   # entries[n][j] = P(j | n) as Fractions
    deficit: tuple   # 1 - row sum; mass that leaves the modelled states

    def row(self, n: int) -> dict:
        return {j: p for j, p in enumerate(self.entries[n]) if p}


@dataclass(frozen=True)
class Absorption:
    masses: dict        # absorbing state -> probability
    escape: float       # start mass above max_rank plus mass lost on the way
    exact: Union[dict, None] = None  # Fractions, when the start was exact


def transition_probability(chain: ChainSpec, j: int, n: int) -> Fraction:
    if chain.kind == "alternating":
        return ffstats.p_alt(j, n)
    return ffstats.p_mat(chain.u, chain.ell, j, n)


def transition_matrix(chain: ChainSpec) -> TransitionMatrix:
    size = chain.max_rank + 1
    rows = []
    for n in range(size):
        rows.append(tuple(transition_probability(chain, j, n) if j <= n else Fraction(0)
                          for j in range(size)))
    deficit = tuple(1 - sum(r, Fraction(0)) for r in rows)
    return TransitionMatrix(chain, tuple(rows), deficit)


def limit_distribution(chain: ChainSpec, tol: float = ffstats.DEFAULT_TOL):
    """Starting distribution P(. | infinity) on states 0..max_rank.

    Returns (masses, tail) with tail the mass of the approximating finite
    distribution above max_rank.
    """
    if chain.kind == "alternating":
        masses, _, _, tail = ffstats.p_alt_limit_distribution(chain.max_rank, tol)
    else:
        masses, _, _, tail = ffstats.p_mat_limit_distribution(
            chain.u, chain.ell, chain.max_rank, tol)
    return masses, tail


def _start_masses(chain: ChainSpec, start: Start):
    if isinstance(start, str):
        if start != LIMIT:
            raise ValueError(f"unknown start {start!r}")
        masses, tail = limit_distribution(chain)
        return dict(enumerate(masses)), tail, False
    masses = dict(start)
    exact = all(isinstance(v, (Fraction, int)) for v in masses.values())
    tail = sum(v for k, v in masses.items() if k > chain.max_rank)
    masses = {k: v for k, v in masses.items() if k <= chain.max_rank}
    if any(k < 0 for k in masses):
        raise ValueError("states are nonnegative integers")
    return masses, tail, exact


def prefix_probability(chain: ChainSpec, start: Start, prefix: Sequence[int]):
    """Probability that the chain's first len(prefix) states are ``prefix``.

    Exact (a Fraction) for an exact start distribution; for the limit start
    the result is a ``LimitValue`` carrying the propagated error.
    """
    prefix = list(prefix)
    if any(b > a for a, b in zip(prefix, prefix[1:])):
        raise ValueError(f"rank prefix must be nonincreasing: {prefix}")
    if any(r < 0 for r in prefix):
        raise ValueError("ranks are nonnegative")
    if not prefix:
        return Fraction(1)
    steps = Fraction(1)
    for a, b in zip(prefix, prefix[1:]):
        steps *= transition_probability(chain, b, a)
    if isinstance(start, str):
        if start != LIMIT:
            raise ValueError(f"unknown start {start!r}")
        if chain.kind == "alternating":
            first = ffstats.p_alt_limit(prefix[0])
        else:
            first = ffstats.p_mat_limit(chain.u, chain.ell, prefix[0])
        return ffstats.LimitValue(first.value * float(steps), first.error * float(steps), first.n)
    return Fraction(dict(start).get(prefix[0], 0)) * steps


def _solve_exact(a: list, b: list) -> list:
    """Solve a x = b over the rationals; a is square, b is a list of columns."""
    n = len(a)
    m = [list(a[i]) + [col[i] for col in b] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [[m[i][n + k] for i in range(n)] for k in range(len(b))]


def absorption_distribution(chain: ChainSpec, start: Start) -> Absorption:
    """Eventual absorption probabilities for each absorbing state.

    Absorbing states are read off the matrix (P(r | r) = 1).  Hitting
    probabilities from every transient state come from an exact solve of
    (I - Q) h = R over the rationals.
    """
    masses, tail, exact = _start_masses(chain, start)
    total = sum(masses.values()) + tail
    if abs(float(total) - 1) > 1e-12:
        raise ValueError(f"start masses sum to {float(total)}, not 1")
    tm = transition_matrix(chain)
    size = chain.max_rank + 1
    absorbing = [r for r in range(size) if tm.entries[r][r] == 1]
    transient = [r for r in range(size) if r not in absorbing]
    if not absorbing:
        raise NoAbsorbingStateError(f"{chain} has no absorbing state")
    pos = {r: i for i, r in enumerate(transient)}
    lhs = [[(1 if i == k else 0) - tm.entries[r][c] for k, c in enumerate(transient)]
           for i, r in enumerate(transient)]
    rhs = [[tm.entries[r][a] for r in transient] for a in absorbing]
    hit = _solve_exact(lhs, rhs) if transient else [[] for _ in absorbing]

    def h(a_idx, r):
        if r in pos:
            return hit[a_idx][pos[r]]
        return Fraction(1 if r == absorbing[a_idx] else 0)

    out = {}
    for k, a in enumerate(absorbing):
        out[a] = sum((Fraction(v) if exact else v) * h(k, r) for r, v in masses.items())
    reached = {a for a in absorbing if out[a] != 0}
    if not reached:
        raise NoAbsorbingStateError("no absorbing state is reachable from the start")
    lost = sum(out.values()) if exact else sum(float(v) for v in out.values())
    escape = float(tail) + max(0.0, float(sum(masses.values())) - float(lost))
    return Absorption({a: float(v) for a, v in out.items()}, escape,
                      dict(out) if exact else None)


def power_iteration_absorption(chain: ChainSpec, start: Mapping[int, float],
                               steps: int = 2000) -> dict:
    """Long-horizon distribution by repeated multiplication (float check)."""
    tm = transition_matrix(chain)
    p = np.array([[float(x) for x in row] for row in tm.entries])
    v = np.zeros(chain.max_rank + 1)
    for k, m in start.items():
        v[k] = float(m)
    for _ in range(steps):
        v = v @ p
    return {r: float(v[r]) for r in range(len(v)) if tm.entries[r][r] == 1}


def _row_probs(chain: ChainSpec, n: int) -> np.ndarray:
    row = np.array([float(transition_probability(chain, j, n)) for j in range(n + 1)])
    return row / row.sum() if row.sum() > 0 else row


def sample_step(chain: ChainSpec, state: int, size: int, seed: int) -> np.ndarray:
    """``size`` independent one-step moves out of ``state``."""
    rng = np.random.default_rng(seed)
    probs = _row_probs(chain, state)
    return rng.choice(len(probs), size=size, p=probs)


def sample_sequence(chain: ChainSpec, seed: int, steps: int,
                    start: Start = LIMIT) -> tuple:
    """Draw r_1 from ``start`` and then steps-1 transitions."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    rng = np.random.default_rng(seed)
    masses, _, _ = _start_masses(chain, start)
    states = sorted(masses)
    weights = np.array([float(masses[s]) for s in states])
    state = int(states[rng.choice(len(states), p=weights / weights.sum())])
    seq = [state]
    for _ in range(steps - 1):
        probs = _row_probs(chain, state)
        if probs.sum() == 0:
            raise ValueError(f"state {state} has no outgoing mass")
        state = int(rng.choice(len(probs), p=probs))
        seq.append(state)
    return tuple(seq)
