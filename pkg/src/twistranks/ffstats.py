"""Kernel-dimension statistics for uniformly random matrices over F_ell.

Two ensembles are covered:

* general: an (n - u) x n matrix with independent uniform entries;
* alternating: an n x n matrix with zero diagonal and A^T = -A, whose
  n(n-1)/2 strictly-upper entries are uniform.

Counts come from one-row-extension recurrences.  They are cross-checked
against exhaustive enumeration (``enumerate_rank_counts`` and
``enumerate_alternating_rank_counts``) in the test suite and by the
``validate`` gate, and everything exposed as a probability is an exact
``Fraction``.  Only the ``*_limit`` functions return floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numba import njit

__all__ = [
    "EnsembleSpec",
    "KernelDistribution",
    "LimitValue",
    "ConvergenceError",
    "OddRankError",
    "count_rank_matrices",
    "count_rank_alternating",
    "p_mat",
    "p_alt",
    "p_alt_limit",
    "p_mat_limit",
    "p_alt_limit_distribution",
    "p_mat_limit_distribution",
    "kernel_distribution",
    "enumerate_rank_counts",
    "enumerate_alternating_rank_counts",
]

DEFAULT_TOL = 1e-12
DEFAULT_N_CAP = 400


class ConvergenceError(RuntimeError):
    """A limit did not settle to the requested tolerance before the n-cap."""


class OddRankError(ValueError):
    """Alternating matrices only have even rank."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_ell(ell: int) -> None:
    if not isinstance(ell, (int, np.integer)) or not is_prime(int(ell)):
        raise ValueError(f"ell must be prime, got {ell!r}")


@dataclass(frozen=True)
class EnsembleSpec:
    ell: int
    kind: str  # "general" or "alternating"
    n: int
    u: int = 0

    def __post_init__(self):
        _check_ell(self.ell)
        if self.kind not in ("general", "alternating"):
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")


@dataclass(frozen=True)
class KernelDistribution:
    ensemble: EnsembleSpec
    masses: dict = field(default_factory=dict)

    def __getitem__(self, j: int) -> Fraction:
        return self.masses.get(j, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))


@dataclass(frozen=True)
class LimitValue:
    """A float approximation of a limit together with how it was reached."""

    value: float
    error: float  # last successive difference; the achieved tolerance
    n: int        # size at which the iteration stopped

    def __float__(self):
        return self.value


# -- exact counts -----------------------------------------------------------

@lru_cache(maxsize=None)
def _general_counts(ell: int, m: int, n: int) -> tuple:
    """Counts of m x n matrices by rank, built one row at a time.

    A new row keeps the rank r if it lies in the current row space
    (ell^r choices) and raises it to r + 1 otherwise (ell^n - ell^r).
    """
    counts = [1]  # zero rows: only the empty matrix, rank 0
    for _ in range(m):
        nxt = [0] * (min(len(counts), n) + 1)
        for r, c in enumerate(counts):
            if not c:
                continue
            nxt[r] += c * ell ** r
            if r < n:
                nxt[r + 1] += c * (ell ** n - ell ** r)
        counts = nxt
    return tuple(counts)


@lru_cache(maxsize=None)
def _alternating_counts(ell: int, n: int) -> tuple:
    """Counts of alternating n x n matrices indexed by rank (odd slots are 0).

    Bordering an alternating matrix of rank 2s by a new row/column v keeps
    the rank if v is in its column space and adds 2 otherwise.
    """
    counts = [1]  # n = 0
    for size in range(n):
        nxt = [0] * (size + 2)
        for r, c in enumerate(counts):
            if not c:
                continue
            nxt[r] += c * ell ** r
            if r + 2 <= size + 1:
                nxt[r + 2] += c * (ell ** size - ell ** r)
        counts = nxt
    return tuple(counts)


def count_rank_matrices(ell: int, m: int, n: int, r: int) -> int:
    """Number of m x n matrices over F_ell of rank exactly r."""
    _check_ell(ell)
    if m < 0 or n < 0:
        raise ValueError("matrix dimensions must be nonnegative")
    if r < 0 or r > min(m, n):
        raise ValueError(f"rank {r} out of range for a {m} x {n} matrix")
    counts = _general_counts(int(ell), m, n)
    return counts[r] if r < len(counts) else 0


def count_rank_alternating(ell: int, n: int, r: int) -> int:
    """Number of alternating n x n matrices over F_ell of rank exactly r."""
    _check_ell(ell)
    if r % 2:
        raise OddRankError(f"alternating matrices have even rank, got {r}")
    if n < 0 or r < 0 or r > n:
        raise ValueError(f"rank {r} out of range for size {n}")
    counts = _alternating_counts(int(ell), n)
    return counts[r] if r < len(counts) else 0


# -- probabilities ----------------------------------------------------------

def p_mat(u: int, ell: int, j: int, n: int) -> Fraction:
    """Probability that a uniform (n-u) x n matrix over F_ell has kernel rank j.

    Zero when n < u (no such matrix shape) or j is out of range.
    """
    _check_ell(ell)
    if j < 0 or n < 0:
        raise ValueError("j and n must be nonnegative")
    if n < u or j > n:
        return Fraction(0)
    m = n - u
    r = n - j
    if r > m:
        return Fraction(0)
    return Fraction(count_rank_matrices(ell, m, n, r), ell ** (m * n))


def p_alt(j: int, n: int, ell: int = 2) -> Fraction:
    """Probability that a uniform alternating n x n matrix has kernel dim j."""
    if j < 0 or n < 0:
        raise ValueError("j and n must be nonnegative")
    if j > n or (n - j) % 2:
        return Fraction(0)
    _check_ell(ell)
    return Fraction(count_rank_alternating(ell, n, n - j), ell ** (n * (n - 1) // 2))


def kernel_distribution(spec: EnsembleSpec) -> KernelDistribution:
    if spec.kind == "alternating":
        masses = {j: p_alt(j, spec.n, spec.ell) for j in range(spec.n + 1)}
    else:
        masses = {j: p_mat(spec.u, spec.ell, j, spec.n) for j in range(spec.n + 1)}
    return KernelDistribution(spec, {j: v for j, v in masses.items() if v})


# -- limits -----------------------------------------------------------------

def _alt_averaged(n: int, jmax: int, ell: int = 2) -> list:
    return [(p_alt(j, 2 * n, ell) + p_alt(j, 2 * n + 1, ell)) / 2 for j in range(jmax + 1)]


def _converge(step, tol: float, n_cap: int, start: int = 0):
    if not tol > 0:
        raise ValueError("tol must be positive")
    prev = None
    for n in range(start, n_cap + 1):
        cur = step(n)
        if prev is not None:
            diff = max(abs(a - b) for a, b in zip(cur, prev))
            if diff < tol:
                return cur, diff, n
        prev = cur
    raise ConvergenceError(f"no convergence to tol={tol} within n <= {n_cap}")


def p_alt_limit(j: int, tol: float = DEFAULT_TOL, n_cap: int = DEFAULT_N_CAP) -> LimitValue:
    """Averaged limit of P^Alt(j | 2n) and P^Alt(j | 2n+1) as n grows."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    vals, err, n = _converge(
        lambda k: [float((p_alt(j, 2 * k) + p_alt(j, 2 * k + 1)) / 2)],
        tol, n_cap, start=j // 2)
    return LimitValue(vals[0], err, 2 * n + 1)


def p_mat_limit(u: int, ell: int, j: int, tol: float = DEFAULT_TOL,
                n_cap: int = DEFAULT_N_CAP) -> LimitValue:
    _check_ell(ell)
    if j < 0:
        raise ValueError("j must be nonnegative")
    vals, err, n = _converge(lambda k: [float(p_mat(u, ell, j, k))], tol, n_cap,
                             start=max(j, u, 0))
    return LimitValue(vals[0], err, n)


def p_alt_limit_distribution(jmax: int, tol: float = DEFAULT_TOL,
                             n_cap: int = DEFAULT_N_CAP):
    """Joint limit over j = 0..jmax, all entries taken at a common size.

    Returns (masses, error, n, tail) where tail is the exact mass above jmax
    of the finite-size distribution the masses were read from.
    """
    vals, err, n = _converge(lambda k: _alt_averaged(k, jmax), tol, n_cap)
    tail = 1 - sum(vals, Fraction(0))
    return [float(v) for v in vals], err, 2 * n + 1, float(tail)


def p_mat_limit_distribution(u: int, ell: int, jmax: int, tol: float = DEFAULT_TOL,
                             n_cap: int = DEFAULT_N_CAP):
    _check_ell(ell)
    vals, err, n = _converge(lambda k: [p_mat(u, ell, j, k) for j in range(jmax + 1)],
                             tol, n_cap, start=max(u, 0))
    tail = 1 - sum(vals, Fraction(0))
    return [float(v) for v in vals], err, n, float(tail)


# -- enumeration oracles ----------------------------------------------------

@njit(cache=True)
def _rank_mod(a, ell):
    """Rank over F_ell of a small integer matrix; ``a`` is overwritten."""
    m, n = a.shape
    r = 0
    for col in range(n):
        piv = -1
        for i in range(r, m):
            if a[i, col] % ell != 0:
                piv = i
                break
        if piv < 0:
            continue
        for k in range(n):
            t = a[r, k]
            a[r, k] = a[piv, k]
            a[piv, k] = t
        inv = 1
        pv = a[r, col] % ell
        while (pv * inv) % ell != 1:
            inv += 1
        for k in range(n):
            a[r, k] = (a[r, k] * inv) % ell
        for i in range(m):
            if i != r:
                f = a[i, col] % ell
                if f != 0:
                    for k in range(n):
                        a[i, k] = (a[i, k] - f * a[r, k]) % ell
        r += 1
        if r == m:
            break
    return r


def _row_tables(ell: int, n: int):
    """Lookup tables for elimination on rows encoded as base-ell integers.

    lead[c]        leading (lowest-index) nonzero column of row c, or -1
    lead_val[c]    the entry in that column
    axpy[c, f, b]  code of row c - f * row b
    normed[c]      row c scaled so its leading entry is 1
    """
    q = ell ** n
    vecs = np.array([[(c // ell ** k) % ell for k in range(n)] for c in range(q)], dtype=np.int64)
    weights = ell ** np.arange(n, dtype=np.int64)
    lead = np.full(q, -1, dtype=np.int64)
    lead_val = np.zeros(q, dtype=np.int64)
    normed = np.zeros(q, dtype=np.int64)
    for c in range(1, q):
        k = int(np.flatnonzero(vecs[c])[0])
        lead[c], lead_val[c] = k, vecs[c, k]
        normed[c] = ((vecs[c] * pow(int(vecs[c, k]), -1, ell)) % ell) @ weights
    axpy = np.zeros((q, ell, q), dtype=np.int64)
    for f in range(ell):
        comb = (vecs[:, None, :] - f * vecs[None, :, :]) % ell
        axpy[:, f, :] = comb @ weights
    return lead, lead_val, normed, axpy


@njit(cache=True)
def _enumerate_rows(m, n, q, lead, lead_val, normed, axpy):
    counts = np.zeros(min(m, n) + 1, dtype=np.int64)
    rows = np.zeros(m, dtype=np.int64)
    basis = np.zeros(n, dtype=np.int64)
    while True:
        basis[:] = 0
        rank = 0
        for i in range(m):
            c = rows[i]
            while c != 0:
                p = lead[c]
                if basis[p] == 0:
                    basis[p] = normed[c]
                    rank += 1
                    break
                c = axpy[c, lead_val[c], basis[p]]
        counts[rank] += 1
        pos = 0
        while pos < m:
            rows[pos] += 1
            if rows[pos] < q:
                break
            rows[pos] = 0
            pos += 1
        if pos == m:
            return counts


@njit(cache=True)
def _enumerate_alternating(ell, n):
    npairs = n * (n - 1) // 2
    total = ell ** npairs
    counts = np.zeros(n + 1, dtype=np.int64)
    a = np.zeros((n, n), dtype=np.int64)
    for code in range(total):
        c = code
        for i in range(n):
            a[i, i] = 0
            for k in range(i + 1, n):
                v = c % ell
                c //= ell
                a[i, k] = v
                a[k, i] = (ell - v) % ell
        counts[_rank_mod(a, ell)] += 1
    return counts


def enumerate_rank_counts(ell: int, m: int, n: int) -> list:
    """Rank histogram of all ell^(m*n) matrices, by direct enumeration.

    Every matrix is visited; its rows are reduced one by one against an
    echelon basis using precomputed row-operation tables.
    """
    _check_ell(ell)
    if m == 0 or n == 0:
        return [ell ** (m * n)] + [0] * min(m, n)
    tables = _row_tables(int(ell), n)
    return [int(c) for c in _enumerate_rows(m, n, ell ** n, *tables)]


def enumerate_alternating_rank_counts(ell: int, n: int) -> list:
    """Rank histogram of all alternating n x n matrices, by enumeration."""
    _check_ell(ell)
    if n == 0:
        return [1]
    return [int(c) for c in _enumerate_alternating(ell, n)]
