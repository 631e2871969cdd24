"""The modules N_{I,b}(Y) and eta elements, with the Galois action trivial.

N is (K/R)^r; an element killed by omega^B is stored as a vector of R/omega^B
via m <-> omega^(-B) m.  Under this identification m lies in N[omega^k]
exactly when every coordinate has valuation >= B - k, and a . n is computed
in R/omega^B.  All torsion bounds used here are at most B, so nothing is
lost by the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .grid import Grid, RElement, zs_full_generators
from .lattice import ZlEchelon

__all__ = [
    "ModuleElement",
    "EtaTerm",
    "check_ideal",
    "full_ideal",
    "zs_ib_basis",
    "nib_membership",
    "in_torsion",
    "eta_element",
    "eta_decompose",
    "eta_sum",
    "nib_extend",
    "restrict",
    "random_member",
]


@dataclass(frozen=True)
class ModuleElement:
    grid: Grid
    rank: int
    values: dict = field(compare=False)   # point -> tuple of ring elements
    support: tuple = None                 # the Y the element lives on

    def __post_init__(self):
        if self.support is None:
            object.__setattr__(self, "support", self.grid.points)
        r = self.grid.ring
        clean = {}
        for x, m in self.values.items():
            if len(m) != self.rank:
                raise ValueError("module vector has the wrong rank")
            m = tuple(r.reduce(c) for c in m)
            if any(any(c) for c in m):
                clean[tuple(x)] = m
        object.__setattr__(self, "values", clean)

    def __getitem__(self, x):
        return self.values.get(tuple(x), self.zero_vector())

    def zero_vector(self):
        return (self.grid.ring.zero(),) * self.rank

    def __eq__(self, other):
        return (isinstance(other, ModuleElement) and self.rank == other.rank
                and set(self.support) == set(other.support) and self.values == other.values)

    def __hash__(self):
        return hash((self.rank, tuple(sorted(self.values.items()))))

    def is_zero(self) -> bool:
        return not self.values

    def __add__(self, other):
        r = self.grid.ring
        out = dict(self.values)
        for x, m in other.values.items():
            cur = out.get(x, self.zero_vector())
            out[x] = tuple(r.add(a, b) for a, b in zip(cur, m))
        return ModuleElement(self.grid, self.rank, out, self.support)

    def __neg__(self):
        r = self.grid.ring
        return ModuleElement(self.grid, self.rank,
                             {x: tuple(r.neg(c) for c in m) for x, m in self.values.items()},
                             self.support)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, k: int):
        r = self.grid.ring
        return ModuleElement(self.grid, self.rank,
                             {x: tuple(r.scale(k, c) for c in m) for x, m in self.values.items()},
                             self.support)


def check_ideal(grid: Grid, I, b: int) -> frozenset:
    """Validate an ideal of subsets of S (downward closed, nonempty)."""
    I = frozenset(frozenset(U) for U in I)
    if not I:
        raise ValueError("an ideal must be nonempty")
    S = set(grid.S)
    for U in I:
        if not U <= S:
            raise ValueError(f"{set(U)} is not a subset of S")
        if len(U) > b:
            raise ValueError(f"{set(U)} has more than b = {b} elements")
        for k in range(len(U)):
            for V in combinations(sorted(U), k):
                if frozenset(V) not in I:
                    raise ValueError("I is not closed under taking subsets")
    return I


def full_ideal(grid: Grid) -> frozenset:
    S = grid.S
    return frozenset(frozenset(c) for k in range(len(S) + 1) for c in combinations(S, k))


_ZS_CACHE = {}


def zs_ib_basis(grid: Grid, I, b: int, Y=None) -> list:
    """Z_(ell)-generators of zs_{I,b}(Y) = (sum_U omega^(b-|U|) zs(U,X)) cap R^Y.

    Each generator of zs(U, X) is multiplied by omega^(b-|U|+j), j < e, so
    the rows span the sum as a Z_(ell)-module in omega-basis coordinates.
    An echelon on the coordinates outside Y leaves the rows that vanish
    there, which generate the intersection.
    """
    I = check_ideal(grid, I, b)
    Y = grid.points if Y is None else grid.check_subset(Y)
    key = (grid, I, b, Y)
    if key in _ZS_CACHE:
        return _ZS_CACHE[key]
    r = grid.ring
    e = r.e
    ys = set(Y)
    outside = [x for x in grid.points if x not in ys]
    cols = outside + list(Y)
    col = {x: i for i, x in enumerate(cols)}
    nleft = e * len(outside)
    right_mod = max(r.moduli)
    ech = ZlEchelon(r.ell, e * len(cols), nleft=nleft, right_modulus=right_mod)
    for U in sorted(I, key=lambda u: (len(u), sorted(u))):
        gens = zs_full_generators(grid, U)
        for j in range(e):
            w = r.omega_power(b - len(U) + j, exact=True)
            for g in gens:
                row = [0] * (e * len(cols))
                for x, v in g.items():
                    base = e * col[x]
                    for i in range(e):
                        row[base + i] = v * w[i]
                ech.insert(row)
    out = []
    for row in ech.null_rows:
        coeffs = {}
        for x in Y:
            base = e * col[x]
            c = r.reduce(row[base:base + e])
            if any(c):
                coeffs[x] = c
        if coeffs:
            out.append(RElement(r, Y, coeffs))
    _ZS_CACHE[key] = out
    return out


def _dot(a: RElement, n: ModuleElement):
    return a.dot(n.values, n.zero_vector())


def nib_membership(grid: Grid, I, b: int, n: ModuleElement) -> bool:
    """n in N_{I,b}(Y) for Y = n.support."""
    for a in zs_ib_basis(grid, I, b, n.support):
        if any(any(c) for c in _dot(a, n)):
            return False
    return True


def in_torsion(grid: Grid, m, k: int) -> bool:
    """m in N[omega^k]."""
    r = grid.ring
    need = r.B - k
    return all(r.valuation(c) >= need for c in m)


def _max_t(I, U) -> int:
    U = frozenset(U)
    return max(len(V) for V in I if V <= U)


def eta_element(grid: Grid, U, coords, m, I, b: int, rank: int = None) -> ModuleElement:
    """Constant value m on the subgrid {x : x_s = coords_s for s in U}."""
    I = check_ideal(grid, I, b)
    U = tuple(U)
    coords = tuple(coords)
    if len(U) != len(coords):
        raise ValueError("need one coordinate per element of U")
    for s, c in zip(U, coords):
        if c not in grid.axes[s]:
            raise ValueError(f"{c} is not in X_{s}")
    t = _max_t(I, U)
    if b - t > grid.ring.B:
        raise ValueError("b - t exceeds the truncation B")
    if not in_torsion(grid, m, b - t):
        raise ValueError(f"m is not killed by omega^{b - t}")
    fixed = dict(zip(U, coords))
    vals = {x: tuple(m) for x in grid.points
            if all(x[s] == c for s, c in fixed.items())}
    return ModuleElement(grid, len(m) if rank is None else rank, vals)


@dataclass(frozen=True)
class EtaTerm:
    U: tuple
    coords: tuple
    m: tuple


def eta_sum(grid: Grid, terms, rank: int) -> ModuleElement:
    total = ModuleElement(grid, rank, {})
    for t in terms:
        fixed = dict(zip(t.U, t.coords))
        vals = {x: t.m for x in grid.points if all(x[s] == c for s, c in fixed.items())}
        total = total + ModuleElement(grid, rank, vals)
    return total


def eta_decompose(grid: Grid, I, b: int, n: ModuleElement, x0=None) -> list:
    """Eta elements for (I, b) summing to n, by the greedy descent.

    Points are ordered by how many coordinates they share with x0; the
    largest nonzero point x1 is cleared by subtracting the eta element on
    {x : x_s = x1_s for s where x1 differs from x0} with value n(x1).
    """
    I = check_ideal(grid, I, b)
    if set(n.support) != set(grid.points):
        raise ValueError("eta_decompose works on elements over all of X")
    if not nib_membership(grid, I, b, n):
        raise ValueError("n is not in N_{I,b}(X)")
    x0 = grid.points[0] if x0 is None else grid.check_point(x0)

    def key(x):
        return (sum(a == c for a, c in zip(x, x0)), grid.index[x])

    terms = []
    cur = n
    while not cur.is_zero():
        x1 = max(cur.values, key=key)
        U = tuple(s for s in grid.S if x1[s] != x0[s])
        m = cur[x1]
        t = _max_t(I, U)
        assert in_torsion(grid, m, b - t)
        term = EtaTerm(U, tuple(x1[s] for s in U), m)
        terms.append(term)
        cur = cur - eta_sum(grid, [term], n.rank)
    return terms


def restrict(n: ModuleElement, Y) -> ModuleElement:
    Y = n.grid.check_subset(Y)
    ys = set(Y)
    return ModuleElement(n.grid, n.rank, {x: m for x, m in n.values.items() if x in ys}, Y)


def nib_extend(grid: Grid, I, b: int, n: ModuleElement, Yprime) -> ModuleElement:
    """Extend a member of N_{I,b}(Y) to one of N_{I,b}(Y'), one point at a time.

    For a new point x take a generator a of zs_{I,b}(Y + {x}) whose value at
    x has least valuation and solve a(x) n(x) = -(a restricted to Y) . n.
    """
    r = grid.ring
    Y = list(n.support)
    Yp = grid.check_subset(Yprime)
    if not set(Y) <= set(Yp):
        raise ValueError("Y must be contained in Y'")
    cur = n
    for x in Yp:
        if x in cur.support:
            continue
        newY = grid.check_subset(list(cur.support) + [x])
        gens = zs_ib_basis(grid, I, b, newY)
        best = None
        for a in gens:
            v = r.valuation(a[x])
            if v < r.B and (best is None or v < best[0]):
                best = (v, a)
        vals = dict(cur.values)
        if best is not None:
            a = best[1]
            rhs = _dot(a, cur)
            vals[x] = tuple(r.neg(r.divide(c, a[x])) for c in rhs)
        cur = ModuleElement(grid, n.rank, vals, newY)
    return ModuleElement(grid, n.rank, cur.values, Yp)


def random_member(grid: Grid, I, b: int, rank: int, rng, terms: int = 4) -> ModuleElement:
    """A random integer combination of eta elements for (I, b)."""
    I = check_ideal(grid, I, b)
    r = grid.ring
    total = ModuleElement(grid, rank, {})
    subsets = [tuple(c) for k in range(len(grid.S) + 1) for c in combinations(grid.S, k)]
    for _ in range(terms):
        U = subsets[rng.integers(len(subsets))]
        coords = tuple(grid.axes[s][rng.integers(len(grid.axes[s]))] for s in U)
        t = _max_t(I, U)
        shift = r.omega_power(max(0, r.B - (b - t)))
        m = tuple(r.mul(shift, tuple(int(rng.integers(mod)) for mod in r.moduli))
                  for _ in range(rank))
        total = total + eta_element(grid, U, coords, m, I, b, rank)
    return total
