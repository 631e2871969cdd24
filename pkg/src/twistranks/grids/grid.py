"""Product grids, zero-sums-in-lines modules, closure and bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd, prod

from .lattice import ZlEchelon
from .ring import RingSpec

__all__ = [
    "Grid",
    "RElement",
    "zs_basis",
    "zs_full_generators",
    "integer_kernel",
    "closure",
    "closure_by_kernel",
    "is_closed",
    "basis_construct",
    "find_basis",
    "delta_element",
    "basis_bound",
]


@dataclass(frozen=True)
class Grid:
    """X = prod_s X_s.  Points are tuples of labels, one per axis."""

    axes: tuple               # tuple of tuples of labels
    ring: RingSpec = None
    names: tuple = None

    def __post_init__(self):
        axes = tuple(tuple(a) for a in self.axes)
        object.__setattr__(self, "axes", axes)
        if not axes:
            raise ValueError("a grid needs at least one axis")
        seen = set()
        for a in axes:
            if not a:
                raise ValueError("every X_s must be nonempty")
            if len(set(a)) != len(a) or seen & set(a):
                raise ValueError("the sets X_s must be disjoint with distinct labels")
            seen |= set(a)
        if self.ring is None:
            object.__setattr__(self, "ring", RingSpec(2, 1, len(axes) + 1))
        if self.names is None:
            object.__setattr__(self, "names", tuple(range(len(axes))))

    @classmethod
    def of_sizes(cls, sizes, ell: int = 2, k0: int = 1, B: int = None) -> "Grid":
        axes = tuple(tuple(f"x{i}{s}" for i in range(n)) for s, n in enumerate(sizes))
        B = len(sizes) + 1 if B is None else B
        return cls(axes, RingSpec(ell, k0, B))

    @property
    def S(self) -> tuple:
        return tuple(range(len(self.axes)))

    @property
    def sizes(self) -> tuple:
        return tuple(len(a) for a in self.axes)

    @cached_property
    def points(self) -> tuple:
        return tuple(product(*self.axes))

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.points)}

    def __len__(self):
        return len(self.points)

    def check_point(self, x):
        if tuple(x) not in self.index:
            raise ValueError(f"{x} is not a point of the grid")
        return tuple(x)

    def check_subset(self, Y):
        return tuple(sorted({self.check_point(y) for y in Y}, key=self.index.__getitem__))

    def line_id(self, s: int, x) -> tuple:
        """The s-line through x, named by x with coordinate s blanked."""
        return (s,) + tuple(c for t, c in enumerate(x) if t != s)

    def lines(self, U) -> list:
        ids = []
        for s in sorted(U):
            others = [a for t, a in enumerate(self.axes) if t != s]
            ids += [(s,) + rest for rest in product(*others)]
        return ids


@dataclass(frozen=True)
class RElement:
    """A coefficient vector a: Y -> R/omega^B."""

    ring: RingSpec
    support: tuple
    coeffs: dict = field(compare=False)

    def __getitem__(self, x):
        return self.coeffs.get(tuple(x), self.ring.zero())

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(v) for v in self.coeffs.values())

    def dot(self, values: dict, zero):
        """a . f for f: Y -> (R/omega^B)^r given as a dict of tuples."""
        r = self.ring
        acc = list(zero)
        for x, a in self.coeffs.items():
            m = values.get(x)
            if m is None:
                continue
            acc = [r.add(s, r.mul(a, c)) for s, c in zip(acc, m)]
        return tuple(acc)

    def integers(self) -> dict:
        """Coefficients as integers (only meaningful when e = 1)."""
        return {x: v[0] for x, v in self.coeffs.items()}


def _constraint_column(grid: Grid, U, x, line_pos) -> list:
    col = [0] * len(line_pos)
    for s in U:
        col[line_pos[grid.line_id(s, x)]] = 1
    return col


def integer_kernel(grid: Grid, U, Y) -> list:
    """Z_(ell)-basis of {a in Z^Y : line sums vanish for s in U}, as dicts."""
    Y = grid.check_subset(Y)
    U = sorted(set(U))
    ell = grid.ring.ell
    lines = grid.lines(U)
    pos = {l: i for i, l in enumerate(lines)}
    n = len(Y)
    ech = ZlEchelon(ell, len(lines) + n, nleft=len(lines))
    for i, y in enumerate(Y):
        row = _constraint_column(grid, U, y, pos) + [0] * n
        row[len(lines) + i] = 1
        ech.insert(row)
    out = []
    for row in ech.null_rows:
        vec = row[len(lines):]
        out.append({y: v for y, v in zip(Y, vec) if v})
    return out


def _relement(grid: Grid, Y, ints: dict) -> RElement:
    r = grid.ring
    return RElement(r, tuple(Y), {x: r.from_int(v) for x, v in ints.items()})


def zs_basis(grid: Grid, U, Y) -> list:
    """Generators of zs(U, Y), reduced to R/omega^B (zero vectors dropped)."""
    Y = grid.check_subset(Y)
    out = []
    for ints in integer_kernel(grid, U, Y):
        a = _relement(grid, Y, ints)
        if not a.is_zero():
            out.append(a)
    return out


def zs_full_generators(grid: Grid, U) -> list:
    """Explicit Z-basis of zs(U, X) for the whole grid.

    It is the tensor product over s of {delta_x - delta_{x_s^0}} (s in U)
    or {delta_x} (s not in U), so entries are 0 and +-1.
    """
    U = set(U)
    factors = []
    for s, axis in enumerate(grid.axes):
        if s in U:
            base = axis[0]
            factors.append([{x: 1, base: -1} for x in axis[1:]])
        else:
            factors.append([{x: 1} for x in axis])
    gens = []
    for combo in product(*factors):
        vec = {}
        for pick in product(*(f.items() for f in combo)):
            pt = tuple(p[0] for p in pick)
            vec[pt] = prod(p[1] for p in pick)
        gens.append(vec)
    return gens


def _span(grid: Grid, Y) -> ZlEchelon:
    lines = grid.lines(grid.S)
    pos = {l: i for i, l in enumerate(lines)}
    ech = ZlEchelon(grid.ring.ell, len(lines))
    for y in Y:
        ech.insert(_constraint_column(grid, grid.S, y, pos))
    return ech, pos


def closure(grid: Grid, Y) -> tuple:
    """The closure of Y.

    x lies in the closure exactly when some a in zs(Y + {x}) has a(x) = 1,
    i.e. when the line-incidence column of x is a Z_(ell)-combination of
    the columns of Y.  The span does not change when such x are added, so a
    single pass reaches the fixpoint.
    """
    Y = grid.check_subset(Y)
    ech, pos = _span(grid, Y)
    ys = set(Y)
    out = [x for x in grid.points
           if x in ys or ech.contains(_constraint_column(grid, grid.S, x, pos))]
    return tuple(out)


def closure_by_kernel(grid: Grid, Y) -> tuple:
    """Closure by iterating the kernel test: x is added when the gcd of the
    x-coordinates of a kernel basis of zs(Y + {x}) is prime to ell."""
    ell = grid.ring.ell
    cur = set(grid.check_subset(Y))
    changed = True
    while changed:
        changed = False
        for x in grid.points:
            if x in cur:
                continue
            g = 0
            for vec in integer_kernel(grid, grid.S, cur | {x}):
                g = gcd(g, vec.get(x, 0))
            if g and g % ell:
                cur.add(x)
                changed = True
    return grid.check_subset(cur)


def is_closed(grid: Grid, Y) -> bool:
    Y = grid.check_subset(Y)
    return closure(grid, Y) == Y


def basis_construct(grid: Grid, x0) -> tuple:
    """Points sharing at least one coordinate with x0."""
    x0 = grid.check_point(x0)
    return tuple(x for x in grid.points if any(a == b for a, b in zip(x, x0)))


def find_basis(grid: Grid, Y) -> tuple:
    """A minimal subset of the closed set Y with closure Y (greedy removal).

    Closure is monotone, so a point that cannot be removed at some stage
    cannot be removed later either and the result is minimal.
    """
    Y = grid.check_subset(Y)
    target = closure(grid, Y)
    if target != Y:
        raise ValueError("find_basis expects a closed set")
    cur = list(Y)
    for y in list(Y):
        trial = [z for z in cur if z != y]
        if closure(grid, trial) == target:
            cur = trial
    return tuple(cur)


def delta_element(grid: Grid, x0, x1) -> RElement:
    x0, x1 = grid.check_point(x0), grid.check_point(x1)

    def ds(s, c):
        if c == x0[s]:
            return 1
        if c == x1[s]:
            return -1
        return 0

    ints = {}
    for x in grid.points:
        v = prod(ds(s, c) for s, c in enumerate(x))
        if v:
            ints[x] = v
    return _relement(grid, grid.points, ints)


def basis_bound(grid: Grid) -> int:
    """|X| - prod(|X_s| - 1), the largest possible size of a basis."""
    return len(grid) - prod(n - 1 for n in grid.sizes)
