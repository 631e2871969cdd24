from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twistranks.grids import (Grid, ModuleElement, RingSpec, basis_bound, basis_construct,
                              bye_ramsey_check, bye_ramsey_construct, closure, closure_by_kernel,
                              delta_element, eta_decompose, eta_element, eta_sum, example_grid,
                              find_basis, format_grid, full_ideal, integer_kernel, is_closed,
                              nib_extend, nib_membership, parse_grid, parse_points, random_member,
                              restrict, zs_basis)
from twistranks.grids.lattice import ZlEchelon
from twistranks.grids.ramsey import NotClosedError, random_battery

from corpus import random_grid, random_ideal, random_subset

RINGS = [RingSpec(2, 1, 4), RingSpec(3, 1, 4), RingSpec(2, 2, 5), RingSpec(5, 1, 3),
         RingSpec(3, 2, 5)]


def _rand_elt(r, rng):
    return tuple(int(rng.integers(m)) for m in r.moduli)


@pytest.mark.parametrize("r", RINGS, ids=lambda r: f"{r.ell}-{r.k0}-{r.B}")
def test_ring_axioms_and_valuation(r):
    rng = np.random.default_rng(r.ell * 100 + r.k0)
    for _ in range(200):
        a, b, c = (_rand_elt(r, rng) for _ in range(3))
        assert r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c))
        assert r.mul(a, b) == r.mul(b, a)
        assert r.add(a, r.neg(a)) == r.zero()
        va, vb = r.valuation(a), r.valuation(b)
        if va + vb < r.B:
            assert r.valuation(r.mul(a, b)) == va + vb
        if va == 0:
            assert r.mul(a, r.unit_inverse(a)) == r.one()
    # omega^e is ell times a unit, and omega^B = 0
    assert r.valuation(r.from_int(r.ell)) == min(r.e, r.B)
    assert r.is_zero(r.omega_power(r.B))


def test_trivial_ring_is_integers_mod_power():
    r = RingSpec(2, 1, 5)
    assert r.moduli == (32,)
    assert r.mul((7,), (9,)) == ((63 % 32),)


def test_echelon_membership():
    ech = ZlEchelon(3, 3)
    ech.insert([3, 0, 6])
    ech.insert([0, 1, 1])
    assert ech.contains([3, 2, 8])
    assert not ech.contains([1, 0, 2])
    assert ech.rank == 2


def test_two_by_two_example():
    g = example_grid("2x2")
    for k in range(5):
        for Y in combinations(g.points, k):
            assert is_closed(g, Y) == (len(Y) != 3)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_closure_matches_kernel_oracle(seed):
    rng = np.random.default_rng(seed)
    g = random_grid(rng)
    Y = random_subset(g, rng)
    c = closure(g, Y)
    assert c == closure_by_kernel(g, Y)
    assert set(Y) <= set(c) and closure(g, c) == c


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_basis_construct_and_bound(seed):
    rng = np.random.default_rng(seed)
    g = random_grid(rng)
    x0 = g.points[int(rng.integers(len(g)))]
    Y = basis_construct(g, x0)
    assert closure(g, Y) == g.points
    assert zs_basis(g, g.S, Y) == []
    assert len(Y) == basis_bound(g)
    C = closure(g, random_subset(g, rng))
    B = find_basis(g, C)
    assert closure(g, B) == C and len(B) <= basis_bound(g)


def test_delta_is_a_zero_sum():
    g = Grid.of_sizes([3, 2, 2])
    d = delta_element(g, g.points[0], g.points[-1])
    assert d.is_zero() is False
    kernel = integer_kernel(g, g.S, g.points)
    assert kernel
    r = g.ring
    values = {x: (r.one(),) for x in g.points}
    # sums along every line vanish, so pairing with a constant vector is zero
    assert all(r.is_zero(v) for v in d.dot(values, (r.zero(),)))


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30, deadline=None)
def test_eta_round_trip(seed):
    rng = np.random.default_rng(seed)
    g = random_grid(rng)
    I, b = random_ideal(g, rng)
    n = random_member(g, I, b, int(rng.integers(1, 3)), rng)
    assert nib_membership(g, I, b, n)
    terms = eta_decompose(g, I, b, n)
    assert eta_sum(g, terms, n.rank) == n
    for t in terms:
        assert nib_membership(g, I, b, eta_element(g, t.U, t.coords, t.m, I, b, n.rank))


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30, deadline=None)
def test_extension_and_closure_bijection(seed):
    rng = np.random.default_rng(seed)
    g = random_grid(rng)
    I, b = random_ideal(g, rng)
    n = random_member(g, I, b, 1, rng)
    Y = random_subset(g, rng)
    Yp = g.check_subset(set(Y) | set(random_subset(g, rng)))
    ext = nib_extend(g, I, b, restrict(n, Y), Yp)
    assert nib_membership(g, I, b, ext) and restrict(ext, Y) == restrict(n, Y)
    FI, top = full_ideal(g), len(g.S)
    m = random_member(g, FI, top, 1, rng)
    C = closure(g, Y)
    assert nib_extend(g, FI, top, restrict(m, Y), C) == restrict(m, C)


def test_nonmember_rejected():
    g = example_grid("2x2")
    # a unit at a single point pairs to a unit with the delta element
    n = ModuleElement(g, 1, {g.points[0]: (g.ring.one(),)})
    assert not nib_membership(g, full_ideal(g), 2, n)


def test_text_format_round_trip():
    g = parse_grid("# a grid\np: a b\nq: c d e\n", ell=3)
    assert g.sizes == (2, 3) and g.ring.ell == 3
    assert parse_grid(format_grid(g), ell=3).axes == g.axes
    Y = parse_points("a,c\n(b, e)\n", g)
    assert Y == (("a", "c"), ("b", "e"))
    with pytest.raises(ValueError):
        parse_points("a,z\n", g)


def test_ramsey_construct_small():
    g = Grid.of_sizes([3, 3], 2)
    res = bye_ramsey_construct(g, 2, seed=3, batteries=20)
    rng = np.random.default_rng(9)
    for _ in range(10):
        Ys, f, c = random_battery(g, res.g, 2, rng)
        assert bye_ramsey_check(g, res.g, Ys, f, c, 2).passed


def test_ramsey_check_requires_closed_sets():
    g = example_grid("2x2")
    h = {x: 0 for x in g.points}
    with pytest.raises(NotClosedError):
        bye_ramsey_check(g, h, [g.points[:3]], h, 0)
