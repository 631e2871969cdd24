import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import factorint, primerange

from twistranks.arith import (SquarefreeInt, class_group, compose, factor_small,
                              fundamental_discriminant, jacobi, kronecker, legendre,
                              redei_rank4, reduced_forms, selmer_rank_descent,
                              selmer_rank_monsky, squarefree_sieve, symbol_pair)
from twistranks.arith.classgroup import identity_form, inverse
from twistranks.arith.fastclass import class_data
from twistranks.arith.fastselmer import monsky_r2_segment
from twistranks.arith.selmer import on_curve, torsion_images
from twistranks.arith.sieve import count_squarefree, sieve_segment

ODD_PRIMES = list(primerange(3, 200))
squarefree = st.integers(1, 3000).filter(lambda n: all(e == 1 for e in factorint(n).values()))


def _squares_mod(p):
    return {x * x % p for x in range(1, p)}


@given(st.sampled_from(ODD_PRIMES), st.integers(-500, 500))
def test_legendre_matches_square_enumeration(p, a):
    expected = 0 if a % p == 0 else (1 if a % p in _squares_mod(p) else -1)
    assert legendre(a, p) == expected


@given(st.sampled_from(ODD_PRIMES), st.sampled_from(ODD_PRIMES))
def test_quadratic_reciprocity(p, q):
    assume(p != q)
    sign = -1 if p % 4 == 3 and q % 4 == 3 else 1
    assert legendre(p, q) * legendre(q, p) == sign
    assert symbol_pair(p, q) == kronecker(q, p)


@given(st.integers(-1000, 1000), st.integers(1, 500).map(lambda k: 2 * k + 1))
def test_jacobi_is_multiplicative_in_the_modulus(a, n):
    prod = 1
    for p, e in factorint(n).items():
        prod *= legendre(a, p) ** e
    assert jacobi(a, n) == prod


def test_kronecker_at_two():
    assert [kronecker(a, 2) for a in (1, 3, 5, 7, 4)] == [1, -1, -1, 1, 0]
    with pytest.raises(ValueError):
        kronecker(3, 0)


def test_squarefree_sieve_small_and_density():
    assert [s.d for s in squarefree_sieve(10)] == [1, 2, 3, 5, 6, 7, 10]
    assert count_squarefree(10 ** 4) == sum(1 for n in range(1, 10 ** 4 + 1)
                                            if all(e == 1 for e in factorint(n).values()))
    assert abs(count_squarefree(10 ** 6) / 10 ** 6 - 6 / math.pi ** 2) < 1e-5
    both = [s.d for s in squarefree_sieve(6, filter="both-signs")]
    assert both == [-1, 1, -2, 2, -3, 3, -5, 5, -6, 6]


@given(st.integers(1, 10 ** 6), st.integers(1, 2000))
@settings(max_examples=30)
def test_sieve_segment_factors(lo, width):
    vals, fac, cnt = sieve_segment(lo, lo + width)
    ref = [n for n in range(lo, lo + width) if all(e == 1 for e in factorint(n).values())]
    assert vals.tolist() == ref
    for v, row, c in zip(vals.tolist(), fac.tolist(), cnt.tolist()):
        assert math.prod(row[:c]) == v and row[:c] == sorted(factorint(v))


def test_squarefree_int_rejects_squares():
    with pytest.raises(ValueError):
        SquarefreeInt.of(12)
    assert SquarefreeInt.of(-30).primes == (2, 3, 5)


@pytest.mark.parametrize("d,r2", [(1, 0), (2, 0), (3, 0), (10, 0), (5, 1), (6, 1), (7, 1),
                                  (13, 1), (34, 2), (41, 2), (17, 2), (73, 2)])
def test_selmer_known_values(d, r2):
    assert selmer_rank_descent(d).r2 == r2


@given(squarefree)
@settings(max_examples=60, deadline=None)
def test_selmer_rank_parity_by_residue(d):
    r2 = selmer_rank_descent(d).r2
    # root number: even rank parity exactly for d = 1, 2, 3 mod 8
    assert (r2 % 2 == 0) == (d % 8 in (1, 2, 3))


@given(squarefree.filter(lambda n: n % 2))
@settings(max_examples=60, deadline=None)
def test_monsky_matches_descent(d):
    assert selmer_rank_monsky(d).r2 == selmer_rank_descent(d).r2


def test_monsky_segment_matches_python():
    vals, fac, cnt = sieve_segment(1, 3000)
    odd, r2 = monsky_r2_segment(vals, fac, cnt)
    for d, r in zip(odd.tolist(), r2.tolist()):
        assert selmer_rank_monsky(d).r2 == r


def test_torsion_points_lie_on_the_curve():
    for d in (5, 6, 34):
        for x in (0, d, -d):
            assert on_curve(d, x, 0)
    assert len(torsion_images(5)) == 3


def test_monsky_rejects_even_d():
    with pytest.raises(ValueError):
        selmer_rank_monsky(6)


@pytest.mark.parametrize("d,h,factors", [(1, 1, ()), (5, 2, (2,)), (14, 4, (4,)),
                                         (65, 8, (2, 4)), (105, 8, (2, 2, 2)), (23, 3, (3,))])
def test_class_group_known(d, h, factors):
    cg = class_group(d)
    assert cg.h == h and cg.cyclic_factors == factors
    assert math.prod(cg.cyclic_factors) == h


@given(squarefree)
@settings(max_examples=40, deadline=None)
def test_class_group_axioms(d):
    D = fundamental_discriminant(d)
    forms = reduced_forms(D)
    fs = set(forms)
    e = identity_form(D)
    f = forms[len(forms) // 2]
    g = forms[-1]
    assert compose(f, e) == f
    assert compose(f, inverse(f)) == e
    assert compose(f, g) == compose(g, f) and compose(f, g) in fs


@given(squarefree)
@settings(max_examples=80, deadline=None)
def test_genus_theory_and_redei(d):
    cg = class_group(d)
    t = len(factorint(-fundamental_discriminant(d)))
    assert cg.rank(1) == t - 1
    assert redei_rank4(d) == cg.rank(2)


def test_fast_class_kernel_matches_forms():
    ds = [s.d for s in squarefree_sieve(1500)]
    fast = class_data(np.array(ds, dtype=np.int64))
    for d, row in zip(ds, fast.tolist()):
        cg = class_group(d)
        assert tuple(row) == (cg.discriminant, cg.h, cg.rank(1), cg.rank(2), cg.rank(3))


def test_factor_small():
    assert list(factor_small(2 * 3 * 7 * 11)) == [2, 3, 7, 11]
