from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from twistranks import chains


def test_transition_rows_are_stochastic():
    tm = chains.transition_matrix(chains.ChainSpec.alternating(12))
    for n in range(13):
        assert sum(tm.entries[n]) == 1
        assert all(p == 0 for p in tm.entries[n][n + 1:])


def test_alternating_absorption_from_limit():
    res = chains.absorption_distribution(chains.ChainSpec.alternating(40), "limit")
    assert abs(res.masses[0] - 0.5) < 1e-9 and abs(res.masses[1] - 0.5) < 1e-9
    assert res.escape < 1e-12


@given(st.integers(0, 12))
def test_alternating_absorption_exact_by_parity(n):
    res = chains.absorption_distribution(chains.ChainSpec.alternating(12), {n: Fraction(1)})
    assert res.exact[n % 2] == 1


def test_general_chain_has_absorbing_zero():
    res = chains.absorption_distribution(chains.ChainSpec.general(0, 2, 20), {5: 1})
    assert res.exact == {0: 1}


def test_power_iteration_agrees():
    spec = chains.ChainSpec.alternating(10)
    exact = chains.absorption_distribution(spec, {7: Fraction(1, 2), 8: Fraction(1, 2)})
    approx = chains.power_iteration_absorption(spec, {7: 0.5, 8: 0.5}, steps=300)
    for k, v in exact.masses.items():
        assert abs(approx[k] - v) < 1e-9


@given(st.integers(0, 2 ** 31))
@settings(max_examples=20)
def test_sampled_sequences_are_nonincreasing(seed):
    seq = chains.sample_sequence(chains.ChainSpec.alternating(20), seed, 8)
    assert all(b <= a and (a - b) % 2 == 0 for a, b in zip(seq, seq[1:]))


def test_sampling_is_seeded():
    spec = chains.ChainSpec.general(0, 2, 20)
    assert chains.sample_sequence(spec, 7, 6) == chains.sample_sequence(spec, 7, 6)


def test_prefix_probability_exact():
    spec = chains.ChainSpec.general(0, 2, 10)
    assert chains.prefix_probability(spec, {1: 1}, [1, 0]) == Fraction(1, 2)
    with pytest.raises(ValueError):
        chains.prefix_probability(spec, {1: 1}, [0, 1])


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        chains.ChainSpec("weird")
