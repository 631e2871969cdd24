from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twistranks import ffstats


@given(st.sampled_from([2, 3, 5]), st.integers(0, 6), st.integers(0, 6))
def test_general_counts_sum_to_all_matrices(ell, m, n):
    total = sum(ffstats.count_rank_matrices(ell, m, n, r) for r in range(min(m, n) + 1))
    assert total == ell ** (m * n)


@given(st.integers(0, 9))
def test_alternating_counts_sum_and_parity(n):
    counts = [ffstats.count_rank_alternating(2, n, r) for r in range(0, n + 1, 2)]
    assert sum(counts) == 2 ** (n * (n - 1) // 2)
    for j in range(n + 1):
        if (n - j) % 2:
            assert ffstats.p_alt(j, n) == 0


@given(st.integers(0, 3), st.sampled_from([2, 3]), st.integers(0, 8))
def test_p_mat_is_a_distribution(u, ell, n):
    n = max(n, u)
    probs = [ffstats.p_mat(u, ell, j, n) for j in range(n + 1)]
    assert all(isinstance(p, Fraction) and p >= 0 for p in probs)
    assert sum(probs) == 1
    # an (n-u) x n matrix has kernel dimension at least u
    assert all(p == 0 for p in probs[:min(u, n + 1)])


@pytest.mark.parametrize("ell,m,n", [(2, 2, 3), (3, 2, 2), (2, 3, 3), (5, 1, 2)])
def test_recurrence_matches_enumeration(ell, m, n):
    rec = [ffstats.count_rank_matrices(ell, m, n, r) for r in range(min(m, n) + 1)]
    assert rec == ffstats.enumerate_rank_counts(ell, m, n)


def test_alternating_enumeration_small():
    for n in range(5):
        rec = [ffstats.count_rank_alternating(2, n, r) if r % 2 == 0 else 0 for r in range(n + 1)]
        assert rec == ffstats.enumerate_alternating_rank_counts(2, n)


def test_two_by_two_rank_one_count():
    assert ffstats.count_rank_matrices(2, 2, 2, 1) == 9
    assert ffstats.enumerate_rank_counts(2, 2, 2) == [1, 9, 6]


def test_limits_sum_to_one():
    masses, err, _, tail = ffstats.p_alt_limit_distribution(20)
    assert abs(sum(masses) + tail - 1) < 1e-12
    masses, err, _, tail = ffstats.p_mat_limit_distribution(0, 2, 20)
    assert abs(sum(masses) + tail - 1) < 1e-12


def test_averaged_alternating_limit_values():
    assert abs(ffstats.p_alt_limit(0).value - 0.2097112208976810) < 1e-12
    assert abs(ffstats.p_alt_limit(1).value - 2 * ffstats.p_alt_limit(0).value) < 1e-12


def test_bad_ell_rejected():
    with pytest.raises(ValueError):
        ffstats.p_mat(0, 4, 0, 2)
