from itertools import permutations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclegeo import stats
from cyclegeo.geometry import Permutation
from cyclegeo.harness.properties import check_stats
from cyclegeo.oracle import brute_lds, brute_lds_k, brute_lis, brute_pattern_count, brute_records

perm_strategy = st.integers(1, 40).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


def test_lis_lds_examples():
    assert stats.lis(Permutation.identity(7)) == 7
    assert stats.lis(Permutation.reversal(7)) == 1
    assert stats.lis((3, 1, 2, 5, 4)) == 3
    assert stats.lds(Permutation.reversal(7)) == 7
    assert stats.lds(Permutation.identity(7)) == 1
    assert stats.lds((3, 1, 2, 5, 4)) == 2


def test_rs_shape_examples():
    assert stats.rs_shape(Permutation.identity(3)).rows == (3,)
    assert stats.rs_shape(Permutation.reversal(3)).rows == (1, 1, 1)
    shape = stats.rs_shape((2, 1, 3))
    assert shape.rows == (2, 1) and shape.columns == (2, 1)
    assert str(stats.rs_shape((2, 1, 3))) == "2 1"
    assert shape.column_prefix_sums().tolist() == [0, 2, 3]


def test_young_diagram_validation():
    with pytest.raises(ValueError):
        stats.YoungDiagram((1, 2))
    with pytest.raises(ValueError):
        stats.YoungDiagram((2, 0))


def test_lds_k_examples():
    assert stats.lds_k(Permutation.identity(6), 2) == 2
    assert stats.lds_k(Permutation.reversal(5), 1) == 5
    assert stats.lds_k((2, 1, 4, 3), 1) == 2
    assert stats.lds_k((2, 1, 4, 3), 2) == 4
    assert stats.lds_k((2, 1, 4, 3), 0) == 0
    assert stats.lds_k((2, 1, 4, 3), 9) == 4
    assert stats.lds_k((2, 1, 4, 3), 1.7) == 2
    with pytest.raises(ValueError):
        stats.lds_k((1, 2), -1)


def test_shape_profile_examples():
    rng = np.random.default_rng(0)
    perm = rng.permutation(400) + 1
    grid = np.linspace(0, 25, 60)
    prof = stats.shape_profile(perm, grid)
    assert prof[0] == 0 and prof[-1] == 1
    assert np.all(np.diff(prof) >= 0)
    full = stats.shape_profile(perm, [k / 20 for k in range(21)])
    increments = np.diff(full)
    assert np.all(increments[1:] <= increments[:-1] + 1e-12)


def test_records_examples():
    assert stats.records(Permutation.identity(5)) == stats.RecordCounts(5, 1)
    assert stats.records(Permutation.reversal(5)) == stats.RecordCounts(1, 5)
    assert stats.records((2, 1, 3)) == stats.RecordCounts(2, 2)


def test_literal_reverse_complement_record_identity_fails():
    tau = (2, 1, 3)
    assert stats.reverse_complement(tau).as_tuple() == (1, 3, 2)
    assert stats.records(tau).high != stats.records(stats.reverse_complement(tau)).low


def test_pattern_of_subset_examples():
    tau = (3, 1, 4, 2)
    assert stats.pattern_of_subset(tau, [1, 2, 3, 4]).as_tuple() == tau
    assert stats.pattern_of_subset(tau, [3]).as_tuple() == (1,)
    assert stats.pattern_of_subset(tau, [1, 3]).as_tuple() == (1, 2)
    with pytest.raises(ValueError):
        stats.pattern_of_subset(tau, [0, 2])


def test_pattern_count_examples():
    n = 9
    assert stats.pattern_count(Permutation.identity(n), (1, 2)) == comb(n, 2)
    assert stats.pattern_count(Permutation.reversal(n), (2, 1)) == comb(n, 2)
    assert stats.pattern_count((2, 3, 1), (2, 3, 1)) == 1
    with pytest.raises(ValueError):
        stats.pattern_count((1, 2), (1, 2, 3))


def test_pattern_count_large_guard():
    perm = np.random.default_rng(1).permutation(201) + 1
    with pytest.raises(ValueError):
        stats.pattern_count(perm, (1, 2, 3, 4))
    assert isinstance(stats.pattern_count(perm, (2, 1, 3)), int)


def test_pattern_counts_size_three_fast_path():
    rng = np.random.default_rng(2)
    for n in (3, 4, 7, 15, 30):
        for _ in range(20):
            perm = rng.permutation(n) + 1
            fast = stats.pattern_counts(perm, 3)
            slow = [brute_pattern_count(perm.tolist(), p) for p in stats.all_patterns(3)]
            assert fast.tolist() == slow


def test_pattern_counts_big_n_exact():
    n = 3000
    assert stats.pattern_counts(np.arange(1, n + 1), 3).tolist() == [comb(n, 3), 0, 0, 0, 0, 0]


def test_pattern_rank_order():
    assert [stats.pattern_rank(p) for p in stats.all_patterns(3)] == list(range(6))
    assert stats.all_patterns(2) == [(1, 2), (2, 1)]


@settings(max_examples=150, deadline=None)
@given(perm_strategy)
def test_statistics_match_brute_force(perm):
    assert stats.lis(perm) == brute_lis(perm)
    assert stats.lds(perm) == brute_lds(perm)
    rc = stats.records(perm)
    assert (rc.high, rc.low) == brute_records(perm)
    assert stats.inversions(perm) == brute_pattern_count(perm, (2, 1))
    shape = stats.rs_shape(perm)
    assert shape.n == len(perm) and shape.rows[0] == stats.lis(perm) and shape.columns[0] == stats.lds(perm)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9).flatmap(lambda n: st.permutations(list(range(1, n + 1)))), st.integers(0, 10))
def test_lds_k_matches_dilworth(perm, k):
    assert stats.lds_k(perm, k) == brute_lds_k(perm, k)


def test_greene_exhaustive_n6():
    for p in permutations(range(1, 7)):
        shape = stats.rs_shape(p)
        assert [stats.lds_k(p, k, shape) for k in range(7)] == [brute_lds_k(p, k) for k in range(7)]


def test_property_suite():
    results = check_stats(5)
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]
