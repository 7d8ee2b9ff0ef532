from collections import Counter
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from cyclegeo.cycle_type import (
    CycleType,
    all_p_cycles,
    enumerate_cycle_types,
    ewens_type,
    fixed_plus_cycle,
    from_counts,
    from_cycle_lengths,
    involution_type,
    parse_counts,
    remove_fixed_points,
)
from cyclegeo.harness.properties import check_cycle_type


def test_from_counts_examples():
    t = from_counts([2, 1])
    assert (t.n, t.t(1), t.t(2)) == (4, 2, 1)
    assert from_counts([0, 0, 2]).n == 6
    assert from_counts([1, 2, 1, 1]).n == 12


def test_trailing_zeros_trimmed_and_validation():
    assert CycleType((2, 1, 0)) == CycleType((2, 1))
    assert CycleType(()).n == 0
    with pytest.raises(ValueError):
        CycleType((1, -1))
    with pytest.raises(ValueError):
        CycleType((1,)).t(0)


def test_parse_counts_forms():
    assert parse_counts("1,2,1,1") == parse_counts("[1,2,1,1]") == from_counts([1, 2, 1, 1])
    assert str(from_counts([1, 0, 1])) == "1,0,1"
    assert from_counts([1, 2]).to_json() == "[1, 2]"


def test_remove_fixed_points_examples():
    assert remove_fixed_points(from_counts([2, 1])) == from_counts([0, 1])
    assert remove_fixed_points(from_counts([2, 1])).n == 2
    assert remove_fixed_points(from_counts([0, 3])) == from_counts([0, 3])
    t = remove_fixed_points(from_counts([1, 2, 1, 1]))
    assert t == from_counts([0, 2, 1, 1]) and t.n == 11


def test_all_p_cycles_examples():
    assert all_p_cycles(6, 2) == from_counts([0, 3])
    assert all_p_cycles(6, 3) == from_counts([0, 0, 2])
    assert all_p_cycles(6, 6) == from_cycle_lengths([6])
    with pytest.raises(ValueError):
        all_p_cycles(7, 2)
    with pytest.raises(ValueError):
        all_p_cycles(6, 0)


def test_involution_examples():
    assert involution_type(10, 0) == from_counts([0, 5])
    assert involution_type(10, 4) == from_counts([4, 3])
    with pytest.raises(ValueError):
        involution_type(9, 4)
    with pytest.raises(ValueError):
        involution_type(4, 6)


def test_fixed_plus_cycle():
    assert fixed_plus_cycle(10, 3) == from_counts([3, 0, 0, 0, 0, 0, 1])
    assert fixed_plus_cycle(5, 4) == from_counts([5])
    assert fixed_plus_cycle(5, 5) == from_counts([5])
    assert fixed_plus_cycle(5, 0) == from_cycle_lengths([5])


def test_class_size_and_partition_count():
    assert from_counts([1, 0, 1]).class_size() == 8
    assert from_cycle_lengths([5]).class_size() == 24
    assert sum(t.class_size() for t in enumerate_cycle_types(6)) == factorial(6)
    assert [len(list(enumerate_cycle_types(n))) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 6), max_size=8))
def test_size_identity_and_idempotence(counts):
    t = from_counts(counts)
    assert t.n == sum(p * c for p, c in enumerate(counts, start=1))
    once = remove_fixed_points(t)
    assert remove_fixed_points(once) == once
    assert once.n == t.n - t.fixed_points


def test_ewens_small_cases():
    rng = np.random.default_rng(3)
    assert all(ewens_type(1, theta, rng) == from_counts([1]) for theta in (0.1, 1.0, 50.0))
    with pytest.raises(ValueError):
        ewens_type(4, 0.0, rng)


def test_ewens_all_fixed_points_monotone_in_theta():
    rng = np.random.default_rng(5)
    all_fixed = from_counts([4])
    freqs = []
    for theta in (0.5, 2.0, 10.0, 100.0):
        hits = sum(ewens_type(4, theta, rng) == all_fixed for _ in range(20_000))
        exact = theta**3 / ((theta + 1) * (theta + 2) * (theta + 3))
        assert abs(hits / 20_000 - exact) < 5 * np.sqrt(exact * (1 - exact) / 20_000) + 1e-9
        freqs.append(hits)
    assert freqs == sorted(freqs)


def test_ewens_theta_one_matches_uniform_s5():
    rng = np.random.default_rng(11)
    types = list(enumerate_cycle_types(5))
    tally = Counter(ewens_type(5, 1.0, rng) for _ in range(100_000))
    observed = [tally[t] for t in types]
    expected = [t.class_size() / 120 * 100_000 for t in types]
    assert sum(observed) == 100_000
    assert chisquare(observed, expected).pvalue > 1e-3


def test_property_suite():
    results = check_cycle_type(2024)
    assert results and all(r.passed for r in results), results
