import io
from fractions import Fraction
from itertools import permutations
from math import factorial

import numpy as np
import pytest
from scipy.stats import norm

from cyclegeo import stats
from cyclegeo.cycle_type import enumerate_cycle_types, from_counts, from_cycle_lengths
from cyclegeo.geometry import Permutation, cycle_type_of
from cyclegeo.harness.properties import check_oracle
from cyclegeo.oracle import (
    ExactDistribution,
    brute_lds_k,
    brute_lds_k_table,
    brute_lis,
    brute_pattern_count,
    brute_records,
    chi_square_uniformity,
    class_tuples,
    enumerate_class,
    exact_statistic_distribution,
    ks_statistic,
    orbit_size,
    two_sample_chi_square,
)


def test_enumerate_class_examples():
    assert enumerate_class(from_counts([3])) == [Permutation.identity(3)]
    assert len(enumerate_class(from_counts([1, 0, 1]))) == 8
    fives = enumerate_class(from_cycle_lengths([5]))
    assert len(fives) == 24
    assert [p.as_tuple() for p in fives] == sorted(p.as_tuple() for p in fives)
    with pytest.raises(ValueError):
        enumerate_class(from_cycle_lengths([10]))


def test_orbit_size_formula():
    for n in range(1, 9):
        for t in enumerate_cycle_types(n):
            assert orbit_size(t) == t.class_size()
    assert sum(orbit_size(t) for t in enumerate_cycle_types(7)) == factorial(7)


def test_classes_partition_the_group():
    n = 6
    seen = set()
    for t in enumerate_cycle_types(n):
        cls = class_tuples(t)
        assert all(cycle_type_of(p) == t for p in cls)
        seen.update(cls)
    assert len(seen) == factorial(n)


def test_brute_lds_k_examples():
    assert brute_lds_k(Permutation.identity(5), 3) == 3
    assert all(brute_lds_k(Permutation.reversal(6), k) == 6 for k in range(1, 7))
    assert brute_lds_k((2, 1, 4, 3), 1) == 2
    assert brute_lds_k((2, 1, 4, 3), 0) == 0
    with pytest.raises(ValueError):
        brute_lds_k(list(range(1, 17)), 1)


def test_table_agrees_with_scalar_brute_force():
    perms = np.array(list(permutations(range(1, 7))), dtype=np.int64)
    table = brute_lds_k_table(perms)
    for row, expected in zip(perms[::7], table[::7]):
        assert [brute_lds_k(row, k) for k in range(7)] == expected.tolist()


def test_brute_scalars():
    assert brute_lis((3, 1, 2, 5, 4)) == 3
    assert brute_records((2, 1, 3)) == (2, 2)
    assert brute_pattern_count((2, 3, 1), (2, 3, 1)) == 1
    assert brute_pattern_count(range(1, 6), (1, 2)) == 10


def test_exact_distribution_examples():
    d = exact_statistic_distribution(from_counts([4]), "hrec")
    assert d.support == ((4, Fraction(1)),)
    d = exact_statistic_distribution(from_counts([0, 1]), "lis")
    assert d.support == ((1, Fraction(1)),)
    d = exact_statistic_distribution(from_counts([0, 0, 1]), "lds")
    assert d.support == ((2, Fraction(1)),)
    with pytest.raises(ValueError):
        exact_statistic_distribution(from_counts([2]), "nonsense")
    with pytest.raises(ValueError):
        exact_statistic_distribution(from_counts([2]), "pattern:13")


def test_exact_distribution_mean_matches_enumeration():
    t = from_counts([1, 1, 1])
    d = exact_statistic_distribution(t, "pattern:21")
    perms = class_tuples(t)
    assert d.mean() == Fraction(sum(stats.inversions(p) for p in perms), len(perms))
    assert sum(p for _, p in d.support) == 1
    assert d.variance() >= 0
    assert d.prob(-1) == 0
    buf = io.StringIO()
    d.to_csv(buf)
    assert buf.getvalue().splitlines()[0] == "value,prob_num,prob_den"


def test_exact_distribution_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        ExactDistribution(((1, Fraction(1, 2)),))


def test_literal_complement_symmetry_is_false():
    t = from_counts([0, 1])
    assert exact_statistic_distribution(t, "pattern:12").support != exact_statistic_distribution(t, "pattern:21").support


def test_chi_square_examples():
    t = from_counts([1, 0, 1])
    rng = np.random.default_rng(0)
    cls = class_tuples(t)
    constant = [cls[0]] * 400
    assert chi_square_uniformity(constant, t) < 1e-12
    assert chi_square_uniformity([Permutation.identity(3)] * 5, from_counts([3])) == 1.0
    with pytest.raises(ValueError):
        chi_square_uniformity([cls[0]] * 10, t)
    outside = [cls[i % 8] for i in range(399)] + [(1, 2, 3, 4)]
    assert chi_square_uniformity(outside, t) == 0.0
    assert two_sample_chi_square([cls[0]] * 50, [cls[0]] * 50) == 1.0
    idx = rng.integers(0, 8, size=4000)
    assert chi_square_uniformity([cls[i] for i in idx], t) > 1e-4


def test_chi_square_self_test_false_rejection_rate():
    t = from_counts([0, 0, 2])
    cls = np.array(class_tuples(t))
    rng = np.random.default_rng(1)
    rejections = 0
    for _ in range(200):
        samples = cls[rng.integers(0, len(cls), size=2000)]
        rejections += chi_square_uniformity(samples, t) < 1e-3
    assert rejections <= 1


def test_ks_examples():
    rng = np.random.default_rng(2)
    m = 10_000
    assert ks_statistic(rng.standard_normal(m), norm.cdf) < 1.95 / np.sqrt(m)
    assert ks_statistic([0.0], norm.cdf) == pytest.approx(0.5)
    step = lambda x: 1.0 if x >= 3 else 0.0
    assert ks_statistic([3.0, 3.0, 3.0], step) == 0
    with pytest.raises(ValueError):
        ks_statistic([], norm.cdf)


def test_property_suite():
    results = check_oracle(9)
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]
