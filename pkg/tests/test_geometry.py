import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from cyclegeo.cycle_type import (
    all_p_cycles,
    enumerate_cycle_types,
    ewens_type,
    from_counts,
    from_cycle_lengths,
    remove_fixed_points,
)
from cyclegeo.geometry import (
    IndexV,
    Permutation,
    build_dependency_graph,
    canonical_permutation,
    canonical_shift,
    conjugate_uniform_batch,
    conjugate_uniform_sampler,
    cycle_type_of,
    perm_of_points,
    read_point_set_csv,
    restrict,
    sample_point_set,
    sample_t_cyclic,
    sample_t_cyclic_batch,
    split_diagonal,
    standardize,
    tripartition,
    y_in_x_order,
)
from cyclegeo.harness.properties import check_geometry
from cyclegeo.oracle import chi_square_uniformity, two_sample_chi_square


def test_canonical_shift_examples():
    t = from_counts([1, 0, 1, 0, 2])
    assert canonical_shift(t, (3, 1, 3)) == IndexV(3, 1, 1)
    assert canonical_shift(t, (1, 1, 1)) == IndexV(1, 1, 1)
    assert canonical_shift(t, (5, 2, 2)) == IndexV(5, 2, 3)
    with pytest.raises(ValueError):
        canonical_shift(t, (5, 3, 1))
    with pytest.raises(ValueError):
        canonical_shift(t, (3, 1, 4))


def test_canonical_permutation_has_type():
    for t in enumerate_cycle_types(7):
        assert cycle_type_of(canonical_permutation(t)) == t


def test_permutation_validation_and_algebra():
    with pytest.raises(ValueError):
        Permutation([1, 1, 3])
    with pytest.raises(ValueError):
        Permutation([0, 1])
    p = Permutation([2, 3, 1])
    assert p(1) == 2 and p[0] == 2
    assert p.compose(p.inverse()) == Permutation.identity(3)
    assert p.inverse().as_tuple() == (3, 1, 2)
    assert Permutation.reversal(3).as_tuple() == (3, 2, 1)
    assert p.to_csv_field() == "2,3,1"
    assert hash(p) == hash(Permutation([2, 3, 1]))


def test_standardize_examples():
    assert standardize([3.1, 0.2, 7.7]).as_tuple() == (2, 1, 3)
    assert standardize([0.1, 0.2, 0.3, 0.9]) == Permutation.identity(4)
    assert standardize([5, 4, 3, 2]) == Permutation.reversal(4)
    with pytest.raises(ValueError):
        standardize([0.1, 0.1])


def test_perm_of_points_examples():
    assert perm_of_points([(0.1, 0.9), (0.5, 0.2), (0.8, 0.6)]).as_tuple() == (3, 1, 2)
    assert perm_of_points([(0.3, 0.3), (0.7, 0.7)]) == Permutation.identity(2)
    assert perm_of_points([(0.2, 0.8), (0.8, 0.2)]).as_tuple() == (2, 1)
    with pytest.raises(ValueError):
        perm_of_points([(0.2, 0.8), (0.2, 0.3)])


def test_cycle_type_of_examples():
    assert cycle_type_of(Permutation.identity(4)) == from_counts([4])
    assert cycle_type_of(Permutation([2, 1, 4, 3])) == from_counts([0, 2])
    assert cycle_type_of(Permutation([2, 3, 1])) == from_counts([0, 0, 1])


def test_point_set_examples():
    rng = np.random.default_rng(1)
    ps = sample_point_set(from_counts([5]), rng)
    assert np.array_equal(ps.x, ps.y) and ps.on_diagonal().all()
    ps = sample_point_set(from_counts([0, 1]), rng)
    assert ps.points[0].tolist() == ps.points[1][::-1].tolist()
    ps = sample_point_set(from_cycle_lengths([9]), rng)
    assert not np.any(ps.x == ps.y)
    assert sorted(ps.x) == sorted(ps.y) and len(ps) == 9


def test_point_set_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(2)
    t = from_counts([1, 2, 1, 1])
    ps = sample_point_set(t, rng)
    path = tmp_path / "ps.csv"
    ps.to_csv(str(path))
    assert path.read_text().splitlines()[0] == "p,k,l,x,y"
    back = read_point_set_csv(str(path), t)
    assert np.array_equal(back.x, ps.x) and np.array_equal(back.index, ps.index)
    buf = io.StringIO()
    ps.to_csv(buf)
    assert buf.getvalue() == path.read_text()
    assert ps.u[IndexV(1, 1, 1)] == ps.x[0]


def test_identity_type_always_identity():
    rng = np.random.default_rng(3)
    assert all(sample_t_cyclic(from_counts([6]), rng) == Permutation.identity(6) for _ in range(20))
    assert conjugate_uniform_sampler(from_counts([6]), rng) == Permutation.identity(6)


def test_y_in_x_order_same_pattern():
    rng = np.random.default_rng(4)
    ps = sample_point_set(from_counts([2, 1, 2]), rng)
    assert standardize(y_in_x_order(ps)) == perm_of_points(ps)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 300), st.floats(0.2, 5.0), st.integers(0, 2**32))
def test_sampler_hits_requested_type(n, theta, seed):
    rng = np.random.default_rng(seed)
    t = ewens_type(n, theta, rng)
    assert cycle_type_of(sample_t_cyclic(t, rng)) == t
    assert cycle_type_of(conjugate_uniform_sampler(t, rng)) == t
    batch = sample_t_cyclic_batch(t, 3, rng)
    assert all(cycle_type_of(row) == t for row in batch)


@pytest.mark.parametrize("counts,size", [([1, 0, 1], 8), ([0, 0, 0, 0, 1], 24)])
def test_uniform_on_small_classes(counts, size):
    rng = np.random.default_rng(5)
    t = from_counts(counts)
    samples = sample_t_cyclic_batch(t, 100_000, rng)
    assert len({tuple(r) for r in samples.tolist()}) == size
    assert chi_square_uniformity(samples, t) > 1e-3
    ref = conjugate_uniform_batch(t, 100_000, rng)
    assert chi_square_uniformity(ref, t) > 1e-3
    assert two_sample_chi_square(samples, ref) > 1e-3


def test_scalar_sampler_uniform():
    rng = np.random.default_rng(6)
    t = from_counts([1, 0, 1])
    samples = [sample_t_cyclic(t, rng) for _ in range(8000)]
    assert chi_square_uniformity(samples, t) > 1e-3


def test_split_diagonal_examples():
    rng = np.random.default_rng(7)
    diag, off = split_diagonal(sample_point_set(from_counts([2, 1]), rng))
    assert (len(diag), len(off)) == (2, 2)
    assert off.t == from_counts([0, 1])
    diag, off = split_diagonal(sample_point_set(from_counts([0, 3]), rng))
    assert len(diag) == 0
    t = from_counts([3, 2, 1, 1])
    for _ in range(50):
        _, off = split_diagonal(sample_point_set(t, rng))
        assert cycle_type_of(perm_of_points(off)) == remove_fixed_points(t)


def test_tripartition_examples():
    rng = np.random.default_rng(8)
    parts = tripartition(sample_point_set(from_counts([0, 0, 4]), rng))
    assert [len(p) for p in parts] == [4, 4, 4]
    parts = tripartition(sample_point_set(from_counts([0, 2, 1]), rng))
    assert sorted(len(p) for p in parts) == [2, 2, 3]
    with pytest.raises(ValueError):
        tripartition(sample_point_set(from_counts([1, 1]), rng))


def test_tripartition_parts_uniform_on_grid():
    rng = np.random.default_rng(9)
    t = all_p_cycles(30_000, 2)
    for part in tripartition(sample_point_set(t, rng)):
        cells = np.minimum((part.x * 4).astype(int), 3) * 4 + np.minimum((part.y * 4).astype(int), 3)
        assert chisquare(np.bincount(cells, minlength=16)).pvalue > 1e-3


def test_restrict_examples():
    rng = np.random.default_rng(10)
    ps = sample_point_set(all_p_cycles(20, 2), rng)
    assert len(restrict(ps, (0, 1), (0, 1))) == 20
    assert len(restrict(ps, (0.5, 0.5), (0, 1))) == 0
    inside = restrict(ps, (0, 0.5), (0.5, 1))
    assert np.all(np.diff(inside[:, 0]) > 0)
    with pytest.raises(ValueError):
        restrict(ps, (-0.1, 0.5), (0, 1))


def test_restrict_count_mean():
    rng = np.random.default_rng(11)
    n = 10_000
    t = all_p_cycles(n, 2)
    counts = np.array([len(restrict(sample_point_set(t, rng), (0, 0.5), (0.5, 1))) for _ in range(1000)])
    se = counts.std(ddof=1) / np.sqrt(counts.size)
    assert abs(counts.mean() - n / 4) < 3 * se + 1e-9


def test_dependency_graph_figure_type():
    g = build_dependency_graph(from_counts([2, 1, 2, 0, 1]))
    sizes = sorted(len(c) for c in g.components())
    assert sizes == [1, 1, 2, 3, 3, 5]
    assert len(g.edges) == 1 + 3 + 3 + 5
    assert g.max_degree() == 2
    assert g.degree(IndexV(1, 1, 1)) == 0 and g.degree(IndexV(2, 1, 1)) == 1
    iso = build_dependency_graph(from_counts([6]))
    assert len(iso.edges) == 0 and len(iso.components()) == 6


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=7))
def test_dependency_graph_degree_bound(counts):
    g = build_dependency_graph(from_counts(counts))
    assert g.max_degree() <= 2


def test_property_suite():
    results = check_geometry(31)
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]
