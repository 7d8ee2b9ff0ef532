"""Planar point-set construction of uniform permutations with a given cycle type.

Index set: ``V_t = {(p, k, l)}`` with ``p`` a cycle length, ``k`` in
``1..t_p`` and ``l`` in ``1..p``. The canonical shift sends ``(p, k, l)`` to
``(p, k, l + 1 mod p)``. Given i.i.d. uniforms ``U_i`` on ``V_t``, the points
``(U_i, U_shift(i))`` read from left to right and ranked from bottom to top
give a uniform permutation with cycle type ``t``.

Indices are stored in canonical order: increasing ``p``, then ``k``, then ``l``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .cycle_type import CycleType, from_cycle_lengths, remove_fixed_points


class IndexV(NamedTuple):
    p: int
    k: int
    l: int


class Permutation:
    """A bijection of ``[n]`` in one-line notation (1-based values)."""

    __slots__ = ("_a",)

    def __init__(self, one_line):
        a = np.array(one_line, dtype=np.int64).reshape(-1)
        n = a.size
        if n and (a.min() < 1 or a.max() > n or np.bincount(a - 1, minlength=n).max() != 1):
            raise ValueError(f"not a permutation of [{n}]: {a.tolist()[:20]}")
        a.setflags(write=False)
        self._a = a

    @classmethod
    def _trusted(cls, a):
        self = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.setflags(write=False)
        self._a = a
        return self

    @classmethod
    def from_zero_based(cls, a):
        return cls(np.asarray(a, dtype=np.int64) + 1)

    @classmethod
    def identity(cls, n):
        return cls._trusted(np.arange(1, n + 1))

    @classmethod
    def reversal(cls, n):
        return cls._trusted(np.arange(n, 0, -1))

    @property
    def one_line(self) -> np.ndarray:
        return self._a

    @property
    def n(self) -> int:
        return self._a.size

    def zero_based(self) -> np.ndarray:
        return self._a - 1

    def __len__(self):
        return self._a.size

    def __iter__(self):
        return iter(self._a.tolist())

    def __getitem__(self, i):
        return int(self._a[i])

    def __call__(self, i: int) -> int:
        """Image of ``i`` (1-based)."""
        return int(self._a[i - 1])

    def __eq__(self, other):
        if isinstance(other, Permutation):
            return np.array_equal(self._a, other._a)
        return NotImplemented

    def __hash__(self):
        return hash(self._a.tobytes())

    def __repr__(self):
        if self.n <= 20:
            return f"Permutation({tuple(self._a.tolist())})"
        return f"Permutation(n={self.n}, head={tuple(self._a[:8].tolist())}...)"

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self._a.tolist())

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self._a)
        inv[self._a - 1] = np.arange(1, self.n + 1)
        return Permutation._trusted(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        if other.n != self.n:
            raise ValueError("size mismatch")
        return Permutation._trusted(self._a[other._a - 1])

    def to_csv_field(self) -> str:
        return ",".join(map(str, self._a.tolist()))


def as_zero_based(perm) -> np.ndarray:
    """0-based int64 one-line array from a Permutation or a 1-based sequence."""
    if isinstance(perm, Permutation):
        return perm.zero_based()
    return np.asarray(perm, dtype=np.int64) - 1


# --- the canonical t-cyclic shift -------------------------------------------------


def index_table(t: CycleType) -> np.ndarray:
    """``(n, 3)`` array of ``(p, k, l)`` in canonical order."""
    rows = [(p, k, l) for p, c in t.items() for k in range(1, c + 1) for l in range(1, p + 1)]
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


def shift_array(t: CycleType) -> np.ndarray:
    """0-based positions: ``s[i]`` is the canonical-order position of the shift of index ``i``."""
    n = t.n
    s = np.empty(n, dtype=np.int64)
    pos = 0
    for p, c in t.items():
        block = np.arange(c * p, dtype=np.int64).reshape(c, p)
        s[pos:pos + c * p] = (pos + np.roll(block, -1, axis=1)).reshape(-1)
        pos += c * p
    return s


def canonical_shift(t: CycleType, idx) -> IndexV:
    p, k, l = (int(v) for v in idx)
    if not (1 <= p and 1 <= k <= t.t(p) and 1 <= l <= p):
        raise ValueError(f"index {(p, k, l)} is not in V_t for t={t}")
    return IndexV(p, k, l % p + 1)


def canonical_permutation(t: CycleType) -> Permutation:
    """The shift as a permutation of ``[n]`` (positions in canonical order)."""
    return Permutation._trusted(shift_array(t) + 1)


# --- point sets -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PointSet:
    """Points ``(x_i, y_i)`` labelled by indices ``(p, k, l)`` of ``V_t``.

    For a full construction ``x = U`` and ``y = U[shift]``. Subsets produced
    by :func:`split_diagonal`, :func:`tripartition` or :meth:`subset` keep the
    labels of the points they contain.
    """

    t: CycleType
    index: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __len__(self):
        return self.x.size

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])

    @property
    def u(self) -> dict:
        """Mapping from index ``(p, k, l)`` to its value ``U`` (the x-coordinate)."""
        return {IndexV(*map(int, row)): float(x) for row, x in zip(self.index, self.x)}

    def on_diagonal(self) -> np.ndarray:
        return self.index[:, 0] == 1

    def subset(self, mask) -> "PointSet":
        mask = np.asarray(mask)
        return PointSet(self.t, self.index[mask], self.x[mask], self.y[mask])

    def to_csv(self, path_or_file):
        def write(fh):
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["p", "k", "l", "x", "y"])
            for (p, k, l), x, y in zip(self.index.tolist(), self.x, self.y):
                w.writerow([p, k, l, f"{x:.17g}", f"{y:.17g}"])

        if hasattr(path_or_file, "write"):
            write(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                write(fh)


def read_point_set_csv(path, t: CycleType) -> PointSet:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return PointSet(t, data[:, :3].astype(np.int64), data[:, 3].copy(), data[:, 4].copy())


def _distinct_uniforms(rng, n):
    # resample the whole vector on a collision so the law stays exchangeable
    while True:
        u = rng.random(n)
        if n < 2 or np.unique(u).size == n:
            return u


def sample_point_set(t: CycleType, rng: np.random.Generator) -> PointSet:
    u = _distinct_uniforms(rng, t.n)
    return PointSet(t, index_table(t), u, u[shift_array(t)])


def standardize(values: Sequence[float]) -> Permutation:
    """The permutation with the same relative order as ``values``."""
    v = np.asarray(values)
    if np.unique(v).size != v.size:
        raise ValueError("standardize needs pairwise distinct values")
    ranks = np.empty(v.size, dtype=np.int64)
    ranks[np.argsort(v, kind="stable")] = np.arange(1, v.size + 1)
    return Permutation._trusted(ranks)


def _xy(points):
    if isinstance(points, PointSet):
        return points.x, points.y
    arr = np.asarray(points, dtype=float).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


def perm_of_points(points) -> Permutation:
    """``tau(i) = j`` when the ``i``-th point from the left is ``j``-th from the bottom."""
    x, y = _xy(points)
    if np.unique(x).size != x.size or np.unique(y).size != y.size:
        raise ValueError("points share an x- or y-coordinate")
    return standardize(y[np.argsort(x)])


def y_in_x_order(ps: PointSet) -> np.ndarray:
    """y-coordinates listed from left to right; same relative order as the permutation."""
    return ps.y[np.argsort(ps.x)]


def sample_t_cyclic(t: CycleType, rng: np.random.Generator) -> Permutation:
    return perm_of_points(sample_point_set(t, rng))


def _ranks_rowwise(a):
    order = np.argsort(a, axis=1)
    ranks = np.empty_like(order)
    rows = np.arange(a.shape[0])[:, None]
    ranks[rows, order] = np.arange(a.shape[1])
    return ranks


def sample_t_cyclic_batch(t: CycleType, size: int, rng: np.random.Generator) -> np.ndarray:
    """``(size, n)`` array of 1-based one-line permutations from independent constructions."""
    n = t.n
    s = shift_array(t)
    u = rng.random((size, n))
    if n > 1:
        srt = np.sort(u, axis=1)
        bad = np.nonzero((np.diff(srt, axis=1) == 0).any(axis=1))[0]
        for row in bad:
            u[row] = _distinct_uniforms(rng, n)
    y = u[:, s]
    order = np.argsort(u, axis=1)
    y_sorted = np.take_along_axis(y, order, axis=1)
    return _ranks_rowwise(y_sorted) + 1


def conjugate_uniform_sampler(t: CycleType, rng: np.random.Generator) -> Permutation:
    """``sigma ∘ s ∘ sigma^{-1}`` with ``sigma`` a Fisher-Yates shuffle and ``s`` the canonical shift."""
    n = t.n
    sigma = rng.permutation(n)
    s = shift_array(t)
    tau = np.empty(n, dtype=np.int64)
    tau[sigma] = sigma[s]
    return Permutation._trusted(tau + 1)


def conjugate_uniform_batch(t: CycleType, size: int, rng: np.random.Generator) -> np.ndarray:
    n = t.n
    s = shift_array(t)
    sigma = rng.permuted(np.tile(np.arange(n, dtype=np.int64), (size, 1)), axis=1)
    tau = np.empty_like(sigma)
    rows = np.arange(size)[:, None]
    tau[rows, sigma] = sigma[:, s]
    return tau + 1


def cycle_type_of(perm) -> CycleType:
    return from_cycle_lengths(kernels.cycle_lengths(as_zero_based(perm)))


# --- decompositions ---------------------------------------------------------------


def split_diagonal(ps: PointSet) -> tuple[PointSet, PointSet]:
    """``(points on the diagonal, the rest)``; the rest is a construction of the fixed-point-free type."""
    diag = ps.on_diagonal()
    off = ps.subset(~diag)
    return ps.subset(diag), PointSet(remove_fixed_points(ps.t), off.index, off.x, off.y)


def tripartition_labels(t: CycleType) -> np.ndarray:
    """Part label (0, 1 or 2) of each canonical index so that cyclic neighbours never share a part.

    Cycles are processed by decreasing length. A cycle of length ``3m + 1``
    gives its extra point to the currently smallest part and a cycle of length
    ``3m + 2`` leaves the currently largest part one short, which keeps the
    three sizes within one of each other.
    """
    if t.fixed_points:
        raise ValueError("tripartition needs a fixed-point-free cycle type")
    labels = np.empty(t.n, dtype=np.int64)
    sizes = [0, 0, 0]
    starts = {}
    pos = 0
    for p, c in t.items():
        starts[p] = pos
        pos += p * c
    for p in sorted((p for p, _ in t.items()), reverse=True):
        for k in range(t.t(p)):
            base = starts[p] + k * p
            m, rest = divmod(p, 3)
            if rest == 0:
                order = [0, 1, 2]
                tail = []
            elif rest == 1:
                extra = min(range(3), key=lambda i: (sizes[i], i))
                others = [i for i in range(3) if i != extra]
                order = [others[0], extra, others[1]]
                tail = [extra]
            else:
                short = max(range(3), key=lambda i: (sizes[i], -i))
                others = [i for i in range(3) if i != short]
                order = [others[0], others[1], short]
                tail = [others[0], others[1]]
            seq = order * m + tail
            labels[base:base + p] = seq
            for part in seq:
                sizes[part] += 1
    return labels


def tripartition(ps: PointSet) -> tuple[PointSet, PointSet, PointSet]:
    if ps.t.fixed_points:
        raise ValueError("tripartition needs a fixed-point-free cycle type")
    labels = tripartition_labels(ps.t)
    return tuple(ps.subset(labels == i) for i in range(3))


def restrict(points, x_interval, y_interval) -> np.ndarray:
    """Points with ``x`` in ``x_interval`` and ``y`` in ``y_interval`` (closed), sorted by ``x``."""
    x, y = _xy(points)
    (a, b), (c, d) = x_interval, y_interval
    for lo, hi in ((a, b), (c, d)):
        if lo < 0 or hi > 1:
            raise ValueError("intervals must lie within [0, 1]")
    mask = (x >= a) & (x <= b) & (y >= c) & (y <= d)
    out = np.column_stack([x[mask], y[mask]])
    return out[np.argsort(out[:, 0])]


# --- dependency graph -------------------------------------------------------------


@dataclass(frozen=True)
class DependencyGraph:
    vertices: tuple[IndexV, ...]
    edges: frozenset

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def max_degree(self) -> int:
        deg = {}
        for e in self.edges:
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        return max(deg.values(), default=0)

    def components(self) -> list[list[IndexV]]:
        adj = {v: [] for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].append(b)
            adj[b].append(a)
        seen, comps = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                w = stack.pop()
                comp.append(w)
                for u in adj[w]:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            comps.append(sorted(comp))
        return comps


def build_dependency_graph(t: CycleType) -> DependencyGraph:
    vertices = tuple(IndexV(*map(int, row)) for row in index_table(t))
    edges = set()
    for v in vertices:
        w = canonical_shift(t, v)
        if w != v:
            edges.add(frozenset((v, w)))
    return DependencyGraph(vertices, frozenset(edges))
