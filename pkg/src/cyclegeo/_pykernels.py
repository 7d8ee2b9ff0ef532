"""Pure-Python implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Inputs are 1-D sequences of pairwise distinct comparable values (usually a
0-based one-line permutation); outputs are plain Python objects.
"""

from bisect import bisect_left
from itertools import combinations
from math import factorial

import numpy as np


def lis_length(a):
    """Length of the longest strictly increasing subsequence (patience sorting)."""
    tops = []
    for x in a:
        k = bisect_left(tops, x)
        if k == len(tops):
            tops.append(x)
        else:
            tops[k] = x
    return len(tops)


def rs_shape(a):
    """Row lengths of the Schensted insertion tableau of ``a``."""
    rows = []
    for x in a:
        for row in rows:
            k = bisect_left(row, x)
            if k == len(row):
                row.append(x)
                x = None
                break
            row[k], x = x, row[k]
        if x is not None:
            rows.append([x])
    return [len(row) for row in rows]


def count_inversions(a):
    """Number of pairs i < j with a[i] > a[j]; ``a`` must be a permutation of 0..n-1."""
    n = len(a)
    tree = [0] * (n + 1)
    inv = 0
    seen = 0
    for x in a:
        # number of earlier values <= x
        i = int(x) + 1
        below = 0
        while i > 0:
            below += tree[i]
            i -= i & -i
        inv += seen - below
        i = int(x) + 1
        while i <= n:
            tree[i] += 1
            i += i & -i
        seen += 1
    return inv


def left_smaller_counts(a):
    """``out[j]`` = number of ``i < j`` with ``a[i] < a[j]``; ``a`` a permutation of 0..n-1."""
    n = len(a)
    tree = [0] * (n + 1)
    out = np.empty(n, dtype=np.int64)
    for j, x in enumerate(a):
        i = int(x)
        below = 0
        while i > 0:
            below += tree[i]
            i -= i & -i
        out[j] = below
        i = int(x) + 1
        while i <= n:
            tree[i] += 1
            i += i & -i
    return out


def records(a):
    """Return ``(high, low)``: counts of left-to-right maxima and minima."""
    high = low = 0
    hi = lo = None
    for x in a:
        if hi is None or x > hi:
            hi = x
            high += 1
        if lo is None or x < lo:
            lo = x
            low += 1
    return high, low


def _lehmer_rank(values):
    r = len(values)
    rank = 0
    for i in range(r):
        c = 0
        for j in range(i + 1, r):
            if values[j] < values[i]:
                c += 1
        rank += c * factorial(r - 1 - i)
    return rank


def pattern_counts(a, r):
    """Occurrence counts of every pattern of size ``r``, indexed by lexicographic rank."""
    counts = np.zeros(factorial(r), dtype=np.int64)
    seq = [a[i] for i in range(len(a))]
    for sub in combinations(seq, r):
        counts[_lehmer_rank(sub)] += 1
    return counts


def cycle_lengths(a):
    """Lengths of the cycles of the 0-based permutation ``a``, in order of smallest element."""
    n = len(a)
    seen = bytearray(n)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = 1
            i = int(a[i])
            length += 1
        out.append(length)
    return out
