# cython: language_level=3
"""Compiled versions of the hot kernels; see ``_pykernels`` for the contracts."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef fused num_t:
    cnp.int64_t
    double


def lis_length(num_t[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, lo, hi, mid, size = 0
    cdef num_t x
    if n == 0:
        return 0
    cdef num_t *tops = <num_t *> malloc(n * sizeof(num_t))
    if tops == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            x = a[i]
            lo = 0
            hi = size
            while lo < hi:
                mid = (lo + hi) >> 1
                if tops[mid] < x:
                    lo = mid + 1
                else:
                    hi = mid
            tops[lo] = x
            if lo == size:
                size += 1
        return size
    finally:
        free(tops)


def rs_shape(num_t[::1] a):
    # one growable buffer per row
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, k, lo, hi, mid, nrows = 0
    cdef num_t x, y
    if n == 0:
        return []
    cdef num_t **rows = <num_t **> malloc(n * sizeof(num_t *))
    cdef Py_ssize_t *lens = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t *caps = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef num_t *grown
    if rows == NULL or lens == NULL or caps == NULL:
        free(rows); free(lens); free(caps)
        raise MemoryError()
    try:
        for i in range(n):
            x = a[i]
            k = 0
            while True:
                if k == nrows:
                    rows[k] = <num_t *> malloc(16 * sizeof(num_t))
                    if rows[k] == NULL:
                        raise MemoryError()
                    caps[k] = 16
                    lens[k] = 0
                    nrows += 1
                lo = 0
                hi = lens[k]
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if rows[k][mid] < x:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo == lens[k]:
                    if lens[k] == caps[k]:
                        grown = <num_t *> malloc(2 * caps[k] * sizeof(num_t))
                        if grown == NULL:
                            raise MemoryError()
                        for mid in range(lens[k]):
                            grown[mid] = rows[k][mid]
                        free(rows[k])
                        rows[k] = grown
                        caps[k] *= 2
                    rows[k][lo] = x
                    lens[k] += 1
                    break
                y = rows[k][lo]
                rows[k][lo] = x
                x = y
                k += 1
        return [lens[k] for k in range(nrows)]
    finally:
        for k in range(nrows):
            free(rows[k])
        free(rows); free(lens); free(caps)


def count_inversions(cnp.int64_t[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef cnp.int64_t below, inv = 0
    cdef cnp.int64_t[::1] tree = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        if a[i] < 0 or a[i] >= n:
            raise ValueError("count_inversions expects a permutation of 0..n-1")
        j = a[i] + 1
        below = 0
        while j > 0:
            below += tree[j]
            j -= j & -j
        inv += i - below
        j = a[i] + 1
        while j <= n:
            tree[j] += 1
            j += j & -j
    return int(inv)


def left_smaller_counts(cnp.int64_t[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef cnp.int64_t below
    cdef cnp.int64_t[::1] tree = np.zeros(n + 1, dtype=np.int64)
    out = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] res = out
    for i in range(n):
        if a[i] < 0 or a[i] >= n:
            raise ValueError("left_smaller_counts expects a permutation of 0..n-1")
        j = a[i]
        below = 0
        while j > 0:
            below += tree[j]
            j -= j & -j
        res[i] = below
        j = a[i] + 1
        while j <= n:
            tree[j] += 1
            j += j & -j
    return out


def records(num_t[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i
    cdef Py_ssize_t high = 0, low = 0
    cdef num_t hi, lo
    if n == 0:
        return 0, 0
    hi = a[0]
    lo = a[0]
    high = 1
    low = 1
    for i in range(1, n):
        if a[i] > hi:
            hi = a[i]
            high += 1
        elif a[i] < lo:
            lo = a[i]
            low += 1
    return high, low


def pattern_counts(cnp.int64_t[::1] a, int r):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, rank, c
    cdef Py_ssize_t nfact = 1
    for i in range(2, r + 1):
        nfact *= i
    counts_arr = np.zeros(nfact, dtype=np.int64)
    cdef cnp.int64_t[::1] counts = counts_arr
    if r > n or r <= 0:
        return counts_arr
    cdef Py_ssize_t *idx = <Py_ssize_t *> malloc(r * sizeof(Py_ssize_t))
    cdef Py_ssize_t *fact = <Py_ssize_t *> malloc(r * sizeof(Py_ssize_t))
    if idx == NULL or fact == NULL:
        free(idx); free(fact)
        raise MemoryError()
    try:
        fact[0] = 1
        for i in range(1, r):
            fact[i] = fact[i - 1] * i
        for i in range(r):
            idx[i] = i
        while True:
            rank = 0
            for i in range(r):
                c = 0
                for j in range(i + 1, r):
                    if a[idx[j]] < a[idx[i]]:
                        c += 1
                rank += c * fact[r - 1 - i]
            counts[rank] += 1
            # advance to the next combination in lexicographic order
            k = r - 1
            while k >= 0 and idx[k] == n - r + k:
                k -= 1
            if k < 0:
                break
            idx[k] += 1
            for j in range(k + 1, r):
                idx[j] = idx[j - 1] + 1
        return counts_arr
    finally:
        free(idx); free(fact)


def cycle_lengths(cnp.int64_t[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t start, i, length
    cdef unsigned char[::1] seen = np.zeros(n, dtype=np.uint8)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = 1
            i = a[i]
            if i < 0 or i >= n:
                raise ValueError("cycle_lengths expects a permutation of 0..n-1")
            length += 1
        out.append(length)
    return out
