# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels over a CSR-packed event stream.

Signatures and results match ``_pykernels`` exactly.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32


def pair_weights(const i64[::1] indptr, const i32[::1] ids, const i64[::1] counts,
                 const i32[::1] node_of, Py_ssize_t n_nodes):
    out = np.zeros((n_nodes, n_nodes), dtype=np.int64)
    cdef i64[:, ::1] w = out
    cdef Py_ssize_t n_events = indptr.shape[0] - 1
    cdef Py_ssize_t e, j, k, lo, hi
    cdef i32 a, b
    cdef i64 ca, cb, m
    with nogil:
        for e in range(n_events):
            lo = indptr[e]
            hi = indptr[e + 1]
            for j in range(lo, hi):
                a = node_of[ids[j]]
                if a < 0:
                    continue
                ca = counts[j]
                for k in range(j + 1, hi):
                    b = node_of[ids[k]]
                    if b < 0:
                        continue
                    cb = counts[k]
                    m = ca if ca < cb else cb
                    w[a, b] += m
                    w[b, a] += m
    return out


def column_mass(const i64[::1] indptr, const i32[::1] ids, const i64[::1] counts,
                const i32[::1] island_of, Py_ssize_t n_islands):
    cdef Py_ssize_t n_vocab = island_of.shape[0]
    out = np.zeros((n_vocab, n_islands), dtype=np.int64)
    mass_arr = np.zeros(n_islands, dtype=np.int64)
    touched_arr = np.zeros(n_islands, dtype=np.int32)
    cdef i64[:, ::1] based = out
    cdef i64[::1] mass = mass_arr
    cdef i32[::1] touched = touched_arr
    cdef Py_ssize_t n_events = indptr.shape[0] - 1
    cdef Py_ssize_t e, j, lo, hi, n_touched, q
    cdef i32 g, w
    cdef i64 cw, rest
    with nogil:
        for e in range(n_events):
            lo = indptr[e]
            hi = indptr[e + 1]
            n_touched = 0
            for j in range(lo, hi):
                g = island_of[ids[j]]
                if g < 0:
                    continue
                if mass[g] == 0:
                    touched[n_touched] = g
                    n_touched += 1
                mass[g] += counts[j]
            if n_touched == 0:
                continue
            for j in range(lo, hi):
                w = ids[j]
                cw = counts[j]
                for q in range(n_touched):
                    g = touched[q]
                    rest = mass[g]
                    if island_of[w] == g:
                        rest -= cw
                    if rest > 0:
                        based[w, g] += cw if cw < rest else rest
            for q in range(n_touched):
                mass[touched[q]] = 0
    return out


def cluster_hits(const i64[::1] indptr, const i32[::1] ids, const i32[::1] island_of,
                 const i64[::1] island_size, bint require_all):
    cdef Py_ssize_t n_islands = island_size.shape[0]
    out = np.zeros(n_islands, dtype=np.int64)
    seen_arr = np.zeros(n_islands, dtype=np.int64)
    touched_arr = np.zeros(n_islands, dtype=np.int32)
    cdef i64[::1] hits = out
    cdef i64[::1] seen = seen_arr
    cdef i32[::1] touched = touched_arr
    cdef Py_ssize_t n_events = indptr.shape[0] - 1
    cdef Py_ssize_t e, j, n_touched, q
    cdef i32 g
    with nogil:
        for e in range(n_events):
            n_touched = 0
            for j in range(indptr[e], indptr[e + 1]):
                g = island_of[ids[j]]
                if g < 0:
                    continue
                if seen[g] == 0:
                    touched[n_touched] = g
                    n_touched += 1
                seen[g] += 1
            for q in range(n_touched):
                g = touched[q]
                if not require_all or seen[g] == island_size[g]:
                    hits[g] += 1
                seen[g] = 0
    return out


def presence_counts(const i64[::1] indptr, const i32[::1] ids, Py_ssize_t n_vocab,
                    Py_ssize_t lo, Py_ssize_t hi):
    out = np.zeros(n_vocab, dtype=np.int64)
    cdef i64[::1] c = out
    cdef Py_ssize_t e, j
    with nogil:
        for e in range(lo, hi):
            for j in range(indptr[e], indptr[e + 1]):
                c[ids[j]] += 1
    return out
