# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in :mod:`cubik._kernels._pykernels`.

Signatures and return values match the numpy fallback exactly.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def bfs_all_pairs(const int64_t[:] indptr, const int64_t[:] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist_arr = np.full((n, n), -1, dtype=np.int32)
    cdef int32_t[:, :] dist = dist_arr
    queue_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[:] queue = queue_arr
    cdef Py_ssize_t s, head, tail, u, v, k
    with nogil:
        for s in range(n):
            dist[s, s] = 0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if dist[s, v] < 0:
                        dist[s, v] = dist[s, u] + 1
                        queue[tail] = v
                        tail += 1
    return dist_arr


def interval_masks(const int32_t[:, :] dist):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t words = (n + 63) // 64
    out_arr = np.zeros((n, n, max(words, 1)), dtype=np.uint64)
    cdef uint64_t[:, :, :] out = out_arr
    cdef Py_ssize_t u, v, z
    cdef int32_t duv
    with nogil:
        for u in range(n):
            for v in range(u, n):
                duv = dist[u, v]
                for z in range(n):
                    if dist[u, z] + dist[z, v] == duv:
                        out[u, v, z >> 6] |= (<uint64_t>1) << (z & 63)
                if v != u:
                    for z in range(words):
                        out[v, u, z] = out[u, v, z]
    return out_arr


cdef inline int _triple_count(const uint64_t[:, :, :] iv, Py_ssize_t u, Py_ssize_t v,
                              Py_ssize_t w, Py_ssize_t words) noexcept nogil:
    cdef int c = 0
    cdef Py_ssize_t k
    for k in range(words):
        c += __builtin_popcountll(iv[u, v, k] & iv[v, w, k] & iv[u, w, k])
    return c


def median_scan(const uint64_t[:, :, :] intervals):
    """First unordered triple u < v < w whose intervals do not meet in exactly one vertex."""
    cdef Py_ssize_t n = intervals.shape[0]
    cdef Py_ssize_t words = intervals.shape[2]
    cdef Py_ssize_t u, v, w
    cdef int c
    with nogil:
        for u in range(n):
            for v in range(u + 1, n):
                for w in range(v + 1, n):
                    c = _triple_count(intervals, u, v, w, words)
                    if c != 1:
                        with gil:
                            return (int(u), int(v), int(w), c)
    return None


def median_scan_triples(const uint64_t[:, :, :] intervals, const int64_t[:, :] triples):
    cdef Py_ssize_t words = intervals.shape[2]
    cdef Py_ssize_t i, m = triples.shape[0]
    cdef int c
    for i in range(m):
        c = _triple_count(intervals, triples[i, 0], triples[i, 1], triples[i, 2], words)
        if c != 1:
            return (int(triples[i, 0]), int(triples[i, 1]), int(triples[i, 2]), c)
    return None


def consistent_orientations(int n_walls, const uint64_t[:] req_plus, const uint64_t[:] req_minus):
    """All orientation vectors satisfying every upward-closure requirement.

    Bit ``i`` set means wall ``i`` is oriented ``+``.  ``req_plus[2*i + s]`` and
    ``req_minus[2*i + s]`` hold the walls forced to ``+`` and ``-`` once wall ``i``
    takes side ``s`` (0 for ``+``, 1 for ``-``).
    """
    cdef uint64_t total = (<uint64_t>1) << n_walls
    cdef uint64_t s
    cdef int i, side
    cdef bint ok
    found = []
    cdef uint64_t p, q
    for s in range(total):
        ok = True
        for i in range(n_walls):
            side = 0 if (s >> i) & 1 else 1
            p = req_plus[2 * i + side]
            q = req_minus[2 * i + side]
            if (s & p) != p or (s & q) != 0:
                ok = False
                break
        if ok:
            found.append(s)
    return np.asarray(found, dtype=np.uint64)
