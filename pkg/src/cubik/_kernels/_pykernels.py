"""Pure numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels.pyx`` mirrors them one for one.
"""
from collections import deque

import numpy as np


def bfs_all_pairs(indptr, indices):
    n = len(indptr) - 1
    dist = np.full((n, n), -1, dtype=np.int32)
    adj = [indices[indptr[u]:indptr[u + 1]].tolist() for u in range(n)]
    for s in range(n):
        row = [-1] * n
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for v in adj[u]:
                if row[v] < 0:
                    row[v] = du
                    queue.append(v)
        dist[s] = row
    return dist


def interval_masks(dist):
    n = dist.shape[0]
    words = max((n + 63) // 64, 1)
    out = np.zeros((n, n, words), dtype=np.uint64)
    for u in range(n):
        # on_geodesic[v, z]: z lies on a u-v geodesic
        on_geodesic = (dist[u][None, :] + dist) == dist[u][:, None]
        packed = np.packbits(on_geodesic, axis=1, bitorder="little")
        pad = words * 8 - packed.shape[1]
        if pad:
            packed = np.pad(packed, ((0, 0), (0, pad)))
        out[u] = packed.view(np.uint64).reshape(n, words)
    return out


def median_scan(intervals):
    n = intervals.shape[0]
    for u in range(n):
        for v in range(u + 1, n - 1):
            common = intervals[u, v] & intervals[v, v + 1:] & intervals[u, v + 1:]
            counts = np.bitwise_count(common).sum(axis=1)
            bad = np.flatnonzero(counts != 1)
            if bad.size:
                k = int(bad[0])
                return (u, v, v + 1 + k, int(counts[k]))
    return None


def median_scan_triples(intervals, triples):
    triples = np.asarray(triples, dtype=np.int64)
    if triples.size == 0:
        return None
    u, v, w = triples[:, 0], triples[:, 1], triples[:, 2]
    common = intervals[u, v] & intervals[v, w] & intervals[u, w]
    counts = np.bitwise_count(common).sum(axis=1)
    bad = np.flatnonzero(counts != 1)
    if bad.size:
        k = int(bad[0])
        return (int(u[k]), int(v[k]), int(w[k]), int(counts[k]))
    return None


def consistent_orientations(n_walls, req_plus, req_minus, chunk=1 << 16):
    req_plus = np.asarray(req_plus, dtype=np.uint64)
    req_minus = np.asarray(req_minus, dtype=np.uint64)
    total = 1 << n_walls
    found = []
    for start in range(0, total, chunk):
        s = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        ok = np.ones(s.shape, dtype=bool)
        for i in range(n_walls):
            is_plus = ((s >> np.uint64(i)) & np.uint64(1)).astype(bool)
            for side, mask in ((0, is_plus), (1, ~is_plus)):
                p = req_plus[2 * i + side]
                q = req_minus[2 * i + side]
                violated = ((s & p) != p) | ((s & q) != 0)
                ok &= ~(mask & violated)
        found.append(s[ok])
    return np.concatenate(found) if found else np.zeros(0, dtype=np.uint64)
