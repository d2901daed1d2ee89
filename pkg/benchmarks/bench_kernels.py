"""Time the compiled kernels against the numpy fallback on the same inputs.

Run ``python benchmarks/bench_kernels.py``; prints one line per kernel.
"""
import argparse
import time

import numpy as np

from cubik import _kernels
from cubik.median import hypercube_graph, grid_graph
from cubik.pocset import Pocset


def csr(g):
    indptr, indices = [0], []
    for nbrs in g.adj:
        indices += sorted(nbrs)
        indptr.append(len(indices))
    return np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def orientation_inputs(n):
    p = Pocset(n, [(2 * i, 2 * (i + 1)) for i in range(0, n - 1, 3)])
    rp = np.zeros(2 * n, dtype=np.uint64)
    rm = np.zeros(2 * n, dtype=np.uint64)
    for a in range(2 * n):
        for b in range(2 * n):
            if p.up[a] >> b & 1:
                target = rm if b & 1 else rp
                target[a] |= np.uint64(1 << (b >> 1))
    return n, rp, rm


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _kernels.compiled is None:
        print("compiled kernels not built; only the numpy fallback is available")
        return
    cases = []
    g = hypercube_graph(9)
    indptr, indices = csr(g)
    cases.append(("bfs_all_pairs hypercube(9)", "bfs_all_pairs", (indptr, indices)))
    dist = np.asarray(_kernels.pure.bfs_all_pairs(*csr(grid_graph(12, 12))), dtype=np.int32)
    cases.append(("interval_masks grid 12x12", "interval_masks", (dist,)))
    iv = np.asarray(_kernels.pure.interval_masks(dist))
    cases.append(("median_scan grid 12x12", "median_scan", (iv,)))
    cases.append(("consistent_orientations 18 walls", "consistent_orientations", orientation_inputs(18)))
    print(f"{'kernel':36s} {'cython s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for label, name, inputs in cases:
        fast = best_of(lambda: getattr(_kernels.compiled, name)(*inputs), args.repeat)
        slow = best_of(lambda: getattr(_kernels.pure, name)(*inputs), args.repeat)
        print(f"{label:36s} {fast:10.4f} {slow:10.4f} {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
