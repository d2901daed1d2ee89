"""Independent reference computations used only by the tests.

Nothing here imports the algorithms under test; everything works from plain
lists, sets and breadth-first search.
"""
import itertools
from collections import deque


def closed_pairs(n_walls, relations):
    """Reflexive, involution-symmetric, transitive closure of ``relations`` as a set of pairs."""
    size = 2 * n_walls
    rel = {(a, a) for a in range(size)}
    for a, b in relations:
        rel.add((a, b))
        rel.add((b ^ 1, a ^ 1))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


def literal_transverse(rel, a, b):
    return not ((a, b) in rel or (b, a) in rel or (a, b ^ 1) in rel or (b ^ 1, a) in rel)


def is_ultrafilter_literal(n_walls, rel, omega):
    chosen = {2 * i + (0 if omega >> i & 1 else 1) for i in range(n_walls)}
    return all(b in chosen for a, b in rel if a in chosen)


def all_ultrafilters(n_walls, rel):
    return [o for o in range(1 << n_walls) if is_ultrafilter_literal(n_walls, rel, o)]


def brute_width(n_walls, rel):
    best = 0
    for r in range(n_walls + 1):
        for subset in itertools.combinations(range(n_walls), r):
            if all(literal_transverse(rel, 2 * i, 2 * j) for i, j in itertools.combinations(subset, 2)):
                best = max(best, r)
    return best


def adjacency(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def bfs(adj, s, allowed=None):
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def all_distances(n, edges):
    adj = adjacency(n, edges)
    return [[bfs(adj, s).get(t, -1) for t in range(n)] for s in range(n)]


def components(n, edges, allowed=None, banned_edges=()):
    banned = {frozenset(e) for e in banned_edges}
    kept = [e for e in edges if frozenset(e) not in banned]
    adj = adjacency(n, kept)
    verts = set(range(n)) if allowed is None else set(allowed)
    out = []
    while verts:
        s = min(verts)
        comp = set(bfs(adj, s, verts))
        out.append(comp)
        verts -= comp
    return out


def medians(dist, u, v, w):
    n = len(dist)
    return [z for z in range(n)
            if dist[u][z] + dist[z][v] == dist[u][v]
            and dist[v][z] + dist[z][w] == dist[v][w]
            and dist[u][z] + dist[z][w] == dist[u][w]]


def median_closure(dist, S):
    """Close ``S`` under ``m(x, y, z)`` for ``x, y`` in ``S`` and any vertex ``z``."""
    n = len(dist)
    S = set(S)
    while True:
        grown = set(S)
        for x in S:
            for y in S:
                for z in range(n):
                    grown.update(medians(dist, x, y, z))
        if grown == S:
            return S
        S = grown


def mask(items):
    return sum(1 << i for i in set(items))


def as_set(m):
    return {i for i in range(m.bit_length()) if m >> i & 1}
