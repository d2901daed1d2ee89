"""Median graphs: the 1-skeleta of finite CAT(0) cube complexes.

Vertex sets are Python ``int`` bitsets.  A :class:`MedianGraph` stores one wall
label per edge; every edge is kept oriented from the ``-`` side of its wall to
the ``+`` side, and the halfspaces of each wall are cached at construction.
"""
from collections import deque
from functools import cached_property

import numpy as np

from . import _kernels
from .bitset import full, lowest, members
from .clique import max_clique
from .diagnostics import Diagnostics
from .errors import CorruptLabels, InvariantViolation, NotConvex, NotMedian

EXHAUSTIVE_TRIPLES = 500
SAMPLED_TRIPLES = 100_000
SAMPLE_SEED = 0


def mask_from_bool(arr):
    arr = np.asarray(arr, dtype=bool)
    if not arr.size:
        return 0
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def bool_from_mask(mask, n):
    out = np.zeros(n, dtype=bool)
    for v in members(mask):
        out[v] = True
    return out


class Graph:
    """A simple undirected graph on ``range(n_vertices)``."""

    def __init__(self, n_vertices, edges):
        self.n_vertices = int(n_vertices)
        self.edges = [(int(u), int(v)) for u, v in edges]
        adj = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = [sorted(a) for a in adj]

    @cached_property
    def adj_mask(self):
        return [sum(1 << w for w in set(a)) for a in self.adj]

    def degree(self, v):
        return len(self.adj[v])

    @cached_property
    def dist(self):
        """All-pairs BFS distances (``-1`` where unreachable)."""
        indptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adj])
        indices = np.fromiter((w for a in self.adj for w in a), dtype=np.int64, count=int(indptr[-1]))
        return _kernels.bfs_all_pairs(indptr, indices)

    def components(self, within=None, skip_edge=None):
        """Connected components of the subgraph induced on ``within``.

        ``skip_edge(u, v)`` may veto individual edges.  Components come back as
        bitsets ordered by their least vertex.
        """
        left = full(self.n_vertices) if within is None else within
        out = []
        while left:
            s = lowest(left)
            comp = 1 << s
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if left >> w & 1 and not comp >> w & 1:
                        if skip_edge is not None and skip_edge(u, w):
                            continue
                        comp |= 1 << w
                        queue.append(w)
            out.append(comp)
            left &= ~comp
        return out

    def is_connected(self):
        return self.n_vertices > 0 and len(self.components()) == 1

    def ball(self, v, r):
        return mask_from_bool((self.dist[v] >= 0) & (self.dist[v] <= r))

    def neighbourhood(self, S, r):
        """Metric ``r``-neighbourhood of the vertex set ``S``."""
        verts = members(S)
        if not verts:
            return 0
        d = self.dist[verts]
        d = np.where(d < 0, np.iinfo(np.int32).max, d)
        return mask_from_bool(d.min(axis=0) <= r)

    def set_distance(self, u, S):
        verts = members(S)
        d = self.dist[u, verts]
        return int(d.min())

    def to_json(self):
        return {"n_vertices": self.n_vertices, "edges": [list(e) for e in self.edges]}


class MedianGraph(Graph):
    """A labelled median graph; ``labels[k]`` is the wall crossed by ``edges[k]``.

    The ``+`` side of wall ``w`` is the side containing the second endpoint of
    the first edge labelled ``w``; all edges are then reoriented ``-`` to ``+``.
    """

    def __init__(self, n_vertices, edges, labels, n_walls=None, check=True):
        if len(labels) != len(edges):
            raise CorruptLabels("one wall label per edge required", edges=len(edges), labels=len(labels))
        labels = [int(w) for w in labels]
        self.n_walls = (max(labels) + 1 if labels else 0) if n_walls is None else n_walls
        if labels and (min(labels) < 0 or max(labels) >= self.n_walls):
            raise CorruptLabels("wall label out of range")
        if set(labels) != set(range(self.n_walls)):
            raise CorruptLabels("every wall index must label at least one edge")
        super().__init__(n_vertices, edges)
        self.labels = labels
        self.ultrafilters = None
        self._build_halfspaces()
        if check:
            self._check_labels()

    def _build_halfspaces(self):
        n_walls = self.n_walls
        first = [None] * n_walls
        for k, w in enumerate(self.labels):
            if first[w] is None:
                first[w] = k
        edge_wall = {}
        for (u, v), w in zip(self.edges, self.labels):
            edge_wall.setdefault((u, v), set()).add(w)
            edge_wall.setdefault((v, u), set()).add(w)
        plus = []
        for w in range(n_walls):
            u0, v0 = self.edges[first[w]]
            comp = 1 << v0
            queue = deque([v0])
            while queue:
                u = queue.popleft()
                for x in self.adj[u]:
                    if not comp >> x & 1 and w not in edge_wall[(u, x)]:
                        comp |= 1 << x
                        queue.append(x)
            if comp >> u0 & 1:
                raise CorruptLabels(f"deleting wall {w} leaves one component", wall=w)
            plus.append(comp)
        self.plus = plus
        everything = full(self.n_vertices)
        self.minus = [everything & ~p for p in plus]
        self.edges = [(u, v) if plus[w] >> v & 1 else (v, u) for (u, v), w in zip(self.edges, self.labels)]
        sig = [0] * self.n_vertices
        for w, p in enumerate(plus):
            for v in members(p):
                sig[v] |= 1 << w
        self.signature = sig
        self._index = {s: v for v, s in enumerate(sig)}

    def _check_labels(self):
        for w in range(self.n_walls):
            minus = self.minus[w]
            if not minus or len(self.components(within=minus)) != 1:
                raise CorruptLabels(f"deleting wall {w} does not leave exactly two components", wall=w)
        for k, ((u, v), w) in enumerate(zip(self.edges, self.labels)):
            if not (self.minus[w] >> u & 1 and self.plus[w] >> v & 1):
                raise CorruptLabels(f"edge {k} labelled {w} does not cross wall {w}", edge=k, wall=w)
        if len(self._index) != self.n_vertices:
            raise CorruptLabels("two vertices lie in the same halfspaces")

    # -- halfspaces -----------------------------------------------------

    def halfspace(self, wall, side):
        """Vertex bitset of one side (``'+'``/``'-'`` or 0/1) of ``wall``."""
        if not 0 <= wall < self.n_walls:
            raise CorruptLabels(f"no wall {wall}", wall=wall)
        return self.plus[wall] if side in ("+", 0) else self.minus[wall]

    def oriented(self, a):
        """Halfspace of oriented wall ``a`` (``2*w`` is ``w+``)."""
        return self.plus[a >> 1] if a & 1 == 0 else self.minus[a >> 1]

    @cached_property
    def oriented_halfspaces(self):
        return [self.oriented(a) for a in range(2 * self.n_walls)]

    def separating(self, u, v):
        """Bitset of walls separating ``u`` and ``v``."""
        return self.signature[u] ^ self.signature[v]

    def vertex_of(self, signature):
        return self._index.get(signature)

    def median(self, u, v, w):
        a, b, c = self.signature[u], self.signature[v], self.signature[w]
        m = self._index.get((a & b) | (a & c) | (b & c))
        if m is None:
            raise NotMedian("majority vote does not name a vertex", triple=[u, v, w])
        return m

    @cached_property
    def wall_transverse(self):
        """Neighbour bitmasks over walls: transverse iff all four quarters are nonempty."""
        n = self.n_walls
        adj = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                pi, mi, pj, mj = self.plus[i], self.minus[i], self.plus[j], self.minus[j]
                if pi & pj and pi & mj and mi & pj and mi & mj:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        return adj

    def transverse(self, i, j):
        return bool(self.wall_transverse[i] >> j & 1)

    @cached_property
    def dim(self):
        return len(max_clique(self.wall_transverse)) if self.n_walls else 0

    def carrier(self, wall):
        """``N(wall)``: endpoints of the edges crossing ``wall``."""
        out = 0
        for (u, v), w in zip(self.edges, self.labels):
            if w == wall:
                out |= (1 << u) | (1 << v)
        return out

    @cached_property
    def carriers(self):
        out = [0] * self.n_walls
        for (u, v), w in zip(self.edges, self.labels):
            out[w] |= (1 << u) | (1 << v)
        return out

    def edge_between(self, u, v):
        for k, (a, b) in enumerate(self.edges):
            if (a, b) in ((u, v), (v, u)):
                return k
        return None

    def to_json(self):
        out = super().to_json()
        out["wall_labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data):
        g = Graph(data["n_vertices"], data["edges"])
        if data.get("wall_labels") is None:
            return wall_labels(g)
        return cls(g.n_vertices, g.edges, data["wall_labels"])

    def __repr__(self):
        return f"MedianGraph(n_vertices={self.n_vertices}, edges={len(self.edges)}, walls={self.n_walls})"


# -- validation ---------------------------------------------------------------


def _first_bad_triple(g):
    n = g.n_vertices
    if n < 3:
        return None
    dist = g.dist
    if n <= EXHAUSTIVE_TRIPLES:
        return _kernels.median_scan(_kernels.interval_masks(dist))
    rng = np.random.default_rng(SAMPLE_SEED)
    triples = np.sort(rng.integers(0, n, size=(SAMPLED_TRIPLES, 3)), axis=1)
    triples = triples[(triples[:, 0] < triples[:, 1]) & (triples[:, 1] < triples[:, 2])]
    for start in range(0, len(triples), 2048):
        chunk = triples[start:start + 2048]
        u, v, w = chunk[:, 0], chunk[:, 1], chunk[:, 2]
        du, dv, dw = dist[u], dist[v], dist[w]
        on_uv = du + dv == dist[u, v][:, None]
        on_vw = dv + dw == dist[v, w][:, None]
        on_uw = du + dw == dist[u, w][:, None]
        counts = (on_uv & on_vw & on_uw).sum(axis=1)
        bad = np.flatnonzero(counts != 1)
        if bad.size:
            k = int(bad[0])
            return (int(u[k]), int(v[k]), int(w[k]), int(counts[k]))
    return None


def validate_median(g):
    """Diagnose ``g`` as a median graph; labelled graphs also get their walls checked."""
    report = Diagnostics()
    for k, (u, v) in enumerate(g.edges):
        if u == v:
            report.add("self loop", (k, u), f"edge {k} is a loop at {u}")
            return report
    if len({(min(e), max(e)) for e in g.edges}) != len(g.edges):
        report.add("multiple edge", (), "some pair of vertices is joined twice")
        return report
    if not g.is_connected():
        comps = g.components()
        report.add("disconnected", (lowest(comps[0]), lowest(comps[1])) if len(comps) > 1 else (),
                   "graph is not connected")
        return report
    bad = _first_bad_triple(g)
    if bad is not None:
        u, v, w, c = bad
        report.add("median not unique", (u, v, w), f"triple ({u},{v},{w}) has {c} medians")
    if isinstance(g, MedianGraph):
        for w in range(g.n_walls):
            parts = len(g.components(skip_edge=lambda a, b, w=w: _edge_has_wall(g, a, b, w)))
            if parts != 2:
                report.add("wall components", (w, parts), f"deleting wall {w} leaves {parts} components")
        if report.ok:
            sep = np.array([[(g.signature[u] ^ g.signature[v]).bit_count() for v in range(g.n_vertices)]
                            for u in range(g.n_vertices)]) if g.n_vertices <= 2000 else None
            if sep is not None:
                diff = np.argwhere(sep != g.dist)
                if diff.size:
                    u, v = (int(x) for x in diff[0])
                    report.add("distance mismatch", (u, v),
                               f"d({u},{v}) = {g.dist[u, v]} but {sep[u, v]} walls separate them")
    return report


def _edge_has_wall(g, a, b, w):
    cache = g.__dict__.setdefault("_edge_walls", None)
    if cache is None:
        cache = {}
        for (u, v), lab in zip(g.edges, g.labels):
            cache.setdefault((u, v), set()).add(lab)
            cache.setdefault((v, u), set()).add(lab)
        g.__dict__["_edge_walls"] = cache
    return w in cache[(a, b)]


def wall_labels(g):
    """Label the edges of an unlabelled median graph by Djoković-Winkler classes."""
    if not g.is_connected():
        raise NotMedian("graph is not connected")
    m = len(g.edges)
    if m == 0:
        return MedianGraph(g.n_vertices, [], [], n_walls=0)
    dist = g.dist.astype(np.int64)
    e = np.asarray(g.edges, dtype=np.int64)
    u, v = e[:, 0], e[:, 1]
    # theta[e, f] for e = uv, f = xy: d(u,x) + d(v,y) != d(u,y) + d(v,x)
    theta = (dist[u][:, u] + dist[v][:, v]) != (dist[u][:, v] + dist[v][:, u])
    labels = [-1] * m
    n_walls = 0
    for k in range(m):
        if labels[k] >= 0:
            continue
        cls = np.flatnonzero(theta[k])
        if not theta[np.ix_(cls, cls)].all():
            a = int(cls[np.argwhere(~theta[np.ix_(cls, cls)])[0][0]])
            raise NotMedian("Djoković-Winkler relation is not transitive", edge=k, other=a)
        for f in cls:
            if labels[f] >= 0:
                raise NotMedian("Djoković-Winkler classes overlap", edge=int(f))
            labels[f] = n_walls
        n_walls += 1
    try:
        return MedianGraph(g.n_vertices, g.edges, labels, n_walls=n_walls)
    except CorruptLabels as exc:
        raise NotMedian(f"edge classes do not cut the graph in two: {exc}") from exc


# -- metric and convexity ---------------------------------------------------


def distance(g, u, v):
    d = int(g.dist[u, v])
    if isinstance(g, MedianGraph):
        walls = g.separating(u, v).bit_count()
        if walls != d:
            raise InvariantViolation(f"d({u},{v}) = {d} but {walls} walls separate them")
    return d


def hull(g, S):
    """Intersection of every halfspace containing ``S``."""
    if not S:
        raise NotConvex("hull of the empty set")
    out = full(g.n_vertices)
    for p, m in zip(g.plus, g.minus):
        if S & ~p == 0:
            out &= p
        elif S & ~m == 0:
            out &= m
    return out


def is_convex(g, S):
    return bool(S) and hull(g, S) == S


def interval(g, u, v):
    d = g.dist
    return mask_from_bool(d[u] + d[v] == d[u, v])


def geodesic_closure(g, S):
    """Smallest superset of ``S`` containing every geodesic between its members."""
    out = S
    while True:
        verts = members(out)
        grown = out
        for i, u in enumerate(verts):
            for v in verts[i + 1:]:
                grown |= interval(g, u, v)
        if grown == out:
            return out
        out = grown


def cube_neighbourhood(g, v):
    """Vertices sharing a cube with ``v``: the walls separating them are pairwise transverse."""
    trans = g.wall_transverse
    sig = g.signature
    out = 1 << v
    seen = {v: 0}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        sep = seen[x]
        for y in g.adj[x]:
            if y in seen:
                continue
            step = sig[x] ^ sig[y]
            if step & sep:
                continue
            w = step.bit_length() - 1
            if trans[w] & sep == sep:
                seen[y] = sep | step
                out |= 1 << y
                queue.append(y)
    return out


def cube_contact(g, S):
    """``N(S)``: union of the vertex sets of all cubes meeting ``S``."""
    cache = g.__dict__.setdefault("_cube_nbhd", {})
    out = 0
    for v in members(S):
        if v not in cache:
            cache[v] = cube_neighbourhood(g, v)
        out |= cache[v]
    return out


def thickening(g, S, R):
    """Cubical ``R``-thickening of the vertex set ``S``."""
    if R < 0:
        raise ValueError("thickening radius must be non-negative")
    out = S
    for _ in range(R):
        out = cube_contact(g, out)
    return out


def helly_check(g, sets):
    """Common vertex of pairwise-intersecting convex sets (``None`` if some pair is disjoint)."""
    for k, s in enumerate(sets):
        if not is_convex(g, s):
            raise NotConvex(f"set {k} is not convex", index=k)
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if not sets[i] & sets[j]:
                return None
    common = full(g.n_vertices)
    for s in sets:
        common &= s
    if not common:
        raise InvariantViolation("pairwise intersecting convex sets with empty intersection")
    return lowest(common)


# -- duality ----------------------------------------------------------------


def halfspace_pocset(g):
    """Oriented walls ``2*w`` (``w+``) and ``2*w+1`` (``w-``) ordered by inclusion."""
    from .pocset import Pocset

    hs = g.oriented_halfspaces
    up = []
    for a, h in enumerate(hs):
        mask = 0
        for b, k in enumerate(hs):
            if h & ~k == 0:
                mask |= 1 << b
        up.append(mask)
    return Pocset.from_up(g.n_walls, up)


def dualize_roundtrip(g, cap=None):
    """Certify ``g`` is isomorphic to the cubing of its halfspace pocset.

    Returns ``{"vertex_map": [...], "n_vertices": n, "n_edges": m}`` where
    ``vertex_map[x]`` is the cubing vertex of ``x``'s ultrafilter ``omega_x``.
    """
    from .pocset import cubing

    c, wall_map = cubing(halfspace_pocset(g), cap=cap)
    index = {omega: k for k, omega in enumerate(c.ultrafilters)}
    vmap = []
    for x in range(g.n_vertices):
        omega = 0
        for w in range(g.n_walls):
            if g.plus[w] >> x & 1:
                omega |= 1 << wall_map[w]
        k = index.get(omega)
        if k is None:
            raise InvariantViolation(f"vertex {x} gives a non-ultrafilter")
        vmap.append(k)
    if len(set(vmap)) != g.n_vertices or c.n_vertices != g.n_vertices:
        raise InvariantViolation("vertex map is not a bijection")
    theirs = {(min(e), max(e)): w for e, w in zip(c.edges, c.labels)}
    if len(theirs) != len(g.edges):
        raise InvariantViolation("edge counts differ")
    for (u, v), w in zip(g.edges, g.labels):
        a, b = vmap[u], vmap[v]
        if theirs.get((min(a, b), max(a, b))) != wall_map[w]:
            raise InvariantViolation(f"edge ({u},{v}) does not map to an edge with the same wall")
    return {"vertex_map": vmap, "n_vertices": g.n_vertices, "n_edges": len(g.edges)}


def restrict_walls(g, keep):
    """Cubing of the halfspace pocset restricted to ``keep`` plus the quotient vertex map."""
    from .pocset import cubing

    keep = list(keep)
    p = halfspace_pocset(g).restrict(keep)
    c, _ = cubing(p)
    index = {omega: k for k, omega in enumerate(c.ultrafilters)}
    vmap = []
    for x in range(g.n_vertices):
        omega = 0
        for j, w in enumerate(keep):
            if g.plus[w] >> x & 1:
                omega |= 1 << j
        vmap.append(index[omega])
    return c, vmap


# -- export -----------------------------------------------------------------

_PALETTE = ["red", "blue", "darkgreen", "orange", "purple", "brown", "cyan4", "magenta", "gold3", "gray40"]


def to_dot(g, name="G"):
    lines = [f"graph {name} {{"]
    for v in range(g.n_vertices):
        lines.append(f'  {v} [label="{v}"];')
    labels = getattr(g, "labels", None)
    for k, (u, v) in enumerate(g.edges):
        if labels is None:
            lines.append(f"  {u} -- {v};")
        else:
            w = labels[k]
            lines.append(f'  {u} -- {v} [label="{w}", color="{_PALETTE[w % len(_PALETTE)]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- standard shapes --------------------------------------------------------


def grid_graph(rows, cols):
    """Unlabelled ``rows`` x ``cols`` grid; vertex ``(r, c)`` is ``r*cols + c``."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def hypercube_graph(k):
    return Graph(1 << k, [(v, v | 1 << i) for v in range(1 << k) for i in range(k) if not v >> i & 1])
