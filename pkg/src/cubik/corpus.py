"""Seeded random instances and the named example complexes."""
import random

from .median import Graph, cycle_graph, grid_graph, wall_labels
from .npc import build_amalgam, fold
from .pocset import Pocset, validate_pocset, width


def random_pocset(seed, max_walls=12, max_width=4):
    """Random pocset: random order relations, then more until the width is small enough."""
    rng = random.Random(seed)
    n = rng.randint(1, max_walls)
    relations = []
    p = Pocset(n)

    def attempt():
        nonlocal p
        a, b = rng.randrange(2 * n), rng.randrange(2 * n)
        if a >> 1 == b >> 1 or p.leq(a, b):
            return
        q = Pocset(n, relations + [(a, b)])
        if validate_pocset(q).ok:
            relations.append((a, b))
            p = q

    for _ in range(rng.randint(0, 2 * n)):
        attempt()
    while width(p) > max_width:
        attempt()
    return p


def pocset_corpus(count=200, seed=0, max_walls=12, max_width=4):
    return [random_pocset(seed * 100_003 + k, max_walls, max_width) for k in range(count)]


def free_pocset(k):
    return Pocset(k)


def chain_pocset(k):
    return Pocset(k, [(2 * i, 2 * (i + 1)) for i in range(k - 1)])


def grid3x3():
    """Labelled 3 x 3 grid; vertex ``(x, y)`` is ``3*y + x``."""
    return wall_labels(grid_graph(3, 3))


def square():
    return wall_labels(cycle_graph(4))


def star():
    """Vertices a, b, c, d = 0, 1, 2, 3 with edges a-c, b-c, c-d."""
    return wall_labels(Graph(4, [(0, 2), (1, 2), (2, 3)]))


STAIRCASE_POINTS = (
    [(x, y) for y in (1, 2, 3) for x in (-2, -1, 0)]
    + [(0, 0), (1, 0), (1, 1)]
    + [(1, -1), (2, -1), (2, 0)]
)


def staircase():
    """Square complex: a 2 x 2 block, a middle square and a lower-right square meeting corner to corner.

    Returns the labelled graph and the coordinate of each vertex.
    """
    pts = STAIRCASE_POINTS
    index = {p: i for i, p in enumerate(pts)}
    cells = [(x, y) for x in (-2, -1) for y in (1, 2)] + [(0, 0), (1, -1)]
    edges = set()
    for x, y in cells:
        corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
        for i in range(4):
            u, v = index[corners[i]], index[corners[(i + 1) % 4]]
            edges.add((min(u, v), max(u, v)))
    return wall_labels(Graph(len(pts), sorted(edges))), list(pts)


def genus2():
    return build_amalgam(2, 2, "a1 b1 A1 B1", "a2 b2 A2 B2")


def genus2_folded():
    X = genus2()
    return fold(X, X.handles["e1"], X.handles["e2"])


def random_refinement(seed, pool=None):
    """Seeded ``(graph, h0, cuts)`` meeting the cut preconditions.

    Cuts are hulls of one or two vertices of ``h0``, at least one of them on
    the carrier of ``h0``'s wall; instances whose cuts swallow ``h0`` are skipped.
    """
    from .bitset import members
    from .median import hull
    from .pocset import cubing

    rng = random.Random(seed)
    while True:
        p = random_pocset(rng.randrange(1 << 30)) if pool is None else rng.choice(pool)
        g, _ = cubing(p)
        if g.n_walls == 0:
            continue
        h0 = rng.randrange(2 * g.n_walls)
        half = g.oriented(h0)
        contact = members(g.carriers[h0 >> 1] & half)
        inside = members(half)
        cuts = []
        for _ in range(rng.randint(1, 2)):
            pts = [rng.choice(contact)] + rng.sample(inside, rng.randint(0, 1))
            cuts.append(hull(g, sum(1 << v for v in set(pts))))
        rest = half
        for c in cuts:
            rest &= ~c
        if rest:
            return g, h0, cuts
