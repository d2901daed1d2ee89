"""Wallspaces and the refinement of one halfspace by a family of cuts.

Halfspaces of a :class:`~cubik.median.MedianGraph` are named by oriented wall
indices (``2*w`` is ``w+``, ``2*w + 1`` is ``w-``).  A refinement replaces the
wall of ``h0`` by one wall per class of ``h0`` minus the cuts, and pairs every
carrier with a tag halfspace so that equal carriers with different tags stay
distinct.
"""
import warnings
from collections import deque
from dataclasses import dataclass, field

from .bitset import full, lowest, members
from .diagnostics import Diagnostics
from .errors import InvariantViolation, NotAutomorphism, PreconditionError
from .median import MedianGraph, hull, is_convex
from .pocset import Pocset, cubing, validate_pocset


# -- plain wallspaces -------------------------------------------------------


@dataclass(frozen=True)
class Wallspace:
    ground_size: int
    walls: tuple

    def __post_init__(self):
        everything = full(self.ground_size)
        for k, w in enumerate(self.walls):
            if not w or w == everything:
                raise PreconditionError(f"wall {k} or its complement is empty", wall=k)
            if w & ~everything:
                raise PreconditionError(f"wall {k} leaves the ground set", wall=k)

    @classmethod
    def from_json(cls, data):
        n = int(data["ground_size"])
        walls = tuple(sum(1 << int(x) for x in side) for side in data["walls"])
        return cls(n, walls)

    def to_json(self):
        return {"ground_size": self.ground_size, "walls": [members(w) for w in self.walls]}

    def distinct_walls(self):
        """Indices of walls kept after merging equal or complementary ones."""
        everything = full(self.ground_size)
        seen = {}
        keep = []
        for k, w in enumerate(self.walls):
            key = min(w, everything & ~w)
            if key in seen:
                warnings.warn(f"wall {k} duplicates wall {seen[key]}; merged", stacklevel=2)
                continue
            seen[key] = k
            keep.append(k)
        return keep

    def pocset(self):
        """Inclusion pocset of the distinct walls and their complements."""
        everything = full(self.ground_size)
        keep = self.distinct_walls()
        sides = []
        for k in keep:
            sides += [self.walls[k], everything & ~self.walls[k]]
        up = [sum(1 << b for b, t in enumerate(sides) if s & ~t == 0) for s in sides]
        return Pocset.from_up(len(keep), up), keep

    def omega(self, x, keep=None):
        keep = self.distinct_walls() if keep is None else keep
        return sum(1 << j for j, k in enumerate(keep) if self.walls[k] >> x & 1)


def wallspace_to_cubing(ws, cap=None):
    """Cubing of the wallspace plus the map ``x -> omega_x`` into its vertices."""
    p, keep = ws.pocset()
    g, _ = cubing(p, cap=cap)
    index = {omega: k for k, omega in enumerate(g.ultrafilters)}
    vmap = []
    for x in range(ws.ground_size):
        k = index.get(ws.omega(x, keep))
        if k is None:
            raise InvariantViolation(f"point {x} does not give an ultrafilter")
        vmap.append(k)
    return g, vmap


# -- classes of h0 minus the cuts -------------------------------------------


@dataclass(frozen=True)
class ClassPartition:
    h0: int
    cuts: tuple
    remainder: int
    classes: tuple

    def class_of(self, x):
        for k, c in enumerate(self.classes):
            if c >> x & 1:
                return k
        return None

    def to_json(self):
        return {"h0": self.h0, "cuts": [members(c) for c in self.cuts], "classes": [members(c) for c in self.classes]}


def check_cuts(g, h0, cuts):
    report = Diagnostics()
    half = g.oriented(h0)
    contact = g.carriers[h0 >> 1]
    for k, c in enumerate(cuts):
        if not c:
            report.add("empty cut", (k,), f"cut {k} is empty")
            continue
        if c & ~half:
            report.add("cut leaves halfspace", (k, lowest(c & ~half)), f"cut {k} is not inside h0")
        if not is_convex(g, c):
            report.add("cut not convex", (k,), f"cut {k} is not convex")
        if not c & contact:
            report.add("cut misses wall", (k,), f"cut {k} does not meet the carrier of h0's wall")
    return report


def classes_M0(g, h0, cuts):
    """Partition of ``h0`` minus the cuts: same class iff no single cut separates."""
    cuts = tuple(cuts)
    report = check_cuts(g, h0, cuts)
    if not report.ok:
        raise PreconditionError("cut preconditions violated", problems=report.to_json()["problems"])
    half = g.oriented(h0)
    remainder = half
    for c in cuts:
        remainder &= ~c
    if not remainder:
        raise PreconditionError("cuts exhaust halfspace")
    label = {x: () for x in members(remainder)}
    for c in cuts:
        comps = g.components(within=half & ~c)
        for x in label:
            k = next(i for i, comp in enumerate(comps) if comp >> x & 1)
            label[x] += (k,)
    groups = {}
    for x, key in label.items():
        groups[key] = groups.get(key, 0) | (1 << x)
    classes = tuple(sorted(groups.values(), key=lowest))
    return ClassPartition(h0, cuts, remainder, classes)


# -- automorphisms and cut orbits -------------------------------------------


def check_automorphism(g, perm):
    """Wall permutation induced by ``perm``; raises if ``perm`` is not a label-respecting automorphism."""
    n = g.n_vertices
    if sorted(perm) != list(range(n)):
        raise NotAutomorphism("not a permutation of the vertices")
    where = {(min(e), max(e)): k for k, e in enumerate(g.edges)}
    wall_image = {}
    for k, (u, v) in enumerate(g.edges):
        a, b = perm[u], perm[v]
        j = where.get((min(a, b), max(a, b)))
        if j is None:
            raise NotAutomorphism(f"edge ({u},{v}) maps to a non-edge", edge=[u, v])
        w, image = g.labels[k], g.labels[j]
        if wall_image.setdefault(w, image) != image:
            raise NotAutomorphism(f"edge ({u},{v}) breaks the wall labelling", edge=[u, v])
    return wall_image


def _apply(perm, mask):
    out = 0
    for v in members(mask):
        out |= 1 << perm[v]
    return out


def group_closure(gens, n):
    identity = tuple(range(n))
    seen = {identity}
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for s in gens:
            q = tuple(s[i] for i in p)
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return sorted(seen)


def orbit_of_cut(g, aut_gens, h0, c0):
    """Translates of ``c0`` under the subgroup generated by ``aut_gens`` stabilising ``h0``."""
    gens = [tuple(int(x) for x in s) for s in aut_gens]
    for s in gens:
        if len(s) != g.n_vertices:
            raise NotAutomorphism("generator has the wrong length")
        check_automorphism(g, s)
    half = g.oriented(h0)
    cuts = set()
    for p in group_closure(gens, g.n_vertices):
        if _apply(p, half) == half:
            cuts.add(_apply(p, c0))
    return sorted(cuts, key=lambda c: (lowest(c), c))


# -- the refined pocset -----------------------------------------------------


@dataclass
class RefinedPocset:
    """Pairs ``(carrier, tag)``; wall ``i`` has ``+`` side ``pairs[i]``."""

    graph: MedianGraph
    h0: int
    partition: ClassPartition
    pairs: list
    kinds: list
    pocset: Pocset
    R: int
    k_table: dict = field(default_factory=dict)

    @property
    def n_walls(self):
        return len(self.pairs)

    def carrier(self, a):
        c = self.pairs[a >> 1][0]
        return c if a & 1 == 0 else full(self.graph.n_vertices) & ~c

    def tag(self, a):
        return self.pairs[a >> 1][1] ^ (a & 1)

    def k(self, r):
        if r not in self.k_table:
            self.k_table[r] = k_function(self.graph, r)
        return self.k_table[r]

    def to_json(self):
        return {
            "h0": {"wall": self.h0 >> 1, "side": "-" if self.h0 & 1 else "+"},
            "pairs": [
                {"carrier": members(c), "tag": {"wall": t >> 1, "side": "-" if t & 1 else "+"}, "kind": kind}
                for (c, t), kind in zip(self.pairs, self.kinds)
            ],
            "order": self.pocset.to_json()["order"],
            "R": self.R,
            "k_R": self.k(self.R),
        }


def _diameter(g, S):
    verts = members(S)
    return int(g.dist[verts][:, verts].max()) if verts else 0


def k_function(g, r):
    """Largest number of wall carriers meeting an ``r``-ball about a vertex or an edge."""
    balls = [g.ball(v, r) for v in range(g.n_vertices)]
    carriers = g.carriers

    def hits(ball):
        return sum(1 for c in carriers if c & ball)

    best = max((hits(b) for b in balls), default=0)
    for u, v in g.edges:
        best = max(best, hits(balls[u] | balls[v]))
    return best


def refine_halfspace(g, h0, cuts):
    part = classes_M0(g, h0, cuts)
    everything = full(g.n_vertices)
    wall0 = h0 >> 1
    pairs, kinds = [], []
    for w in range(g.n_walls):
        if w != wall0:
            pairs.append((g.plus[w], 2 * w))
            kinds.append("halfspace")
    for c in part.classes:
        pairs.append((c, h0))
        kinds.append("class")
    sides = []
    for c, _ in pairs:
        sides += [c, everything & ~c]
    up = []
    for a, s in enumerate(sides):
        mask = 1 << a
        for b, t in enumerate(sides):
            if s != t and s & ~t == 0:
                mask |= 1 << b
        up.append(mask)
    p = Pocset.from_up(len(pairs), up)
    report = validate_pocset(p)
    if not report.ok:
        raise InvariantViolation("refined pairs do not form a pocset", problems=report.to_json()["problems"])
    R = max((_diameter(g, c) for c in part.cuts), default=0) + 1
    return RefinedPocset(g, h0, part, pairs, kinds, p, R)


def theta_refined(P, x):
    """Membership ultrafilter: bit ``i`` set iff ``x`` lies in the carrier of ``pairs[i]``."""
    return sum(1 << i for i, (c, _) in enumerate(P.pairs) if c >> x & 1)


def omega_mu(P, mu):
    """Halfspaces strictly containing a carrier chosen by ``mu``, or equal to a carrier tagged by itself."""
    g = P.graph
    hs = g.oriented_halfspaces
    chosen = [2 * i + (0 if mu >> i & 1 else 1) for i in range(P.n_walls)]
    out = 0
    for a in chosen:
        c, t = P.carrier(a), P.tag(a)
        for b, h in enumerate(hs):
            if c & ~h == 0 and (c != h or b == t):
                out |= 1 << b
    return out


def b_mu(P, mu):
    out = full(P.graph.n_vertices)
    hs = P.graph.oriented_halfspaces
    for b in members(omega_mu(P, mu)):
        out &= hs[b]
    return out


def phi_refined(P, mu):
    region = b_mu(P, mu)
    if not region:
        raise InvariantViolation("b_mu is empty")
    return lowest(region)


def hull_excess(P):
    """Per pair carrier ``a``: least ``E`` with ``Hull(a)`` inside the ``E``-neighbourhood of ``a``."""
    g = P.graph
    out = []
    for c, _ in P.pairs:
        out.append(max((g.set_distance(v, c) for v in members(hull(g, c))), default=0))
    return out


def refinement_report(P, cap=None):
    """Check the finite refinement invariants and report the measured constants."""
    from .pocset import is_ultrafilter

    g = P.graph
    kR = P.k(P.R)
    thetas = [theta_refined(P, x) for x in range(g.n_vertices)]
    for x, t in enumerate(thetas):
        if not is_ultrafilter(P.pocset, t):
            raise InvariantViolation(f"theta({x}) is not an ultrafilter")
    crossing = max(((thetas[u] ^ thetas[v]).bit_count() for u, v in g.edges), default=0)
    if crossing > 2 * kR:
        raise InvariantViolation(f"an edge crosses {crossing} > 2k(R) = {2 * kR} pairs")
    for x in range(g.n_vertices):
        for y in range(x + 1, g.n_vertices):
            d = int(g.dist[x, y])
            gap = (thetas[x] ^ thetas[y]).bit_count()
            if not d - 2 * kR <= gap <= kR * d:
                raise InvariantViolation(f"theta distance {gap} outside [{d - 2 * kR}, {kR * d}] for ({x},{y})")
    c, _ = cubing(P.pocset, cap=cap)
    drift = 0
    for mu in c.ultrafilters:
        region = b_mu(P, mu)
        if not region or not is_convex(g, region):
            raise InvariantViolation("b_mu is empty or not convex")
        drift = max(drift, (mu ^ thetas[lowest(region)]).bit_count())
    if drift > 2 * kR * max(len(g.edges), 1):
        raise InvariantViolation("theta(phi(mu)) drifts beyond the instance bound")
    return {
        "R": P.R,
        "k_R": kR,
        "max_edge_crossing": crossing,
        "n_ultrafilters": c.n_vertices,
        "max_theta_phi_drift": drift,
        "hull_excess": hull_excess(P),
    }
