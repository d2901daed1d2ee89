"""Square complexes, the link condition, edge folds and development of
universal-cover balls.

Geometric edge ``k`` runs ``edges[k] = (u, v)``; its directed edges are ``2*k``
(``u -> v``) and ``2*k + 1`` (``v -> u``), so ``d ^ 1`` is the inverse.  A
square is four directed edges forming a closed path.
"""
import re
from collections import deque
from dataclasses import dataclass, field

from .diagnostics import Diagnostics
from .errors import InvalidComplex, InvariantViolation, RadiusTooSmall
from .median import Graph, MedianGraph, validate_median, wall_labels


def inv(d):
    return d ^ 1


class SquareComplex:
    def __init__(self, n_vertices, edges, squares, handles=None):
        self.n_vertices = int(n_vertices)
        self.edges = [(int(u), int(v)) for u, v in edges]
        self.squares = [tuple(int(d) for d in s) for s in squares]
        self.handles = dict(handles or {})

    def src(self, d):
        return self.edges[d >> 1][d & 1]

    def dst(self, d):
        return self.edges[d >> 1][1 - (d & 1)]

    def outgoing(self, v):
        """Directed edges starting at ``v``, i.e. the vertices of the link at ``v``."""
        return [d for d in range(2 * len(self.edges)) if self.src(d) == v]

    def oriented_squares(self):
        """All eight rotations and reversals of every square, with their square index."""
        out = []
        for k, s in enumerate(self.squares):
            rev = tuple(inv(d) for d in reversed(s))
            for path in (s, rev):
                for i in range(4):
                    out.append((path[i:] + path[:i], k))
        return out

    def corners(self):
        """Link edges as ``(vertex, d_in, d_out, square, corner)``; ``d_in`` is the reverse of the incoming side."""
        out = []
        for k, s in enumerate(self.squares):
            for i in range(4):
                out.append((self.src(s[i]), inv(s[i - 1]), s[i], k, i))
        return out

    def euler_characteristic(self):
        return self.n_vertices - len(self.edges) + len(self.squares)

    def to_json(self):
        directed = []
        for u, v in self.edges:
            directed += [{"from": u, "to": v}, {"from": v, "to": u}]
        out = {"vertices": self.n_vertices, "edges": directed, "squares": [list(s) for s in self.squares]}
        if self.handles:
            out["handles"] = self.handles
        return out

    @classmethod
    def from_json(cls, data):
        directed = data["edges"]
        if len(directed) % 2:
            raise InvalidComplex("directed edges must come in inverse pairs")
        edges = []
        for k in range(0, len(directed), 2):
            a, b = directed[k], directed[k + 1]
            if (a["from"], a["to"]) != (b["to"], b["from"]):
                raise InvalidComplex(f"directed edges {k} and {k + 1} are not inverse", edge=k)
            edges.append((a["from"], a["to"]))
        return cls(data["vertices"], edges, data.get("squares", []), data.get("handles"))


def validate_npc(sq):
    report = Diagnostics()
    n_dir = 2 * len(sq.edges)
    for k, (u, v) in enumerate(sq.edges):
        if not (0 <= u < sq.n_vertices and 0 <= v < sq.n_vertices):
            report.add("edge endpoint", (k,), f"edge {k} has an endpoint outside the vertex range")
    if not report.ok:
        return report
    for k, s in enumerate(sq.squares):
        if len(s) != 4 or any(not 0 <= d < n_dir for d in s):
            report.add("square shape", (k,), f"square {k} is not four directed edges")
            continue
        for i in range(4):
            if sq.dst(s[i]) != sq.src(s[(i + 1) % 4]):
                report.add("square not closed", (k, i), f"square {k} breaks between sides {i} and {i + 1}")
                break
    if not report.ok:
        return report
    seen = {}
    adj = {}
    for v, a, b, k, i in sq.corners():
        if a == b:
            report.add("link loop", (v, a, k), f"corner {i} of square {k} folds direction {a} onto itself")
            continue
        key = (v, min(a, b), max(a, b))
        if key in seen:
            report.add("link multi-edge", (v, a, b), f"squares {seen[key]} and {k} share the corner {a},{b}")
            continue
        seen[key] = k
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    for a, nbrs in sorted(adj.items()):
        for b in sorted(nbrs):
            if b <= a:
                continue
            common = sorted(x for x in nbrs & adj.get(b, set()) if x > b)
            if common:
                report.add("link triangle", (a, b, common[0]), f"directions {a},{b},{common[0]} span a triangle")
                return report
    return report


# -- words and the amalgam --------------------------------------------------

_TOKEN = re.compile(r"^([a-zA-Z])(\d*)$")


def parse_word(word, rose=None):
    """``"a1 b1 A1 B1"`` -> ``[1, 2, -1, -2]``; capital letters are inverses."""
    if not isinstance(word, str):
        return [int(x) for x in word]
    out = []
    for tok in word.split():
        m = _TOKEN.match(tok)
        if not m:
            raise InvalidComplex(f"bad generator {tok!r}")
        letter, digits = m.groups()
        if rose is not None and digits and int(digits) != rose:
            raise InvalidComplex(f"generator {tok!r} does not belong to rose {rose}")
        k = ord(letter.lower()) - ord("a") + 1
        out.append(k if letter.islower() else -k)
    return out


def format_word(word, rose):
    return " ".join((chr(ord("a") + abs(k) - 1) if k > 0 else chr(ord("A") + abs(k) - 1)) + str(rose) for k in word)


def is_cyclically_reduced(word):
    n = len(word)
    return n > 0 and all(word[i] != -word[(i + 1) % n] for i in range(n))


def build_amalgam(m, n, w1, w2):
    """Two roses joined by an annulus of ``2 x L`` squares read along ``w1`` and ``w2``.

    Handles: ``v1``/``v2`` rose vertices, ``middle`` vertices, ``H`` the edges
    crossing the left column, default fold edges ``e1``/``e2`` (directed ids)
    with right-hand endpoints ``y1``/``y2``.
    """
    w1, w2 = parse_word(w1, 1), parse_word(w2, 2)
    if len(w1) != len(w2):
        raise InvalidComplex(f"words have lengths {len(w1)} and {len(w2)}")
    for word, rank, name in ((w1, m, "w1"), (w2, n, "w2")):
        if not is_cyclically_reduced(word):
            raise InvalidComplex(f"{name} is not cyclically reduced")
        if any(not 1 <= abs(k) <= rank for k in word):
            raise InvalidComplex(f"{name} uses a generator outside the rose")
    L = len(w1)
    v1, v2 = 0, 1
    mid = [2 + j for j in range(L)]
    edges = [(v1, v1)] * m + [(v2, v2)] * n
    mid_e = [len(edges) + j for j in range(L)]
    edges += [(mid[j], mid[(j + 1) % L]) for j in range(L)]
    left = [len(edges) + j for j in range(L)]
    edges += [(v1, mid[j]) for j in range(L)]
    right = [len(edges) + j for j in range(L)]
    edges += [(mid[j], v2) for j in range(L)]

    def letter(k, offset):
        return 2 * (offset + abs(k) - 1) + (0 if k > 0 else 1)

    squares = []
    for j in range(L):
        nxt = (j + 1) % L
        squares.append((2 * left[j], 2 * mid_e[j], inv(2 * left[nxt]), inv(letter(w1[j], 0))))
    for j in range(L):
        nxt = (j + 1) % L
        squares.append((2 * right[j], letter(w2[j], m), inv(2 * right[nxt]), inv(2 * mid_e[j])))
    handles = {
        "v1": v1,
        "v2": v2,
        "middle": mid,
        "H": left,
        "e1": 2 * left[0],
        "e2": 2 * left[L // 2],
        "y1": mid[0],
        "y2": mid[L // 2],
    }
    return SquareComplex(2 + L, edges, squares, handles)


# -- folding ----------------------------------------------------------------


def hyperplane_betti(sq, edge):
    """First Betti number of the hyperplane through geometric ``edge``."""
    adj = {}
    links = []
    for s in sq.squares:
        for a, b in ((s[0], s[2]), (s[1], s[3])):
            links.append((a >> 1, b >> 1))
    comp = {edge}
    queue = deque([edge])
    for a, b in links:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    while queue:
        e = queue.popleft()
        for f in adj.get(e, []):
            if f not in comp:
                comp.add(f)
                queue.append(f)
    n_links = sum(1 for a, b in links if a in comp)
    return n_links - len(comp) + 1


@dataclass
class FoldResult:
    complex: SquareComplex
    edge: int
    vertex: int
    betti_before: int
    betti_after: int

    def to_json(self):
        return {
            "complex": self.complex.to_json(),
            "folded_edge": self.edge,
            "folded_vertex": self.vertex,
            "hyperplane_betti_before": self.betti_before,
            "hyperplane_betti_after": self.betti_after,
            "euler_characteristic": self.complex.euler_characteristic(),
        }


def fold(sq, e1, e2):
    """Glue directed edges ``e1`` and ``e2`` (same initial vertex) and their terminal vertices."""
    if e1 >> 1 == e2 >> 1:
        raise InvalidComplex("fold needs two distinct edges")
    if sq.src(e1) != sq.src(e2):
        raise InvalidComplex("folded edges must share their initial vertex")
    before = hyperplane_betti(sq, e1 >> 1)
    y1, y2 = sq.dst(e1), sq.dst(e2)
    keep_v = [v for v in range(sq.n_vertices) if v != y2 or y1 == y2]
    vnew = {v: i for i, v in enumerate(keep_v)}
    if y1 != y2:
        vnew[y2] = vnew[y1]
    gone = e2 >> 1
    keep_e = [k for k in range(len(sq.edges)) if k != gone]
    enew = {k: i for i, k in enumerate(keep_e)}

    def redirect(d):
        if d >> 1 == gone:
            # e2 and e1 point the same way once identified
            same = (d & 1) == (e2 & 1)
            return 2 * enew[e1 >> 1] + ((e1 & 1) if same else 1 - (e1 & 1))
        return 2 * enew[d >> 1] + (d & 1)

    edges = [(vnew[sq.edges[k][0]], vnew[sq.edges[k][1]]) for k in keep_e]
    squares = [tuple(redirect(d) for d in s) for s in sq.squares]
    handles = {"e'": redirect(e1), "y'": vnew[y1]}
    out = SquareComplex(len(keep_v), edges, squares, handles)
    report = validate_npc(out)
    if not report.ok:
        raise InvalidComplex("fold breaks the link condition", problems=report.to_json()["problems"])
    after = hyperplane_betti(out, redirect(e1) >> 1)
    return FoldResult(out, redirect(e1), vnew[y1], before, after)


def torus():
    return SquareComplex(1, [(0, 0), (0, 0)], [(0, 2, 1, 3)])


def rose(k):
    return SquareComplex(1, [(0, 0)] * k, [])


# -- development --------------------------------------------------------------


@dataclass
class DevelopedBall:
    complex: SquareComplex
    base: int
    R: int
    proj: list
    depth: list
    out: list
    graph: Graph
    edge_label: list
    squares: list = field(default_factory=list)
    _inner: tuple = None

    @property
    def n_vertices(self):
        return len(self.proj)

    def inner(self):
        """``(MedianGraph, ball_vertex_list)`` of the radius ``R - 2`` ball."""
        if self._inner is None:
            keep = [x for x in range(self.n_vertices) if self.depth[x] <= self.R - 2]
            index = {x: i for i, x in enumerate(keep)}
            edges = [(index[u], index[v]) for u, v in self.graph.edges if u in index and v in index]
            g = Graph(len(keep), edges)
            report = validate_median(g)
            if not report.ok:
                raise InvariantViolation("inner ball is not median", problems=report.to_json()["problems"])
            self._inner = (wall_labels(g), keep)
        return self._inner

    def to_json(self):
        return {
            "base": self.base,
            "radius": self.R,
            "n_vertices": self.n_vertices,
            "n_edges": len(self.graph.edges),
            "n_squares": len(self.squares),
            "vertices": [{"proj": p, "depth": d} for p, d in zip(self.proj, self.depth)],
            "edges": [list(e) for e in self.graph.edges],
            "edge_labels": list(self.edge_label),
            "boundary": [x for x in range(self.n_vertices) if self.depth[x] == self.R],
        }


def _completion_table(sq):
    """``(v, back, d) -> [(p1, p2)]``: squares at ``v`` spanned by ``back`` and ``d``."""
    table = {}
    for path, _ in sq.oriented_squares():
        d, p1, p2, p3 = path
        table.setdefault((sq.src(d), inv(p3), d), []).append((p1, p2))
    return table


def develop_ball(sq, base, R, check=True):
    """Lift the radius-``R`` ball about ``base`` in the universal cover, layer by layer.

    A new lift of a directed edge is identified with an existing vertex only
    when a base square through a backward neighbour forces it.
    """
    report = validate_npc(sq)
    if not report.ok:
        raise InvalidComplex("not a non-positively curved square complex", problems=report.to_json()["problems"])
    table = _completion_table(sq)
    outgoing = [sq.outgoing(v) for v in range(sq.n_vertices)]
    proj, depth, out = [base], [0], [{}]
    layer = [0]
    for k in range(R):
        nxt = []
        for x in layer:
            back = [(d, y) for d, y in out[x].items() if depth[y] == k - 1]
            for d in outgoing[proj[x]]:
                if d in out[x]:
                    continue
                found = set()
                for b, t in back:
                    for p1, p2 in table.get((proj[x], b, d), ()):
                        z = out[t].get(inv(p2))
                        if z is None:
                            raise InvariantViolation("backward neighbour has an unlifted edge")
                        y = out[z].get(inv(p1))
                        if y is not None:
                            found.add(y)
                if len(found) > 1:
                    raise InvariantViolation(f"square completion is ambiguous at lift {x}", lift=x, edge=d)
                if found:
                    y = found.pop()
                    if depth[y] != k + 1 or d ^ 1 in out[y]:
                        raise InvariantViolation(f"square completion reached a bad vertex from lift {x}")
                else:
                    y = len(proj)
                    proj.append(sq.dst(d))
                    depth.append(k + 1)
                    out.append({})
                    nxt.append(y)
                out[x][d] = y
                out[y][inv(d)] = x
        layer = nxt
    edges, labels = [], []
    for x in range(len(proj)):
        for d, y in sorted(out[x].items()):
            if d & 1 == 0:
                edges.append((x, y))
                labels.append(d >> 1)
    ball = DevelopedBall(sq, base, R, proj, depth, out, Graph(len(proj), edges), labels)
    ball.squares = _lift_squares(sq, ball)
    if check:
        check_covering(ball)
    return ball


def _lift_squares(sq, ball):
    found = set()
    for x in range(ball.n_vertices):
        for path, k in sq.oriented_squares():
            if sq.src(path[0]) != ball.proj[x]:
                continue
            corners = [x]
            y = x
            for d in path:
                y = ball.out[y].get(d)
                if y is None:
                    break
                corners.append(y)
            if y == x and len(corners) == 5:
                found.add((frozenset(corners[:4]), k))
    return sorted((sorted(c), k) for c, k in found)


def check_covering(ball):
    """Every vertex below the frontier carries the full base star and closes every base square."""
    sq = ball.complex
    for x in range(ball.n_vertices):
        if ball.depth[x] >= ball.R:
            continue
        want = sorted(sq.outgoing(ball.proj[x]))
        if sorted(ball.out[x]) != want:
            raise InvariantViolation(f"lift {x} does not carry the full base star")
        if len(set(ball.out[x].values())) != len(want):
            raise InvariantViolation(f"lift {x} has a folded star")
    for x in range(ball.n_vertices):
        if ball.depth[x] > ball.R - 2:
            continue
        for path, _ in sq.oriented_squares():
            if sq.src(path[0]) != ball.proj[x]:
                continue
            y = x
            for d in path:
                y = ball.out[y][d]
            if y != x:
                raise InvariantViolation(f"a base square does not close at lift {x}")


def slow_develop(sq, base, R):
    """Independent developer: vertices are square-flip classes of geodesic edge paths.

    Returns ``(n_vertices, n_edges)`` of the radius-``R`` ball.
    """
    flips = {}
    for path, _ in sq.oriented_squares():
        a, b, c, d = path
        flips.setdefault((a, b), set()).add((inv(d), inv(c)))

    def close(paths):
        seen = set(paths)
        queue = deque(paths)
        while queue:
            p = queue.popleft()
            for i in range(len(p) - 1):
                for rep in flips.get((p[i], p[i + 1]), ()):
                    q = p[:i] + rep + p[i + 2:]
                    if q not in seen:
                        seen.add(q)
                        queue.append(q)
        return frozenset(seen)

    layer = [frozenset([()])]
    vertex_count = 1
    edge_count = 0
    ends = {frozenset([()]): base}
    for _ in range(R):
        found = {}
        for cls in layer:
            v = ends[cls]
            for d in sq.outgoing(v):
                if any(p and p[-1] == inv(d) for p in cls):
                    continue
                grown = close([p + (d,) for p in cls])
                key = min(grown)
                if key not in found:
                    found[key] = grown
                    ends[grown] = sq.dst(d)
                edge_count += 1
        nxt = list(found.values())
        # classes meeting in a path are one vertex
        for i, a in enumerate(nxt):
            for b in nxt[i + 1:]:
                if a & b and a != b:
                    raise InvariantViolation("flip classes overlap without coinciding")
        vertex_count += len(nxt)
        layer = nxt
    return vertex_count, edge_count


def local_separation_check(ball, edge, vertex=None):
    """Components of the inner-ball halfspace at ``vertex`` after removing the lift of ``edge``.

    ``edge`` is a directed base edge leaving ``proj[vertex]``; its lift at
    ``vertex`` (default: the root lift) is the cutting edge.  The half-open edge meets the vertex set
    of the halfspace only in ``vertex`` itself, so that vertex is removed.
    """
    vertex = 0 if vertex is None else vertex
    if ball.R < 3 or ball.depth[vertex] > ball.R - 3:
        raise RadiusTooSmall("edge is not inside the inner ball; increase R", radius=ball.R)
    g, keep = ball.inner()
    index = {x: i for i, x in enumerate(keep)}
    other = ball.out[vertex].get(edge)
    if other is None or other not in index:
        raise RadiusTooSmall("edge is not inside the inner ball; increase R", radius=ball.R)
    u, v = index[vertex], index[other]
    k = g.edge_between(u, v)
    wall = g.labels[k]
    half = g.plus[wall] if g.plus[wall] >> u & 1 else g.minus[wall]
    rest = half & ~(1 << u)
    comps = g.components(within=rest)
    boundary = 0
    for i, x in enumerate(keep):
        if ball.depth[x] == ball.R - 2:
            boundary |= 1 << i
    return {
        "components": len(comps),
        "sizes": [c.bit_count() for c in comps],
        "touch_boundary": [bool(c & boundary) for c in comps],
        "halfspace_size": half.bit_count(),
    }


def essential_shadow(ball):
    """Walls of the inner ball with a side that misses the inner boundary."""
    g, keep = ball.inner()
    boundary = 0
    for i, x in enumerate(keep):
        if ball.depth[x] == ball.R - 2:
            boundary |= 1 << i
    return [w for w in range(g.n_walls) if not (g.plus[w] & boundary and g.minus[w] & boundary)]


def inner_median(ball):
    g, _ = ball.inner()
    return isinstance(g, MedianGraph)
