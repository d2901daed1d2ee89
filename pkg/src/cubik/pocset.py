"""Finite pocsets, ultrafilters and the cubing construction.

Oriented walls are integers: wall ``i`` has orientations ``2*i`` (``i+``) and
``2*i + 1`` (``i-``), so the involution is ``a ^ 1``.  An ultrafilter is an
``int`` bit-vector over walls, bit ``i`` set meaning ``i+`` is selected.
"""
import os
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bitset import members
from .clique import max_clique
from .diagnostics import Diagnostics
from .errors import InconsistentExtension, InstanceTooLarge, InvalidPocset, InvariantViolation

DEFAULT_CAP = 1 << 20
EXHAUSTIVE_LIMIT = 16


def enumeration_cap():
    value = os.environ.get("CUBIK_CAP")
    return int(value) if value else DEFAULT_CAP


def star(a):
    return a ^ 1


def wall_of(a):
    return a >> 1


def parse_token(tok):
    tok = tok.strip()
    if len(tok) < 2 or tok[-1] not in "+-" or not tok[:-1].isdigit():
        raise InvalidPocset(f"bad oriented wall token {tok!r}")
    return 2 * int(tok[:-1]) + (tok[-1] == "-")


def token(a):
    return f"{a >> 1}{'-' if a & 1 else '+'}"


def _swap_pairs(mask, n_walls):
    even = int("01" * n_walls, 2) if n_walls else 0
    odd = even << 1
    return ((mask & even) << 1) | ((mask & odd) >> 1)


class Pocset:
    """A finite pocset on ``n_walls`` walls.

    ``up[a]`` is the bitmask of oriented walls ``b`` with ``a <= b`` (reflexive
    pairs always included).  With ``close=True`` the given relations are closed
    under order reversal and transitivity; otherwise they are stored verbatim so
    :func:`validate_pocset` can report what is missing.
    """

    __slots__ = ("n_walls", "up", "_down")

    def __init__(self, n_walls, relations=(), close=True):
        if n_walls < 0:
            raise InvalidPocset("negative wall count")
        self.n_walls = n_walls
        size = 2 * n_walls
        up = [1 << a for a in range(size)]
        for a, b in relations:
            if not (0 <= a < size and 0 <= b < size):
                raise InvalidPocset(f"relation {token(a)} <= {token(b)} out of range")
            up[a] |= 1 << b
            if close:
                up[b ^ 1] |= 1 << (a ^ 1)
        if close:
            for k in range(size):
                bit = 1 << k
                uk = up[k]
                for i in range(size):
                    if up[i] & bit:
                        up[i] |= uk
        self.up = tuple(up)
        self._down = None

    @classmethod
    def from_up(cls, n_walls, up):
        p = cls.__new__(cls)
        p.n_walls = n_walls
        p.up = tuple(up)
        p._down = None
        return p

    @property
    def down(self):
        if self._down is None:
            size = 2 * self.n_walls
            down = [0] * size
            for a in range(size):
                for b in members(self.up[a]):
                    down[b] |= 1 << a
            self._down = tuple(down)
        return self._down

    def leq(self, a, b):
        return bool(self.up[a] >> b & 1)

    def relations(self):
        """Strict relations ``(a, b)`` with ``a < b``, sorted."""
        return [(a, b) for a in range(2 * self.n_walls) for b in members(self.up[a]) if b != a]

    def restrict(self, walls):
        """Sub-pocset on ``walls`` (renumbered in the given order)."""
        index = {w: j for j, w in enumerate(walls)}
        up = []
        for w in walls:
            for s in (0, 1):
                mask = 0
                for b in members(self.up[2 * w + s]):
                    j = index.get(b >> 1)
                    if j is not None:
                        mask |= 1 << (2 * j + (b & 1))
                up.append(mask)
        return Pocset.from_up(len(walls), up)

    def to_json(self):
        return {"n_walls": self.n_walls, "order": [[token(a), token(b)] for a, b in self.relations()]}

    @classmethod
    def from_json(cls, data, validate=True):
        n = int(data["n_walls"])
        rel = [(parse_token(a), parse_token(b)) for a, b in data.get("order", [])]
        p = cls(n, rel, close=True)
        if validate:
            report = validate_pocset(p)
            if not report.ok:
                raise InvalidPocset("order is not a pocset", problems=report.to_json()["problems"])
        return p

    def __eq__(self, other):
        return isinstance(other, Pocset) and self.n_walls == other.n_walls and self.up == other.up

    def __hash__(self):
        return hash((self.n_walls, self.up))

    def __repr__(self):
        return f"Pocset(n_walls={self.n_walls}, relations={len(self.relations())})"


@dataclass(frozen=True)
class PartialUltrafilter:
    decided: int
    plus: int

    @classmethod
    def from_oriented(cls, oriented):
        decided = plus = 0
        for a in oriented:
            w = a >> 1
            if decided >> w & 1 and (plus >> w & 1) != (a & 1 == 0):
                raise InvalidPocset(f"both orientations of wall {w} selected")
            decided |= 1 << w
            if a & 1 == 0:
                plus |= 1 << w
        return cls(decided, plus)

    def oriented_mask(self):
        return oriented_mask(self.decided, self.plus)

    def oriented(self):
        return members(self.oriented_mask())


def oriented_mask(decided, plus):
    mask = 0
    for w in members(decided):
        mask |= 1 << (2 * w + (0 if plus >> w & 1 else 1))
    return mask


def selected(p, omega):
    """Oriented-wall mask of the walls chosen by ultrafilter ``omega``."""
    return oriented_mask((1 << p.n_walls) - 1, omega)


def from_selected(mask):
    omega = 0
    for a in members(mask):
        if a & 1 == 0:
            omega |= 1 << (a >> 1)
    return omega


def orientation_string(p, omega):
    return "".join("+" if omega >> i & 1 else "-" for i in range(p.n_walls))


def canonical_key(n_walls, omega):
    # '+' sorts before '-', read from wall 0
    return tuple(0 if omega >> i & 1 else 1 for i in range(n_walls))


# -- validation -------------------------------------------------------------


def validate_pocset(p):
    report = Diagnostics()
    size = 2 * p.n_walls
    up = p.up
    for a in range(size):
        if up[a] >> (a ^ 1) & 1:
            report.add("complements comparable", (token(a), token(a ^ 1)), f"{token(a)} <= {token(a ^ 1)}")
            break
    for a in range(size):
        missing = [b for b in members(up[a]) if not up[b ^ 1] >> (a ^ 1) & 1]
        if missing:
            b = missing[0]
            report.add(
                "not closed under involution",
                (token(a), token(b)),
                f"{token(a)} <= {token(b)} but not {token(b ^ 1)} <= {token(a ^ 1)}",
            )
            break
    done = False
    for a in range(size):
        for b in members(up[a]):
            extra = up[b] & ~up[a]
            if extra:
                c = members(extra)[0]
                report.add(
                    "not transitive",
                    (token(a), token(c)),
                    f"{token(a)} <= {token(b)} <= {token(c)} but not {token(a)} <= {token(c)}",
                )
                done = True
                break
        if done:
            break
    for a in range(size):
        for b in members(up[a]):
            if b != a and up[b] >> a & 1:
                report.add("not antisymmetric", (token(a), token(b)), f"{token(a)} <= {token(b)} <= {token(a)}")
                return report
    return report


def is_partial_ultrafilter(p, oriented):
    opposite = _swap_pairs(oriented, p.n_walls)
    if oriented & opposite:
        return False
    return all(p.up[a] & opposite == 0 for a in members(oriented))


def is_ultrafilter(p, omega):
    sel = selected(p, omega)
    return all(p.up[a] & ~sel == 0 for a in members(sel))


# -- transversality and width ----------------------------------------------


def transverse(p, a, b):
    if a >> 1 == b >> 1:
        raise InvalidPocset(f"{token(a)} and {token(b)} belong to the same wall")
    up = p.up
    return not (up[a] >> b & 1 or up[b] >> a & 1 or up[a] >> (b ^ 1) & 1 or up[b ^ 1] >> a & 1)


def transversality_graph(p):
    """Neighbour masks over walls: ``i`` and ``j`` adjacent iff transverse."""
    n = p.n_walls
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if transverse(p, 2 * i, 2 * j):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def width(p):
    if p.n_walls == 0:
        return 0
    return len(max_clique(transversality_graph(p)))


# -- ultrafilters -----------------------------------------------------------


def find_ultrafilter(p):
    """Greedy ultrafilter: walls in index order, ``i+`` whenever legal."""
    chosen = 0
    for w in range(p.n_walls):
        for a in (2 * w, 2 * w + 1):
            # legal iff no chosen c has c* >= a
            if p.up[a] & _swap_pairs(chosen | (1 << a), p.n_walls) == 0:
                chosen |= 1 << a
                break
        else:
            raise InvariantViolation(f"neither orientation of wall {w} extends the partial ultrafilter")
    return from_selected(chosen)


def _first_violation(p, sel):
    for a in members(sel):
        bad = p.up[a] & ~sel
        if bad:
            return a, members(bad)[0]
    return None


def extend_partial(p, w, seed):
    """Complete ``w`` with ``seed``'s choices on every undecided wall."""
    omega = (w.plus & w.decided) | (seed & ~w.decided & ((1 << p.n_walls) - 1))
    bad = _first_violation(p, selected(p, omega))
    if bad is not None:
        a, b = bad
        raise InconsistentExtension(
            f"extension selects {token(a)} but not {token(b)} although {token(a)} <= {token(b)}",
            pair=[token(a), token(b)],
        )
    return omega


def upward_closure(p, oriented):
    out = oriented
    for a in members(oriented):
        out |= p.up[a]
    return out


def _neighbours(p, omega, sel=None):
    sel = selected(p, omega) if sel is None else sel
    down = p.down
    for a in members(sel):
        if down[a] & sel == 1 << a:
            yield a, omega ^ (1 << (a >> 1))


def minimal_elements(p, omega):
    sel = selected(p, omega)
    down = p.down
    return [a for a in members(sel) if down[a] & sel == 1 << a]


def exhaustive_ultrafilters(p):
    """Every consistent orientation vector, by a full scan of all ``2**n`` candidates."""
    n = p.n_walls
    req_plus = np.zeros(2 * n, dtype=np.uint64)
    req_minus = np.zeros(2 * n, dtype=np.uint64)
    for a in range(2 * n):
        plus = minus = 0
        for b in members(p.up[a]):
            if b & 1:
                minus |= 1 << (b >> 1)
            else:
                plus |= 1 << (b >> 1)
        req_plus[a] = plus
        req_minus[a] = minus
    found = _kernels.consistent_orientations(n, req_plus, req_minus)
    return sorted((int(x) for x in found), key=lambda o: canonical_key(n, o))


def enumerate_ultrafilters(p, cap=None, check=True):
    """All ultrafilters in canonical order (``+`` before ``-``, wall 0 first)."""
    cap = enumeration_cap() if cap is None else cap
    start = find_ultrafilter(p)
    seen = {start}
    queue = deque([start])
    while queue:
        omega = queue.popleft()
        for _, nxt in _neighbours(p, omega):
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise InstanceTooLarge(
                        f"instance too large: more than {cap} ultrafilters", n_walls=p.n_walls, cap=cap
                    )
                queue.append(nxt)
    result = sorted(seen, key=lambda o: canonical_key(p.n_walls, o))
    if check and p.n_walls <= EXHAUSTIVE_LIMIT:
        if result != exhaustive_ultrafilters(p):
            raise InvariantViolation("BFS ultrafilter closure differs from exhaustive scan")
    return result


def cube_dimension(p, ultrafilters):
    """Largest cube found by cube filling: pairwise-transverse minimal walls at one vertex."""
    adj = transversality_graph(p)
    best = 0
    for omega in ultrafilters:
        mins = 0
        for a in minimal_elements(p, omega):
            mins |= 1 << (a >> 1)
        if mins.bit_count() > best:
            best = max(best, len(max_clique(adj, within=mins)))
    return best


def cubing(p, cap=None, check_dim=True):
    """Cubing of ``p`` as a :class:`~cubik.median.MedianGraph` plus the wall map.

    Vertices are the ultrafilters in canonical order; the returned list maps
    pocset wall ``i`` to graph wall ``wall_map[i]`` (the identity here).
    """
    from .median import MedianGraph

    verts = enumerate_ultrafilters(p, cap=cap)
    index = {omega: k for k, omega in enumerate(verts)}
    edges = []
    labels = []
    for k, omega in enumerate(verts):
        for a, nxt in _neighbours(p, omega):
            if a & 1 == 0:
                edges.append((index[nxt], k))
                labels.append(a >> 1)
    order = sorted(range(len(edges)), key=lambda e: (min(edges[e]), max(edges[e])))
    edges = [edges[e] for e in order]
    labels = [labels[e] for e in order]
    g = MedianGraph(len(verts), edges, labels, n_walls=p.n_walls, check=False)
    g.ultrafilters = verts
    if check_dim:
        dim = cube_dimension(p, verts)
        wd = width(p)
        if dim != wd:
            raise InvariantViolation(f"cube dimension {dim} differs from width {wd}")
    return g, list(range(p.n_walls))


def extension_set(p, w, vertices=None):
    """Indices (in canonical order) of all ultrafilters extending ``w``."""
    verts = enumerate_ultrafilters(p) if vertices is None else vertices
    mask = w.decided
    want = w.plus & mask
    ext = [k for k, omega in enumerate(verts) if omega & mask == want]
    # halfspace-intersection view of the same set
    inter = set(range(len(verts)))
    for a in w.oriented():
        bit, plus = a >> 1, a & 1 == 0
        inter &= {k for k, omega in enumerate(verts) if bool(omega >> bit & 1) == plus}
    if set(ext) != inter:
        raise InvariantViolation("extension set differs from halfspace intersection")
    members_ = [verts[k] for k in ext]
    ext_set = set(members_)
    for i, x in enumerate(members_):
        for j in range(i, len(members_)):
            y = members_[j]
            for z in members_[j:]:
                m = (x & y) | (x & z) | (y & z)
                if m not in ext_set:
                    raise InvariantViolation("extension set not closed under medians")
    return ext
