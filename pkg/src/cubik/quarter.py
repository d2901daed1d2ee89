"""Quarterspace depth, the depth-0 quasi-order and the quotient reduction.

Halfspaces are oriented wall indices of a :class:`~cubik.median.MedianGraph`
(``2*w`` is ``w+``).  ``reduce_once`` collapses every depth-0 quarterspace by
passing to the cubing of the quotient pocset; ``reduce_fixpoint`` repeats that
until no depth-0 quarterspace is left.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .bitset import members
from .errors import DegenerateQuotient, InvariantViolation, PreconditionError
from .median import bool_from_mask
from .pocset import (
    PartialUltrafilter,
    Pocset,
    cubing,
    extend_partial,
    find_ultrafilter,
    from_selected,
    token,
    upward_closure,
    validate_pocset,
    width,
)

log = logging.getLogger(__name__)


def _halfspace_rows(g):
    rows = g.__dict__.get("_hs_rows")
    if rows is None:
        rows = np.array([bool_from_mask(h, g.n_vertices) for h in g.oriented_halfspaces]).reshape(-1, g.n_vertices)
        g.__dict__["_hs_rows"] = rows
    return rows


def _require_transverse(g, h1, h2):
    if h1 >> 1 == h2 >> 1 or not g.transverse(h1 >> 1, h2 >> 1):
        raise PreconditionError(f"halfspaces {token(h1)} and {token(h2)} are not transverse")


def quarterspace_depth(g, h1, h2):
    """Least ``r`` with ``h1 & h2`` inside the ``(r+2)``-neighbourhood of ``h1* & h2*``."""
    _require_transverse(g, h1, h2)
    rows = _halfspace_rows(g)
    inside = np.flatnonzero(rows[h1] & rows[h2])
    opposite = np.flatnonzero(rows[h1 ^ 1] & rows[h2 ^ 1])
    reach = int(g.dist[np.ix_(inside, opposite)].min(axis=1).max())
    return reach - 2


def proper_subhalfspaces(g, h):
    hs = g.oriented_halfspaces
    big = hs[h]
    return [a for a, k in enumerate(hs) if k != big and k & ~big == 0]


def _strictly_inside(g, a, b):
    hs = g.oriented_halfspaces
    return hs[a] != hs[b] and hs[a] & ~hs[b] == 0


def is_depth0_order(g, h1, h2):
    """Order test for depth 0: every ``h`` strictly inside ``h1`` lies strictly inside ``h2*``, and symmetrically."""
    _require_transverse(g, h1, h2)
    return all(_strictly_inside(g, h, h2 ^ 1) for h in proper_subhalfspaces(g, h1)) and all(
        _strictly_inside(g, h, h1 ^ 1) for h in proper_subhalfspaces(g, h2)
    )


def quasi_leq(g, h1, h2):
    hs = g.oriented_halfspaces
    if hs[h1] & ~hs[h2] == 0:
        return True
    other = h2 ^ 1
    if h1 >> 1 == other >> 1 or not g.transverse(h1 >> 1, other >> 1):
        return False
    return is_depth0_order(g, h1, other)


def transverse_pairs(g):
    """Every quarterspace ``(h1, h2)`` with wall of ``h1`` below wall of ``h2``."""
    out = []
    for i in range(g.n_walls):
        for j in members(g.wall_transverse[i] >> (i + 1) << (i + 1)):
            for si in (0, 1):
                for sj in (0, 1):
                    out.append((2 * i + si, 2 * j + sj))
    return out


def depth0_pairs(g):
    return [(a, b) for a, b in transverse_pairs(g) if is_depth0_order(g, a, b)]


def contained_depth0(g, h1, h2):
    """A depth-0 quarterspace inside ``h1 & h2``, or ``None``."""
    hs = g.oriented_halfspaces
    inner1 = [h1] + proper_subhalfspaces(g, h1)
    inner2 = [h2] + proper_subhalfspaces(g, h2)
    for a in inner1:
        for b in inner2:
            if a >> 1 != b >> 1 and g.transverse(a >> 1, b >> 1) and hs[a] & hs[b]:
                if quarterspace_depth(g, a, b) == 0:
                    return a, b
    return None


def quarterspace_report(g):
    pairs = []
    uncovered = 0
    for a, b in transverse_pairs(g):
        depth = quarterspace_depth(g, a, b)
        flag = is_depth0_order(g, a, b)
        pairs.append({
            "walls": [a >> 1, b >> 1],
            "sides": ["-" if a & 1 else "+", "-" if b & 1 else "+"],
            "depth": depth,
            "depth0_order": flag,
        })
        if contained_depth0(g, a, b) is None:
            uncovered += 1
            log.info("quarterspace %s & %s contains no depth-0 quarterspace", token(a), token(b))
    return {"pairs": pairs, "uncovered_quarterspaces": uncovered}


# -- the quotient pocset ----------------------------------------------------


@dataclass
class QuotientPocset:
    """``classes[c]`` is the bitset of oriented halfspaces in quotient element ``c``."""

    classes: list
    q: list
    pocset: Pocset

    def to_json(self):
        return {
            "classes": [[token(a) for a in members(c)] for c in self.classes],
            "order": self.pocset.to_json()["order"],
        }


def quasi_order(g):
    size = 2 * g.n_walls
    leq = np.zeros((size, size), dtype=bool)
    for a in range(size):
        for b in range(size):
            leq[a, b] = quasi_leq(g, a, b)
    return leq


def quotient_pocset(g):
    size = 2 * g.n_walls
    leq = quasi_order(g)
    # transitivity: leq @ leq must stay inside leq
    through = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
    broken = np.argwhere(through & ~leq)
    if broken.size:
        a, c = (int(x) for x in broken[0])
        b = int(np.flatnonzero(leq[a] & leq[:, c])[0])
        raise DegenerateQuotient(
            f"quasi-order not transitive: {token(a)} <= {token(b)} <= {token(c)}",
            witness=[token(a), token(b), token(c)],
        )
    mutual = leq & leq.T
    cls_of = [-1] * size
    groups = []
    for a in range(size):
        if cls_of[a] < 0:
            group = int(sum(1 << int(b) for b in np.flatnonzero(mutual[a])))
            for b in members(group):
                cls_of[b] = len(groups)
            groups.append(group)
    for a in range(size):
        if cls_of[a] == cls_of[a ^ 1]:
            raise DegenerateQuotient(f"{token(a)} ~ {token(a ^ 1)}", witness=[token(a), token(a ^ 1)])
    # quotient walls ordered by their lowest member; + holds the lowest oriented index
    classes = []
    q = [-1] * size
    for a in range(size):
        if q[a] >= 0:
            continue
        plus, minus = groups[cls_of[a]], groups[cls_of[a ^ 1]]
        if sum(1 << (b ^ 1) for b in members(plus)) != minus:
            raise DegenerateQuotient(f"class of {token(a)} is not mirrored by the class of {token(a ^ 1)}")
        for b in members(plus):
            q[b] = len(classes)
        for b in members(minus):
            q[b] = len(classes) + 1
        classes += [plus, minus]
    n_classes = len(classes) // 2
    up = []
    for c in range(2 * n_classes):
        rep = members(classes[c])[0]
        up.append(sum(1 << d for d in range(2 * n_classes) if leq[rep, members(classes[d])[0]]))
    p = Pocset.from_up(n_classes, up)
    report = validate_pocset(p)
    if not report.ok:
        raise DegenerateQuotient("quotient order is not a pocset", problems=report.to_json()["problems"])
    dim = g.dim
    for c in classes:
        elems = members(c)
        for i, a in enumerate(elems):
            for b in elems[i + 1:]:
                if not g.transverse(a >> 1, b >> 1):
                    raise InvariantViolation(f"{token(a)} ~ {token(b)} but they are not transverse")
        if len(elems) > max(dim, 1):
            raise InvariantViolation(f"class of size {len(elems)} exceeds dimension {dim}")
    if n_classes and width(p) > dim:
        raise InvariantViolation("quotient width exceeds dimension")
    return QuotientPocset(classes, q, p)


# -- reduction --------------------------------------------------------------


@dataclass
class ReductionResult:
    X: object
    Y: object
    phi: list
    theta: list
    quotient: QuotientPocset = None
    preserve: int = None
    trace: list = field(default_factory=list)

    def to_json(self):
        return {
            "n_vertices_X": self.X.n_vertices,
            "n_vertices": self.Y.n_vertices,
            "graph": self.Y.to_json(),
            "phi": list(self.phi),
            "theta": list(self.theta),
            "steps": list(self.trace),
        }


def omega_split(g, x):
    """``(omega0, omega1)`` as bitsets of oriented halfspaces containing vertex ``x``."""
    hs = g.oriented_halfspaces
    omega = [a for a in range(2 * g.n_walls) if hs[a] >> x & 1]
    zero = 0
    for i, a in enumerate(omega):
        for b in omega[i + 1:]:
            if a >> 1 != b >> 1 and g.transverse(a >> 1, b >> 1) and is_depth0_order(g, a, b):
                zero |= (1 << a) | (1 << b)
    everything = sum(1 << a for a in omega)
    return zero, everything & ~zero


def reduce_once(g, preserve=None, quotient=None):
    Q = quotient_pocset(g) if quotient is None else quotient
    Y, _ = cubing(Q.pocset)
    phi = []
    for mu in Y.ultrafilters:
        sig = 0
        for w in range(g.n_walls):
            c = Q.q[2 * w]
            if (mu >> (c >> 1) & 1) == (c & 1 == 0):
                sig |= 1 << w
        x = g.vertex_of(sig)
        if x is None:
            raise InvariantViolation("phi of a quotient ultrafilter is not a vertex")
        phi.append(x)
    index = {mu: k for k, mu in enumerate(Y.ultrafilters)}
    seed = find_ultrafilter(Q.pocset)
    theta = []
    for x in range(g.n_vertices):
        _, one = omega_split(g, x)
        chosen = 0
        for a in members(one):
            chosen |= 1 << Q.q[a]
        if preserve is not None and g.oriented(preserve) >> x & 1:
            chosen |= 1 << Q.q[preserve]
        chosen = upward_closure(Q.pocset, chosen)
        partial = PartialUltrafilter.from_oriented(members(chosen))
        mu = extend_partial(Q.pocset, partial, seed)
        theta.append(index[mu])
    return ReductionResult(g, Y, phi, theta, Q, preserve)


def check_reduction(result, has_depth0=None):
    """Assert every finite invariant of one reduction step; returns measured constants."""
    g, Y, phi, theta = result.X, result.Y, result.phi, result.theta
    dim = max(g.dim, 1)
    for k in range(Y.n_vertices):
        if theta[phi[k]] != k:
            raise InvariantViolation(f"theta(phi({k})) = {theta[phi[k]]}")
    if len(set(phi)) != len(phi):
        raise InvariantViolation("phi is not injective")
    drift = max(int(g.dist[phi[theta[x]], x]) for x in range(g.n_vertices))
    if drift > 2 * dim:
        raise InvariantViolation(f"phi(theta(x)) drifts {drift} > 2 dim")
    dY = Y.dist
    dX = g.dist[np.ix_(phi, phi)]
    if (dY > dX).any() or (dX > dim * dY).any():
        raise InvariantViolation("bi-Lipschitz sandwich fails")
    for k in range(Y.n_vertices):
        if Y.degree(k) > g.degree(phi[k]):
            raise InvariantViolation(f"degree of {k} in Y exceeds degree of its image")
    if has_depth0 is None:
        has_depth0 = bool(depth0_pairs(g))
    if has_depth0 and not Y.n_vertices < g.n_vertices:
        raise InvariantViolation("vertex count did not drop")
    for x in range(g.n_vertices):
        zero, _ = omega_split(g, x)
        elems = members(zero)
        if len(elems) > dim and g.dim:
            raise InvariantViolation(f"|omega0| = {len(elems)} exceeds dimension")
        hs = g.oriented_halfspaces
        for i, a in enumerate(elems):
            for b in elems[i + 1:]:
                if not g.transverse(a >> 1, b >> 1):
                    raise InvariantViolation("omega0 elements not pairwise transverse")
            for b in range(2 * g.n_walls):
                if hs[b] >> x & 1 and hs[b] != hs[a] and hs[b] & ~hs[a] == 0:
                    raise InvariantViolation("omega0 element is not minimal")
    Q = result.quotient
    for c in range(len(Q.classes)):
        for h in members(Q.classes[c]):
            target = g.oriented(h)
            for k, mu in enumerate(Y.ultrafilters):
                if (mu >> (c >> 1) & 1) == (c & 1 == 0) and not target >> phi[k] & 1:
                    raise InvariantViolation("phi leaves the halfspace of a class")
    hausdorff = None
    if result.preserve is not None:
        h = g.oriented(result.preserve)
        image = 0
        for x in members(h):
            y = phi[theta[x]]
            if not h >> y & 1:
                raise InvariantViolation("phi(theta) leaves the preserved halfspace")
            image |= 1 << y
        hausdorff = max(g.set_distance(x, image) for x in members(h))
    return {"drift": drift, "hausdorff": hausdorff}


def reduce_fixpoint(g, max_steps=None):
    """Iterate ``reduce_once`` until no depth-0 quarterspace remains.

    On a degenerate quotient mid-run the raised error carries the partial
    trace under ``detail["trace"]``.
    """
    current = g
    phi = list(range(g.n_vertices))
    theta = list(range(g.n_vertices))
    trace = []
    limit = g.n_vertices if max_steps is None else max_steps
    last = None
    while len(trace) < limit:
        pairs = depth0_pairs(current)
        if not pairs:
            break
        try:
            step = reduce_once(current)
        except DegenerateQuotient as exc:
            exc.detail["trace"] = trace
            raise
        check_reduction(step, has_depth0=True)
        trace.append({
            "step": len(trace) + 1,
            "n_vertices_before": current.n_vertices,
            "n_vertices_after": step.Y.n_vertices,
            "n_walls_before": current.n_walls,
            "n_walls_after": step.Y.n_walls,
            "depth0_pairs": len(pairs),
        })
        phi = [phi[x] for x in step.phi]
        theta = [step.theta[y] for y in theta]
        current = step.Y
        last = step
    else:
        if depth0_pairs(current):
            raise InvariantViolation("fixpoint did not terminate")
    return ReductionResult(g, current, phi, theta, last.quotient if last else None, None, trace)
