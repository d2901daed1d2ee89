import pytest
from hypothesis import assume, given, settings, strategies as st

from cubik.corpus import genus2_folded, grid3x3, random_pocset, square, staircase
from cubik.errors import DegenerateQuotient, PreconditionError
from cubik.median import path_graph, wall_labels
from cubik.npc import develop_ball
from cubik.pocset import cubing
from cubik.quarter import (
    check_reduction,
    contained_depth0,
    depth0_pairs,
    is_depth0_order,
    omega_split,
    quarterspace_depth,
    quarterspace_report,
    quasi_leq,
    quotient_pocset,
    reduce_fixpoint,
    reduce_once,
    transverse_pairs,
)

from oracles import all_distances, all_ultrafilters, as_set, closed_pairs

seeds = st.integers(min_value=0, max_value=10**6)


def find_half(g, vertices):
    return next(a for a in range(2 * g.n_walls) if as_set(g.oriented(a)) == set(vertices))


def grid_half(pred):
    g = grid3x3()
    return find_half(g, [3 * y + x for y in range(3) for x in range(3) if pred(x, y)])


def literal_depth(g, h1, h2):
    d = all_distances(g.n_vertices, g.edges)
    inside = as_set(g.oriented(h1)) & as_set(g.oriented(h2))
    opposite = as_set(g.oriented(h1 ^ 1)) & as_set(g.oriented(h2 ^ 1))
    return max(min(d[x][y] for y in opposite) for x in inside) - 2


def literal_depth0_order(g, h1, h2):
    hs = [as_set(h) for h in g.oriented_halfspaces]
    subs1 = [h for h in hs if h < hs[h1]]
    subs2 = [h for h in hs if h < hs[h2]]
    return all(h < hs[h2 ^ 1] for h in subs1) and all(h < hs[h1 ^ 1] for h in subs2)


def test_square_quarters_all_have_depth_zero():
    g = square()
    for a, b in transverse_pairs(g):
        assert quarterspace_depth(g, a, b) == 0
        assert is_depth0_order(g, a, b)


def test_grid_depths():
    g = grid3x3()
    x1, y1 = grid_half(lambda x, y: x >= 1), grid_half(lambda x, y: y >= 1)
    x2, y2 = grid_half(lambda x, y: x >= 2), grid_half(lambda x, y: y >= 2)
    assert quarterspace_depth(g, x1, y1) == 2
    assert quarterspace_depth(g, x2, y2) == 0
    assert not is_depth0_order(g, x1, y1)
    assert is_depth0_order(g, x2, y2)


def test_non_transverse_pair_rejected():
    g = wall_labels(path_graph(3))
    with pytest.raises(PreconditionError):
        quarterspace_depth(g, 0, 2)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_depth_matches_bfs_and_order(seed):
    g, _ = cubing(random_pocset(seed, max_walls=8, max_width=3))
    for a, b in transverse_pairs(g):
        depth = quarterspace_depth(g, a, b)
        assert depth == literal_depth(g, a, b)
        assert is_depth0_order(g, a, b) == literal_depth0_order(g, a, b) == (depth == 0)


def test_every_grid_quarter_contains_a_depth0_quarter():
    g = grid3x3()
    for a, b in transverse_pairs(g):
        found = contained_depth0(g, a, b)
        assert found is not None and quarterspace_depth(g, *found) == 0
    assert quarterspace_report(g)["uncovered_quarterspaces"] == 0


def test_quasi_order_examples():
    g = grid3x3()
    x2, y1, y_le1 = grid_half(lambda x, y: x >= 2), grid_half(lambda x, y: y >= 1), grid_half(lambda x, y: y <= 1)
    assert all(quasi_leq(g, a, a) for a in range(2 * g.n_walls))
    assert quasi_leq(g, x2, y1) and quasi_leq(g, x2, y_le1)
    assert not quasi_leq(g, y1, x2)


def test_staircase_has_equivalent_halfspaces():
    g, pts = staircase()
    left = find_half(g, [i for i, (x, y) in enumerate(pts) if x <= 0])
    up = find_half(g, [i for i, (x, y) in enumerate(pts) if y >= 1])
    assert quasi_leq(g, left, up) and quasi_leq(g, up, left)


def test_tree_quotient_is_the_original():
    g = wall_labels(path_graph(4))
    Q = quotient_pocset(g)
    assert all(bin(c).count("1") == 1 for c in Q.classes)
    result = reduce_once(g)
    assert result.Y.n_vertices == g.n_vertices
    assert sorted(result.phi) == list(range(g.n_vertices))
    assert [result.phi[result.theta[x]] for x in range(g.n_vertices)] == list(range(g.n_vertices))


def test_square_quotient_is_degenerate():
    with pytest.raises(DegenerateQuotient):
        quotient_pocset(square())


def test_grid_quotient_relations():
    g = grid3x3()
    Q = quotient_pocset(g)
    assert len(Q.classes) == 8 and all(bin(c).count("1") == 1 for c in Q.classes)
    hs = [as_set(h) for h in g.oriented_halfspaces]
    added = [(a, b) for a in range(8) for b in range(8) if quasi_leq(g, a, b) and not hs[a] <= hs[b]]
    assert len(added) == 8


def test_grid_reduces_to_five_vertices():
    g = grid3x3()
    Q = quotient_pocset(g)
    expected = len(all_ultrafilters(Q.pocset.n_walls, closed_pairs(Q.pocset.n_walls, Q.pocset.relations())))
    assert expected == 5
    result = reduce_fixpoint(g)
    assert result.Y.n_vertices == expected
    assert len(result.trace) == 1
    assert not depth0_pairs(result.Y)


def independent_checks(result):
    g, Y = result.X, result.Y
    for k in range(Y.n_vertices):
        assert result.theta[result.phi[k]] == k
    assert len(set(result.phi)) == Y.n_vertices
    dX = all_distances(g.n_vertices, g.edges)
    dY = all_distances(Y.n_vertices, Y.edges)
    dim = max(g.dim, 1)
    for x in range(g.n_vertices):
        assert dX[result.phi[result.theta[x]]][x] <= 2 * dim
    for a in range(Y.n_vertices):
        for b in range(Y.n_vertices):
            assert dY[a][b] <= dX[result.phi[a]][result.phi[b]] <= dim * dY[a][b]


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_reduction_invariants(seed):
    g, _ = cubing(random_pocset(seed, max_walls=9, max_width=3))
    try:
        result = reduce_once(g)
    except DegenerateQuotient:
        assume(False)
    check_reduction(result)
    independent_checks(result)


def test_omega_split_on_grid_corner():
    g = grid3x3()
    zero, one = omega_split(g, 8)
    x2, y2 = grid_half(lambda x, y: x >= 2), grid_half(lambda x, y: y >= 2)
    assert as_set(zero) == {x2, y2}
    assert not zero & one


def test_preserved_halfspace_stays_close():
    g = grid3x3()
    h = grid_half(lambda x, y: x >= 2)
    result = reduce_once(g, preserve=h)
    stats = check_reduction(result)
    assert stats["hausdorff"] is not None and stats["hausdorff"] <= 2 * g.dim


def test_developed_ball_shrinks():
    fr = genus2_folded()
    ball = develop_ball(fr.complex, fr.vertex, 4)
    inner, _ = ball.inner()
    result = reduce_once(inner)
    check_reduction(result)
    assert result.Y.n_vertices < inner.n_vertices


def test_fixpoint_trace_or_degenerate():
    for seed in range(40):
        g, _ = cubing(random_pocset(seed, max_walls=9, max_width=3))
        try:
            result = reduce_fixpoint(g)
        except DegenerateQuotient as exc:
            assert "trace" in exc.detail
            continue
        assert not depth0_pairs(result.Y)
        sizes = [s["n_vertices_after"] for s in result.trace]
        assert sizes == sorted(sizes, reverse=True)
