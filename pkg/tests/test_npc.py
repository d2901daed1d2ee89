import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cubik.corpus import genus2, genus2_folded
from cubik.errors import InvalidComplex, RadiusTooSmall
from cubik.median import validate_median
from cubik.npc import (
    SquareComplex,
    build_amalgam,
    check_covering,
    develop_ball,
    essential_shadow,
    fold,
    format_word,
    hyperplane_betti,
    is_cyclically_reduced,
    local_separation_check,
    parse_word,
    rose,
    slow_develop,
    torus,
    validate_npc,
)


def literal_link_ok(sq):
    """Link at every vertex is a simple graph without triangles."""
    links = {}
    for s in sq.squares:
        for i in range(4):
            v = sq.edges[s[i] >> 1][s[i] & 1]
            a, b = s[i - 1] ^ 1, s[i]
            if a == b:
                return False
            links.setdefault(v, []).append(frozenset((a, b)))
    for v, edges in links.items():
        if len(set(edges)) != len(edges):
            return False
        es = set(edges)
        nodes = set().union(*es)
        for x, y, z in itertools.combinations(sorted(nodes), 3):
            if {frozenset((x, y)), frozenset((y, z)), frozenset((x, z))} <= es:
                return False
    return True


def free_ball(k, R):
    return 1 + sum(2 * k * (2 * k - 1) ** (r - 1) for r in range(1, R + 1))


def test_word_parsing():
    assert parse_word("a1 b1 A1 B1", 1) == [1, 2, -1, -2]
    assert format_word([1, 2, -1, -2], 1) == "a1 b1 A1 B1"
    assert is_cyclically_reduced([1, 2, -1, -2])
    assert not is_cyclically_reduced([1, 2, -2])
    assert not is_cyclically_reduced([1, 2, -1])
    with pytest.raises(InvalidComplex):
        parse_word("a2", 1)


def test_torus_and_roses_are_valid():
    for sq in (torus(), rose(1), rose(3)):
        assert validate_npc(sq).ok and literal_link_ok(sq)


def test_self_glued_square_has_a_link_loop():
    sq = SquareComplex(1, [(0, 0), (0, 0)], [(0, 1, 2, 3)])
    report = validate_npc(sq)
    assert "link loop" in report.kinds()
    assert not literal_link_ok(sq)


def test_doubled_square_has_a_multi_edge():
    sq = SquareComplex(1, [(0, 0), (0, 0)], [(0, 2, 1, 3), (0, 2, 1, 3)])
    assert "link multi-edge" in validate_npc(sq).kinds()


def test_open_square_is_rejected():
    sq = SquareComplex(2, [(0, 1), (0, 1)], [(0, 2, 0, 2)])
    assert "square not closed" in validate_npc(sq).kinds()


def test_amalgam_counts():
    sq = build_amalgam(1, 1, "a1", "a2")
    assert (sq.n_vertices, len(sq.edges), len(sq.squares)) == (3, 5, 2)
    assert validate_npc(sq).ok
    X = genus2()
    assert (X.n_vertices, len(X.edges), len(X.squares), X.euler_characteristic()) == (6, 16, 8, -2)
    assert validate_npc(X).ok and literal_link_ok(X)


def test_amalgam_rejects_bad_words():
    with pytest.raises(InvalidComplex):
        build_amalgam(2, 2, "a1 A1", "a2 b2")
    with pytest.raises(InvalidComplex):
        build_amalgam(2, 2, "a1 b1", "a2")
    with pytest.raises(InvalidComplex):
        build_amalgam(1, 2, "a1 b1", "a2 b2")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([1, 2, -1, -2]), min_size=1, max_size=5),
       st.lists(st.sampled_from([1, 2, 3, -1, -2, -3]), min_size=1, max_size=5))
def test_random_amalgams_satisfy_the_link_condition(w1, w2):
    if len(w1) != len(w2) or not is_cyclically_reduced(w1) or not is_cyclically_reduced(w2):
        with pytest.raises(InvalidComplex):
            build_amalgam(2, 3, format_word(w1, 1), format_word(w2, 2))
        return
    sq = build_amalgam(2, 3, format_word(w1, 1), format_word(w2, 2))
    assert validate_npc(sq).ok == literal_link_ok(sq)


def test_fold_genus2():
    X = genus2()
    fr = genus2_folded()
    Xp = fr.complex
    assert Xp.n_vertices == X.n_vertices - 1 and len(Xp.edges) == len(X.edges) - 1
    assert Xp.euler_characteristic() == X.euler_characteristic()
    assert validate_npc(Xp).ok and literal_link_ok(Xp)
    assert (fr.betti_before, fr.betti_after) == (1, 2)
    assert hyperplane_betti(Xp, fr.edge >> 1) == 2


def test_fold_rose_petals():
    sq = SquareComplex(1, [(0, 0), (0, 0)], [])
    fr = fold(sq, 0, 2)
    assert (fr.complex.n_vertices, len(fr.complex.edges)) == (1, 1)


def test_fold_rejects_same_edge():
    with pytest.raises(InvalidComplex):
        fold(genus2(), 0, 1)


@pytest.mark.parametrize("R", range(6))
def test_torus_ball_sizes(R):
    assert develop_ball(torus(), 0, R).n_vertices == 2 * R * R + 2 * R + 1


@pytest.mark.parametrize("R", range(4))
def test_rose_ball_is_a_tree(R):
    ball = develop_ball(rose(2), 0, R)
    assert ball.n_vertices == free_ball(2, R)
    assert len(ball.graph.edges) == ball.n_vertices - 1


@pytest.mark.parametrize("R,nv,ne", [(1, 8, 7), (2, 32, 39), (3, 134, 165)])
def test_folded_genus2_ball_counts(R, nv, ne):
    fr = genus2_folded()
    ball = develop_ball(fr.complex, fr.vertex, R)
    assert (ball.n_vertices, len(ball.graph.edges)) == (nv, ne)
    assert slow_develop(fr.complex, fr.vertex, R) == (nv, ne)


@pytest.mark.parametrize("make", [torus, lambda: rose(2), genus2])
def test_slow_developer_agrees(make):
    sq = make()
    for R in range(3):
        ball = develop_ball(sq, 0, R)
        assert slow_develop(sq, 0, R) == (ball.n_vertices, len(ball.graph.edges))


def test_inner_ball_is_median_and_covers():
    fr = genus2_folded()
    ball = develop_ball(fr.complex, fr.vertex, 4)
    check_covering(ball)
    g, keep = ball.inner()
    assert validate_median(g).ok
    assert all(ball.depth[x] <= 2 for x in keep)
    assert essential_shadow(ball) == []


def test_separation_on_folded_genus2():
    fr = genus2_folded()
    ball = develop_ball(fr.complex, fr.vertex, 4)
    leaving = fr.edge ^ 1 if fr.complex.src(fr.edge) != fr.vertex else fr.edge
    result = local_separation_check(ball, leaving)
    assert result["components"] == 2
    assert all(result["touch_boundary"])


def test_separation_on_torus_is_connected():
    ball = develop_ball(torus(), 0, 4)
    assert local_separation_check(ball, 0)["components"] == 1


def test_separation_needs_radius_three():
    ball = develop_ball(torus(), 0, 2)
    with pytest.raises(RadiusTooSmall):
        local_separation_check(ball, 0)


def test_square_complex_json_round_trip():
    X = genus2()
    Y = SquareComplex.from_json(X.to_json())
    assert (Y.n_vertices, Y.edges, Y.squares, Y.handles) == (X.n_vertices, X.edges, X.squares, X.handles)
    bad = X.to_json()
    bad["edges"] = bad["edges"][:-1]
    with pytest.raises(InvalidComplex):
        SquareComplex.from_json(bad)
