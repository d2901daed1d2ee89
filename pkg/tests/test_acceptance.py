"""Acceptance criteria 1-7, each at its stated tolerance and time budget.

A per-criterion PASS/FAIL line is printed in the terminal summary (see
``conftest.py``).
"""
import itertools
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from cubik.corpus import genus2, genus2_folded, grid3x3, pocset_corpus, random_refinement, square, staircase, star
from cubik.errors import DegenerateQuotient
from cubik.median import dualize_roundtrip, halfspace_pocset, helly_check, hull, is_convex, thickening
from cubik.npc import develop_ball, local_separation_check, rose, slow_develop, torus, validate_npc
from cubik.pocset import cubing
from cubik.quarter import (
    check_reduction,
    depth0_pairs,
    is_depth0_order,
    quarterspace_depth,
    quotient_pocset,
    reduce_fixpoint,
    reduce_once,
    transverse_pairs,
)
from cubik.wallspace import refine_halfspace, refinement_report

from oracles import as_set

DATA = Path(__file__).resolve().parents[1] / "src" / "cubik" / "data"


@pytest.fixture(scope="module")
def corpus():
    start = time.perf_counter()
    pocsets = pocset_corpus(200, seed=0, max_walls=12, max_width=4)
    graphs = [cubing(p)[0] for p in pocsets]
    return pocsets, graphs, time.perf_counter() - start


# -- 1. duality round trip ----------------------------------------------------


@pytest.mark.acceptance(1)
def test_duality_round_trip(corpus):
    pocsets, graphs, build_time = corpus
    start = time.perf_counter()
    for p, g in zip(pocsets, graphs):
        assert p.n_walls <= 12
        cert = dualize_roundtrip(g)
        assert sorted(cert["vertex_map"]) == list(range(g.n_vertices))
        # the cubing's own halfspaces give back the pocset it came from
        assert halfspace_pocset(g) == p
    elapsed = build_time + time.perf_counter() - start
    assert elapsed < 10, f"{elapsed:.1f} s"


# -- 2. metric identities -------------------------------------------------------


@pytest.mark.acceptance(2)
def test_distance_is_separating_wall_count(corpus):
    _, graphs, _ = corpus
    for g in graphs:
        sig = np.array(g.signature, dtype=object)
        walls = np.vectorize(int.bit_count)(sig[:, None] ^ sig[None, :]).astype(np.int64)
        assert np.array_equal(walls, g.dist.astype(np.int64))


def random_convex(rng, g):
    k = rng.randint(1, min(3, g.n_vertices))
    return hull(g, sum(1 << v for v in rng.sample(range(g.n_vertices), k)))


@pytest.mark.acceptance(2)
def test_helly_on_1000_triples(corpus):
    _, graphs, _ = corpus
    rng = random.Random(2)
    pool = [g for g in graphs if g.n_vertices >= 3]
    found = 0
    while found < 1000:
        g = rng.choice(pool)
        sets = [random_convex(rng, g) for _ in range(3)]
        if not all(a & b for a, b in itertools.combinations(sets, 2)):
            continue
        common = helly_check(g, sets)
        assert common is not None and all(s >> common & 1 for s in sets)
        found += 1


@pytest.mark.acceptance(2)
def test_thickening_sandwich_on_500_sets(corpus):
    _, graphs, _ = corpus
    rng = random.Random(3)
    for _ in range(500):
        g = rng.choice(graphs)
        S = random_convex(rng, g)
        R = rng.randint(0, 3)
        thick = thickening(g, S, R)
        verts = sorted(as_set(S))
        reach = g.dist[verts].min(axis=0)
        near = {int(v) for v in np.flatnonzero(reach <= R)}
        far = {int(v) for v in np.flatnonzero(reach <= R * max(g.dim, 1))}
        assert near <= as_set(thick) <= far
        assert is_convex(g, thick)


# -- 3. depth equivalence -----------------------------------------------------


@pytest.mark.acceptance(3)
def test_depth_equivalence(corpus):
    _, graphs, _ = corpus
    checked = 0
    for g in list(graphs) + [grid3x3(), staircase()[0]]:
        for a, b in transverse_pairs(g):
            assert (quarterspace_depth(g, a, b) == 0) == is_depth0_order(g, a, b)
            checked += 1
    assert checked > 0


# -- 4. reduction -------------------------------------------------------------


def reducible(graphs):
    out = []
    for index, g in enumerate(graphs):
        try:
            out.append((index, g, quotient_pocset(g)))
        except DegenerateQuotient:
            pass
    return out


@pytest.mark.acceptance(4)
def test_reduction_invariants_on_corpus(corpus):
    _, graphs, _ = corpus
    start = time.perf_counter()
    cases = reducible(graphs)
    assert cases
    for _, g, Q in cases:
        result = reduce_once(g, quotient=Q)
        has_depth0 = bool(depth0_pairs(g))
        check_reduction(result, has_depth0=has_depth0)
        Y, phi, theta = result.Y, result.phi, result.theta
        assert all(theta[phi[k]] == k for k in range(Y.n_vertices))
        assert len(set(phi)) == len(phi)
        dim = max(g.dim, 1)
        assert all(g.dist[phi[theta[x]], x] <= 2 * dim for x in range(g.n_vertices))
        dX = g.dist[np.ix_(phi, phi)]
        assert (Y.dist <= dX).all() and (dX <= dim * Y.dist).all()
        assert all(Y.degree(k) <= g.degree(phi[k]) for k in range(Y.n_vertices))
        if has_depth0:
            assert Y.n_vertices < g.n_vertices
    assert time.perf_counter() - start < 30


@pytest.mark.acceptance(4)
def test_fixpoint_reaches_zero_depth0_pairs(corpus):
    _, graphs, _ = corpus
    start = time.perf_counter()
    failures = []
    for k, g, _ in reducible(graphs):
        try:
            result = reduce_fixpoint(g)
        except DegenerateQuotient as exc:
            failures.append((k, str(exc), len(exc.detail.get("trace", []))))
            continue
        assert not depth0_pairs(result.Y)
    assert time.perf_counter() - start < 30
    assert not failures, f"fixpoint stopped on a degenerate quotient: {failures}"


@pytest.mark.acceptance(4)
def test_grid_reduces_in_one_step_to_a_single_vertex():
    result = reduce_fixpoint(grid3x3())
    assert len(result.trace) == 1
    assert result.Y.n_vertices == 1


@pytest.mark.acceptance(4)
def test_single_square_is_degenerate():
    with pytest.raises(DegenerateQuotient):
        reduce_once(square())


# -- 5. refinement ------------------------------------------------------------


@pytest.mark.acceptance(5)
def test_star_yields_four_pairs():
    g = star()
    h0 = next(a for a in range(2 * g.n_walls) if as_set(g.oriented(a)) == {0, 1, 2})
    P = refine_halfspace(g, h0, [1 << 2])
    assert P.n_walls == 4
    assert sorted(as_set(c) for c, t in P.pairs if t == h0) == [{0}, {1}]


@pytest.mark.acceptance(5)
def test_refinement_on_50_instances():
    start = time.perf_counter()
    for seed in range(50):
        g, h0, cuts = random_refinement(seed)
        P = refine_halfspace(g, h0, cuts)
        stats = refinement_report(P)
        assert stats["max_edge_crossing"] <= 2 * stats["k_R"]
    assert time.perf_counter() - start < 30


# -- 6. development -------------------------------------------------------------


@pytest.mark.acceptance(6)
def test_development_suite():
    start = time.perf_counter()
    for R in range(6):
        assert develop_ball(torus(), 0, R).n_vertices == 2 * R * R + 2 * R + 1
    for k in (1, 2, 3):
        for R in range(4):
            expected = 1 + sum(2 * k * (2 * k - 1) ** (r - 1) for r in range(1, R + 1))
            assert develop_ball(rose(k), 0, R).n_vertices == expected
    X = genus2()
    fr = genus2_folded()
    Xp = fr.complex
    assert validate_npc(X).ok and validate_npc(Xp).ok
    ball = develop_ball(Xp, fr.vertex, 4)
    ball.inner()
    leaving = fr.edge ^ 1 if Xp.src(fr.edge) != fr.vertex else fr.edge
    sep = local_separation_check(ball, leaving)
    assert sep["components"] == 2 and all(sep["touch_boundary"])
    for sq, base in ((torus(), 0), (rose(2), 0), (X, 0), (Xp, fr.vertex)):
        for R in range(4):
            b = develop_ball(sq, base, R)
            assert slow_develop(sq, base, R) == (b.n_vertices, len(b.graph.edges))
    assert time.perf_counter() - start < 60


# -- 7. determinism -----------------------------------------------------------

COMMANDS = [
    ["validate", "free3.json"],
    ["validate", "cycle5.json"],
    ["cube", "free3.json"],
    ["cube", "--dot", "grid3x3.json"],
    ["cube", "wallspace_nested.json"],
    ["dualize", "staircase.json"],
    ["depth", "grid3x3.json"],
    ["reduce", "--fixpoint", "grid3x3.json"],
    ["reduce", "--preserve", "0+", "grid3x3.json"],
    ["reduce", "square.json"],
    ["refine", "star.json", "--halfspace", "2-", "--cuts", "star_cuts.json"],
    ["refine", "square.json", "--halfspace", "0+", "--aut-gens", "square_rotation.json", "--c0", "1"],
    ["develop", "genus2_folded.json", "--base", "2", "--radius", "3", "--oracle"],
    ["separation", "genus2_folded.json", "--base", "2", "--radius", "4", "--edge", "17"],
    ["export-dot", "staircase.json"],
    ["amalgam", "--m", "2", "--n", "2", "--w1", "a1 b1 A1 B1", "--w2", "a2 b2 A2 B2", "--fold"],
]


def run_cli(args):
    argv = [a if not a.endswith(".json") else str(DATA / a) for a in args]
    done = subprocess.run([sys.executable, "-m", "cubik.cli", *argv], capture_output=True)
    return done.returncode, done.stdout, done.stderr


@pytest.mark.acceptance(7)
@pytest.mark.parametrize("args", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_cli_runs_are_byte_identical(args):
    first, second = run_cli(args), run_cli(args)
    assert first == second
    assert first[0] in (0, 1)
