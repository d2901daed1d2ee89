import random

import networkx as nx
from hypothesis import given, settings, strategies as st

from cubik.clique import clique_number, max_clique


def random_adj(seed, n, density):
    rng = random.Random(seed)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def test_small_cases():
    assert max_clique([]) == []
    assert max_clique([0]) == [0]
    assert clique_number([0b110, 0b101, 0b011]) == 3
    assert clique_number([0b10, 0b01, 0]) == 2


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=1, max_value=18),
       st.floats(min_value=0.1, max_value=0.9))
def test_matches_networkx(seed, n, density):
    adj = random_adj(seed, n, density)
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from((i, j) for i in range(n) for j in range(i + 1, n) if adj[i] >> j & 1)
    best = max(len(c) for c in nx.find_cliques(G))
    clique = max_clique(adj)
    assert len(clique) == best
    assert all(adj[a] >> b & 1 for a in clique for b in clique if a != b)


def test_restriction():
    adj = [0b1110, 0b1101, 0b1011, 0b0111]
    assert clique_number(adj, within=0b0011) == 2
