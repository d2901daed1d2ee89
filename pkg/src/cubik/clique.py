"""Exact maximum clique on small graphs given as bitmask adjacency lists."""


def _colour_bound(cand, adj):
    # greedy colouring: each colour class is an independent set, so the
    # number of classes bounds the clique size inside ``cand``
    order = []
    bounds = []
    colour = 0
    uncoloured = cand
    while uncoloured:
        colour += 1
        avail = uncoloured
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~adj[v] & ~(1 << v)
            uncoloured &= ~(1 << v)
            order.append(v)
            bounds.append(colour)
    return order, bounds


def max_clique(adj, within=None):
    """Return a maximum clique (sorted list) of the graph restricted to ``within``.

    ``adj[v]`` is the neighbour bitmask of vertex ``v``; self-loops are ignored.
    """
    n = len(adj)
    cand = (1 << n) - 1 if within is None else within
    adj = [a & ~(1 << v) for v, a in enumerate(adj)]
    best = []

    def expand(clique, cand):
        nonlocal best
        order, bounds = _colour_bound(cand, adj)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(best):
                return
            v = order[i]
            clique.append(v)
            new = cand & adj[v]
            if new:
                expand(clique, new)
            elif len(clique) > len(best):
                best = list(clique)
            clique.pop()
            cand &= ~(1 << v)

    if cand:
        expand([], cand)
    return sorted(best)


def clique_number(adj, within=None):
    return len(max_clique(adj, within))
