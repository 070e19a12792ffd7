import itertools

import pytest

from modres import Graph


def naive_degrees(G, verts, q):
    return tuple(sum(1 for w in verts if w != v and (G.adj[v] >> w) & 1) % q for v in verts)


def naive_best(G, q, pred):
    """Largest nonempty vertex subset satisfying ``pred(degree residues)`` by brute force."""
    for k in range(G.n, 0, -1):
        for S in itertools.combinations(range(G.n), k):
            if pred(naive_degrees(G, S, q)):
                return k, S
    return 0, None


@pytest.fixture
def triangle():
    return Graph.complete(3)


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])
