import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from wcgame.graph import Decomposition, Graph, GraphError, PartitionWitness, complete_graph, is_spanning_tree
from wcgame.packing import (InfeasibleError, decompose_complete, has_tree_packing, leftover_edges,
                            tree_packing, zigzag_path)

from oracles import from_nx, partition_condition


def check_packing(g, dec, k):
    assert dec.k == k
    seen = set()
    for t in dec.trees:
        assert is_spanning_tree(g.n, t, g)
        assert not (seen & t)
        seen |= t


@pytest.mark.parametrize("size", [2, 4, 6, 8, 10])
def test_zigzag_paths_decompose_even_complete_graph(size):
    g = complete_graph(size)
    used = []
    for start in range(size // 2):
        path = zigzag_path(start, size)
        assert sorted(path) == list(range(size))
        used += [g.edge_index(a, b) for a, b in zip(path, path[1:])]
    assert sorted(used) == list(range(g.m))


@pytest.mark.parametrize("m", range(2, 16))
def test_decompose_complete_max_trees(m):
    g = complete_graph(m)
    dec = decompose_complete(m, m // 2)
    check_packing(g, dec, m // 2)
    # even m uses every edge, odd m leaves (m-1)/2 over
    assert len(leftover_edges(g, dec)) == g.m - (m // 2) * (m - 1)


def test_decompose_complete_errors():
    with pytest.raises(InfeasibleError, match="at most 3"):
        decompose_complete(7, 4)
    with pytest.raises(InfeasibleError):
        decompose_complete(1, 1)


def test_tree_packing_rejects_negative_k():
    with pytest.raises(GraphError):
        tree_packing(complete_graph(3), -1)


def test_two_triangles_give_witness():
    g = Graph.from_pairs(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    w = tree_packing(g, 2)
    assert isinstance(w, PartitionWitness)
    assert w.verify(g)


def _agrees(g, k):
    res = tree_packing(g, k)
    expected = partition_condition(g, k)
    if isinstance(res, Decomposition):
        check_packing(g, res, k)
        return expected
    return (not expected) and res.verify(g)


def test_atlas_graphs_up_to_six_vertices():
    # every graph with at most 6 vertices, one per isomorphism class
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() > 6:
            break
        g = from_nx(h)
        for k in (1, 2, 3):
            assert _agrees(g, k), (g.edges, k)


def test_random_graphs_up_to_nine_vertices():
    rng = random.Random(20240611)
    for _ in range(200):
        n = rng.randint(2, 9)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        k = rng.randint(1, max(1, n // 2))
        m = min(len(pairs), rng.randint(k * (n - 1) - 2, k * (n - 1) + 6))
        g = Graph.from_pairs(n, rng.sample(pairs, max(0, m)))
        assert _agrees(g, k), (g.n, g.edges, k)


@given(st.integers(2, 8), st.integers(1, 3), st.randoms(use_true_random=False))
def test_union_of_random_trees_is_packable(n, k, rnd):
    # grow k random spanning trees edge-disjointly when possible
    pairs = {(u, v) for u in range(n) for v in range(u + 1, n)}
    if k * (n - 1) > len(pairs):
        return
    used = set()
    for _ in range(k):
        order = list(range(n))
        rnd.shuffle(order)
        for i in range(1, n):
            options = [(min(order[i], order[j]), max(order[i], order[j])) for j in range(i)]
            options = [p for p in options if p not in used]
            if not options:
                return
            used.add(rnd.choice(options))
    g = Graph.from_pairs(n, sorted(used))
    assert has_tree_packing(g, k)
