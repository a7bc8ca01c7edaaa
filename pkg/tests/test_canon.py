import networkx as nx
import pytest
from hypothesis import given, strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from wcgame.canon import CanonCapError, automorphisms, canonical_form, canonical_labeling, edge_permutation, relabel
from wcgame.graph import Graph, complete_graph

from oracles import from_nx, to_nx


@st.composite
def graph_and_perm(draw):
    n = draw(st.integers(1, 9))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(range(n)))
    return Graph.from_pairs(n, edges), list(perm)


@given(graph_and_perm())
def test_canonical_form_is_relabel_invariant(case):
    g, perm = case
    assert canonical_form(g) == canonical_form(relabel(g, perm))


def test_atlas_classes_are_distinct():
    codes = {}
    for h in nx.graph_atlas_g()[1:]:
        code = canonical_form(from_nx(h))
        assert code not in codes, "two non-isomorphic atlas graphs share a code"
        codes[code] = h
    assert len(codes) == 1252


def test_canonical_labeling_realizes_code():
    g = Graph.from_pairs(5, [(0, 1), (1, 2), (2, 3), (1, 4)])
    code, order = canonical_labeling(g)
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    assert canonical_form(relabel(g, perm)) == code


def test_cap_enforced():
    with pytest.raises(CanonCapError):
        canonical_form(complete_graph(13))


@pytest.mark.parametrize("idx", [5, 17, 40, 99, 208, 400, 800, 1200])
def test_automorphism_counts_match_networkx(idx):
    h = nx.graph_atlas(idx)
    g = from_nx(h)
    autos = automorphisms(g)
    expected = sum(1 for _ in GraphMatcher(to_nx(g), to_nx(g)).isomorphisms_iter())
    assert len(autos) == expected
    for a in autos:
        assert sorted(edge_permutation(g, a)) == list(range(g.m))


def test_automorphism_limit_returns_none():
    assert automorphisms(complete_graph(6), limit=10) is None
    assert len(automorphisms(complete_graph(4))) == 24
