import pytest

from wcgame.construct import RangeError, build_gnq, build_gq, gq_vertices, in_theorem_range, induction_step, pad_base
from wcgame.formats import instance_hash
from wcgame.graph import verify_instance


@pytest.mark.parametrize("q", range(2, 9))
def test_gq_shape(q):
    inst = build_gq(q)
    assert verify_instance(inst) == []
    assert inst.n == 3 * (q + 1)
    assert inst.graph.m == (q + 1) * (3 * q + 2)
    u0, v0, w0 = inst.anchors
    U, V, W = gq_vertices(q)
    assert (u0, v0, w0) == (U[0], V[0], W[0])
    g = inst.graph
    # each anchor sees the other two anchors and the rest of its own class
    assert g.adjacency[u0] == frozenset(U[1:]) | {v0, w0}
    assert g.adjacency[v0] == frozenset(V[1:]) | {u0, w0}
    assert g.adjacency[w0] == frozenset(W[1:]) | {u0, v0}


def test_gq_rejects_small_q():
    with pytest.raises(RangeError):
        build_gq(1)


def test_theorem_range():
    assert in_theorem_range(9, 2)
    assert not in_theorem_range(9, 3)  # q+1 = 4 is the boundary value for n = 9
    assert not in_theorem_range(10, 1)
    assert in_theorem_range(11, 3)


def test_every_in_range_instance_verifies():
    count = 0
    for n in range(9, 26):
        for q in range(1, n):
            if in_theorem_range(n, q):
                inst = build_gnq(n, q)
                assert verify_instance(inst) == [], (n, q)
                assert (inst.n, inst.q) == (n, q)
                count += 1
    assert count > 50


@pytest.mark.parametrize("n,q", [(9, 3), (10, 1), (8, 2), (12, 5)])
def test_out_of_range_is_an_error(n, q):
    with pytest.raises(RangeError, match="outside"):
        build_gnq(n, q)


def test_build_gnq_is_deterministic_and_seedable():
    a, b = build_gnq(13, 3), build_gnq(13, 3)
    assert instance_hash(a) == instance_hash(b)
    s1, s2 = build_gnq(13, 3, seed=7), build_gnq(13, 3, seed=7)
    assert instance_hash(s1) == instance_hash(s2)
    assert verify_instance(build_gnq(13, 3, seed=8)) == []


def test_pad_base_keeps_anchor_degrees():
    inst = pad_base(build_gq(2), 15)
    assert verify_instance(inst) == []
    for a in inst.anchors:
        assert inst.graph.degree(a) == 4


def test_induction_step_from_g2():
    grown = induction_step(build_gq(2))
    assert (grown.n, grown.q) == (11, 3) and in_theorem_range(11, 3)
    assert verify_instance(grown) == []


def test_induction_step_needs_anchors():
    base = build_gq(2)
    with pytest.raises(RangeError, match="anchored"):
        induction_step(type(base)(base.graph, base.decomposition, base.q))


def test_induction_step_adds_a_tree():
    base = pad_base(build_gq(2), 11)
    grown = induction_step(base)
    assert (grown.n, grown.q) == (13, 3)
    assert verify_instance(grown) == []
    assert grown.graph.edges[: base.graph.m] == base.graph.edges
