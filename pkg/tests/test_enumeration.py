import json

import networkx as nx
import pytest

from wcgame.canon import canonical_labeling
from wcgame.certificate import replay_certificate
from wcgame.construct import RangeError
from wcgame.enumeration import (boundary_q, complement, complement_classes, enumerate_decomposable,
                                verify_remark)
from wcgame.game import Side
from wcgame.graph import verify_instance
from wcgame.solver import SolveConfig

from oracles import from_nx, labelled_complement_classes, partition_condition, to_nx


def test_boundary_q():
    # q+1 = floor((n-1)/2) - 1 would still be constructive; the boundary is one above
    assert [boundary_q(n) for n in (7, 8, 9)] == [2, 2, 3]


@pytest.mark.parametrize("n,size", [(5, 2), (6, 3), (7, 3), (7, 4)])
def test_complement_classes_match_networkx(n, size):
    ours = complement_classes(n, size)
    ref = labelled_complement_classes(n, size)
    assert len(ours) == len(ref)
    for h in ref:
        assert sum(nx.is_isomorphic(h, to_nx(g)) for g in ours) == 1


@pytest.mark.parametrize("n,q", [(5, 1), (6, 1), (6, 2), (7, 2)])
def test_enumeration_is_complete(n, q):
    total = n * (n - 1) // 2
    size = total - (q + 1) * (n - 1)
    expected = [h for h in labelled_complement_classes(n, size)
                if partition_condition(from_nx(nx.complement(h)), q + 1)]
    got = enumerate_decomposable(n, q)
    assert len(got) == len(expected)
    for h in expected:
        target = nx.complement(h)
        assert sum(nx.is_isomorphic(target, to_nx(inst.graph)) for inst in got) == 1


def test_instances_are_valid_and_distinct():
    insts = enumerate_decomposable(7, 2)
    assert len(insts) == 5
    codes = {canonical_labeling(inst.graph)[0] for inst in insts}
    assert len(codes) == len(insts)
    for inst in insts:
        assert verify_instance(inst) == []
        assert inst.anchors is None
        assert inst.graph.m == 3 * 6


def test_complement_roundtrip():
    g = complement_classes(6, 3)[0]
    assert complement(complement(g)) == g


@pytest.mark.parametrize("n,q", [(9, 4), (10, 3), (0, 1), (5, -1)])
def test_out_of_range(n, q):
    with pytest.raises(RangeError):
        enumerate_decomposable(n, q)


def test_remark_at_seven():
    report = verify_remark(7)
    assert report.q == 2 and len(report.instances) == 5
    assert report.verified and report.conclusion.startswith("verified")
    insts = {inst.label.rsplit("-", 1)[-1]: inst for inst in enumerate_decomposable(7, 2)}
    for v in report.instances:
        assert v.winner is Side.WAITER
        assert replay_certificate(insts[v.canonical_code], v.certificate) > 0


def test_tiny_budget_gives_unknown():
    report = verify_remark(7, SolveConfig(pruning="obs1", budget=0.001))
    assert report.unknown == len(report.instances)
    assert report.conclusion.startswith("partial") and not report.verified and not report.refuted


def test_report_json_shape():
    report = verify_remark(5, q=1)
    data = json.loads(report.to_json())
    assert set(data) == {"n", "q", "instances", "conclusion"}
    assert set(data["instances"][0]) == {"canonical_code", "winner", "nodes", "elapsed_ms"}
    stable = json.loads(report.to_json(timings=False))
    assert "elapsed_ms" not in stable["instances"][0]
    assert report.to_json(timings=False) == verify_remark(5, q=1).to_json(timings=False)
