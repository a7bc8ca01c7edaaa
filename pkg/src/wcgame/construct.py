"""Constructors for the anchored graph families G(q) and G(n, q)."""
from __future__ import annotations

import random
from typing import Optional

from .graph import Decomposition, Graph, GraphError, Instance, complete_graph
from .packing import decompose_complete


class RangeError(GraphError):
    pass


def _assemble(n: int, trees: list[list[tuple[int, int]]], q: int,
              anchors: Optional[tuple[int, int, int]], label: str) -> Instance:
    pairs = [(min(u, v), max(u, v)) for tree in trees for u, v in tree]
    order = sorted(set(pairs))
    if len(order) != len(pairs):
        raise GraphError("trees share an edge")
    g = Graph(n, tuple(order))
    dec = Decomposition(tuple(frozenset(g.edge_index(u, v) for u, v in tree) for tree in trees))
    return Instance(g, dec, q, anchors, label)


def gq_vertices(q: int) -> tuple[list[int], list[int], list[int]]:
    """Vertex ids of the classes U, V, W of G(q); index 0 of each is the anchor."""
    return (list(range(q + 1)),
            list(range(q + 1, 2 * q + 2)),
            list(range(2 * q + 2, 3 * q + 3)))


def build_gq(q: int) -> Instance:
    if q < 2:
        raise RangeError(f"G(q) needs q >= 2, got q={q}")
    U, V, W = gq_vertices(q)
    u0, v0, w0 = U[0], V[0], W[0]
    trees: list[list[tuple[int, int]]] = [
        [(u0, U[1]), (u0, v0), (v0, w0)],
        [(v0, V[1]), (u0, w0), (w0, W[1])],
    ]
    for i in range(2, q + 1):
        trees.append([(u0, U[i]), (v0, V[i]), (w0, W[i])])
    outer = U[1:] + V[1:] + W[1:]
    inner = decompose_complete(3 * q, q + 1)
    k3q = complete_graph(3 * q)
    for tree, local in zip(trees, inner.trees):
        for e in sorted(local):
            a, b = k3q.edges[e]
            tree.append((outer[a], outer[b]))
    return _assemble(3 * (q + 1), trees, q, (u0, v0, w0), f"G({q})")


def _trees_as_pairs(inst: Instance) -> list[list[tuple[int, int]]]:
    g = inst.graph
    return [[g.edges[e] for e in sorted(t)] for t in inst.decomposition.trees]


def _extend(inst: Instance, n: int, trees: list[list[tuple[int, int]]], q: int, label: str) -> Instance:
    """Keep the parent's edge order and append new edges in tree order."""
    old = list(inst.graph.edges)
    seen = set(old)
    extra = [e for tree in trees for e in ((min(u, v), max(u, v)) for u, v in tree) if e not in seen]
    g = Graph(n, tuple(old + extra))
    dec = Decomposition(tuple(frozenset(g.edge_index(u, v) for u, v in tree) for tree in trees))
    return Instance(g, dec, q, inst.anchors, label)


def pad_base(base: Instance, target_n: int, seed: Optional[int] = None) -> Instance:
    """Grow G(2) to ``target_n`` vertices; each new vertex gets one edge into each tree.

    Deterministic by default: new vertices alternate between the first and the
    last three non-anchor vertices of the base. With ``seed`` the three
    neighbours and their tree assignment are drawn at random instead.
    """
    if target_n < 9:
        raise RangeError(f"padding target must be >= 9, got {target_n}")
    if base.anchors is None or base.q != 2 or base.n > target_n:
        raise RangeError("pad_base expects an anchored 3-tree base on at most target_n vertices")
    others = [v for v in range(base.n) if v not in base.anchors]
    rng = random.Random(seed) if seed is not None else None
    trees = _trees_as_pairs(base)
    for j, x in enumerate(range(base.n, target_n)):
        if rng is None:
            picks = others[:3] if j % 2 == 0 else others[-3:]
        else:
            picks = rng.sample(others, 3)
        for tree, y in zip(trees, picks):
            tree.append((y, x))
    return _extend(base, target_n, trees, 2, f"{base.label}+pad{target_n}")


def induction_step(inst: Instance) -> Instance:
    """Two new vertices and one new tree: G(n0, q0) -> G(n0 + 2, q0 + 1)."""
    if inst.anchors is None:
        raise RangeError("induction_step needs an anchored instance")
    n0, q0 = inst.n, inst.q
    others = [v for v in range(n0) if v not in inst.anchors]
    half = (n0 - 3) // 2
    if half < q0 + 1:
        raise RangeError(f"floor((n0-3)/2)={half} < q0+1={q0 + 1}: not enough vertices to attach every tree")
    V2, V3 = others[:half], others[half:]
    u, v = n0, n0 + 1
    trees = _trees_as_pairs(inst)
    for i, tree in enumerate(trees):
        tree.append((V2[i], u))
        tree.append((V3[i], v))
    new = [(u, v)] + [(a, u) for a in inst.anchors] + [(y, u) for y in V3] + [(x, v) for x in V2]
    trees.append(new)
    return _extend(inst, n0 + 2, trees, q0 + 1, f"G({n0 + 2},{q0 + 1})")


def in_theorem_range(n: int, q: int) -> bool:
    return 2 < q + 1 < (n - 1) // 2


def build_gnq(n: int, q: int, seed: Optional[int] = None) -> Instance:
    if not in_theorem_range(n, q):
        raise RangeError(f"(n={n}, q={q}) outside 2 < q+1 < floor((n-1)/2)")
    inst = pad_base(build_gq(2), n - 2 * (q - 2), seed=seed)
    for _ in range(q - 2):
        inst = induction_step(inst)
    return Instance(inst.graph, inst.decomposition, inst.q, inst.anchors, f"G({n},{q})")
