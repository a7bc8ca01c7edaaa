"""Spanning tree packings.

``decompose_complete`` is the explicit Walecki-style construction for complete
graphs. ``tree_packing`` handles arbitrary graphs by matroid partitioning over
``k`` copies of the graphic matroid and, when no packing exists, returns a
vertex partition that certifies it.
"""
from __future__ import annotations

from collections import deque
from typing import Union

from .graph import Decomposition, DisjointSet, Graph, GraphError, PartitionWitness, complete_graph


class InfeasibleError(GraphError):
    pass


def zigzag_path(start: int, size: int) -> list[int]:
    """Hamiltonian path ``start, start+1, start-1, start+2, ...`` of K_size (size even)."""
    seq = [start % size]
    for j in range(1, size // 2 + 1):
        seq.append((start + j) % size)
        if len(seq) < size:
            seq.append((start - j) % size)
    return seq


def decompose_complete(m: int, k: int) -> Decomposition:
    """``k`` edge-disjoint spanning paths of ``complete_graph(m)``.

    Even ``m`` splits K_m into ``m/2`` Hamiltonian paths. Odd ``m`` takes the
    paths of K_{m-1} and hangs the extra vertex off one end of each, which is a
    Hamiltonian cycle of K_m with one edge dropped.
    """
    if m < 2:
        raise InfeasibleError(f"K_{m} has no spanning tree packing to build (m < 2)")
    if k > m // 2:
        raise InfeasibleError(f"K_{m} has at most {m // 2} edge-disjoint spanning trees, asked for {k}")
    g = complete_graph(m)
    even = m - (m % 2)
    trees = []
    for i in range(k):
        path = zigzag_path(i, even)
        if m % 2:
            path.append(m - 1)
        trees.append(frozenset(g.edge_index(a, b) for a, b in zip(path, path[1:])))
    return Decomposition(tuple(trees))


def leftover_edges(g: Graph, dec: Decomposition) -> list[int]:
    used = set().union(*dec.trees) if dec.trees else set()
    return [i for i in range(g.m) if i not in used]


class _Forest:
    """Adjacency-list forest over a subset of a graph's edges."""

    def __init__(self, g: Graph):
        self.g = g
        self.adj: list[dict[int, int]] = [dict() for _ in range(g.n)]  # vertex -> {nbr: edge}
        self.edges: set[int] = set()

    def add(self, e: int) -> None:
        u, v = self.g.edges[e]
        self.adj[u][v] = e
        self.adj[v][u] = e
        self.edges.add(e)

    def remove(self, e: int) -> None:
        u, v = self.g.edges[e]
        del self.adj[u][v]
        del self.adj[v][u]
        self.edges.discard(e)

    def path(self, s: int, t: int) -> list[int] | None:
        """Edge indices on the forest path from ``s`` to ``t``, or None if disconnected."""
        if s == t:
            return []
        prev = {s: (-1, -1)}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, e in self.adj[x].items():
                if y not in prev:
                    prev[y] = (x, e)
                    if y == t:
                        out = []
                        while y != s:
                            y, e = prev[y]
                            out.append(e)
                        return out
                    queue.append(y)
        return None


def _augment(g: Graph, forests: list[_Forest], owner: list[int], start: int) -> bool:
    """Try to insert edge ``start`` by a shortest exchange sequence (matroid partition)."""
    label: dict[int, tuple[int, int]] = {start: (-1, -1)}  # edge -> (edge whose cycle it lies on, forest)
    queue = deque([start])
    while queue:
        e = queue.popleft()
        u, v = g.edges[e]
        for i, forest in enumerate(forests):
            if owner[e] == i:
                continue
            cycle = forest.path(u, v)
            if cycle is None:
                # e enters forest i; each displaced edge takes its successor's old slot
                target = i
                while e != -1:
                    parent = label[e][0]
                    old = owner[e]
                    if old >= 0:
                        forests[old].remove(e)
                    forests[target].add(e)
                    owner[e] = target
                    target = old
                    e = parent
                return True
            for f in cycle:
                if f not in label:
                    label[f] = (e, i)
                    queue.append(f)
    return False


def _max_forest_packing(g: Graph, k: int) -> tuple[list[_Forest], list[int]]:
    forests = [_Forest(g) for _ in range(k)]
    owner = [-1] * g.m
    if k == 0:
        return forests, owner
    for e in range(g.m):
        _augment(g, forests, owner, e)
    return forests, owner


def _blocking_partition(g: Graph, forests: list[_Forest], owner: list[int]) -> list[frozenset[int]]:
    """Components of the edge set reachable from unpacked edges in the exchange graph."""
    reached = {e for e in range(g.m) if owner[e] < 0}
    queue = deque(reached)
    while queue:
        e = queue.popleft()
        u, v = g.edges[e]
        for i, forest in enumerate(forests):
            if owner[e] == i:
                continue
            cycle = forest.path(u, v)
            assert cycle is not None, "packing was not maximum"
            for f in cycle:
                if f not in reached:
                    reached.add(f)
                    queue.append(f)
    ds = DisjointSet(g.n)
    for e in reached:
        ds.union(*g.edges[e])
    return ds.classes()


def tree_packing(g: Graph, k: int) -> Union[Decomposition, PartitionWitness]:
    """``k`` edge-disjoint spanning trees of ``g``, or a partition proving there are none."""
    if k < 0:
        raise GraphError("k must be non-negative")
    forests, owner = _max_forest_packing(g, k)
    if all(len(f.edges) == g.n - 1 for f in forests):
        return Decomposition(tuple(frozenset(f.edges) for f in forests))
    parts = _blocking_partition(g, forests, owner)
    label = {v: i for i, p in enumerate(parts) for v in p}
    cross = sum(1 for u, v in g.edges if label[u] != label[v])
    return PartitionWitness(tuple(parts), cross, k)


def has_tree_packing(g: Graph, k: int) -> bool:
    return isinstance(tree_packing(g, k), Decomposition)
