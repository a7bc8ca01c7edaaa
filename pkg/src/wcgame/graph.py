"""Board graphs, tree decompositions and game instances.

Vertices are ``0..n-1``. Edges are kept as an ordered tuple of pairs ``(u, v)``
with ``u < v``; the position of a pair in that tuple is its *edge index*, which
is the identity every other module uses (offers, free sets, trees).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    pass


class DisjointSet:
    """Union-find over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def classes(self) -> list[frozenset[int]]:
        groups: dict[int, set[int]] = {}
        for v in range(len(self.parent)):
            groups.setdefault(self.find(v), set()).add(v)
        return sorted((frozenset(c) for c in groups.values()), key=min)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < v < self.n):
                raise GraphError(f"edge ({u},{v}) is not a normalized pair below n={self.n}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u},{v})")
            seen.add((u, v))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph, normalizing each pair to ``(min, max)`` and keeping order."""
        return cls(n, tuple((min(u, v), max(u, v)) for u, v in pairs))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def edge_index(self, u: int, v: int) -> int:
        try:
            return self.index[(min(u, v), max(u, v))]
        except KeyError:
            raise GraphError(f"({u},{v}) is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.index

    @cached_property
    def incidence(self) -> tuple[int, ...]:
        """Per-vertex bit mask of incident edge indices."""
        masks = [0] * self.n
        for i, (u, v) in enumerate(self.edges):
            masks[u] |= 1 << i
            masks[v] |= 1 << i
        return tuple(masks)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def check_indices(self, indices: Iterable[int]) -> None:
        for i in indices:
            if not (0 <= i < self.m):
                raise GraphError(f"edge index {i} out of range 0..{self.m - 1}")


def complete_graph(m: int) -> Graph:
    """K_m with edges in lexicographic order."""
    return Graph(m, tuple((u, v) for u in range(m) for v in range(u + 1, m)))


@dataclass(frozen=True)
class Decomposition:
    trees: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, trees: Iterable[Iterable[int]]) -> "Decomposition":
        return cls(tuple(frozenset(t) for t in trees))

    @property
    def k(self) -> int:
        return len(self.trees)

    def tree_of(self) -> dict[int, int]:
        return {e: i for i, t in enumerate(self.trees) for e in t}


@dataclass(frozen=True)
class PartitionWitness:
    """A vertex partition with too few crossing edges to carry ``k`` spanning trees."""

    parts: tuple[frozenset[int], ...]
    cross_count: int
    k: int

    def verify(self, g: Graph) -> bool:
        label = {}
        for i, part in enumerate(self.parts):
            for v in part:
                if v in label:
                    return False
                label[v] = i
        if sorted(label) != list(range(g.n)) or len(self.parts) < 2:
            return False
        if any(not p for p in self.parts):
            return False
        cross = sum(1 for u, v in g.edges if label[u] != label[v])
        return cross == self.cross_count and cross < self.k * (len(self.parts) - 1)


@dataclass(frozen=True)
class Instance:
    graph: Graph
    decomposition: Decomposition
    q: int
    anchors: Optional[tuple[int, int, int]] = None
    label: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return self.graph.n


def components(n: int, chosen: Iterable[int], graph: Graph) -> list[frozenset[int]]:
    """Connected components of ``(range(n), chosen edges)``, sorted by smallest vertex."""
    chosen = list(chosen)
    graph.check_indices(chosen)
    ds = DisjointSet(n)
    for i in chosen:
        u, v = graph.edges[i]
        ds.union(u, v)
    return ds.classes()


def is_spanning_tree(n: int, edges: Iterable[int], graph: Graph) -> bool:
    edges = set(edges)
    graph.check_indices(edges)
    if len(edges) != n - 1:
        return False
    ds = DisjointSet(n)
    for i in edges:
        u, v = graph.edges[i]
        if not ds.union(u, v):
            return False
    return True


def verify_instance(inst: Instance) -> list[str]:
    """Every violated Instance/Decomposition invariant; an empty list means valid."""
    g, dec, q = inst.graph, inst.decomposition, inst.q
    problems: list[str] = []
    if q < 0:
        problems.append(f"q={q} is negative")
    if dec.k != q + 1:
        problems.append(f"decomposition has {dec.k} trees, expected q+1={q + 1}")
    if g.m != (q + 1) * (g.n - 1):
        problems.append(f"graph has {g.m} edges, expected (q+1)(n-1)={(q + 1) * (g.n - 1)}")
    owner: dict[int, int] = {}
    for t, tree in enumerate(dec.trees):
        bad = [i for i in tree if not (0 <= i < g.m)]
        if bad:
            problems.append(f"tree {t} has out-of-range edge indices {sorted(bad)}")
            continue
        for i in sorted(tree):
            if i in owner:
                problems.append(f"edge {i} lies in trees {owner[i]} and {t}")
            else:
                owner[i] = t
        if len(tree) != g.n - 1:
            problems.append(f"tree {t} has {len(tree)} edges, expected {g.n - 1}")
        elif not is_spanning_tree(g.n, tree, g):
            problems.append(f"tree {t} is not a spanning tree")
    uncovered = sorted(set(range(g.m)) - set(owner))
    if uncovered:
        problems.append(f"edges {uncovered} belong to no tree")
    if inst.anchors is not None:
        anchors = inst.anchors
        if len(set(anchors)) != 3 or any(not (0 <= a < g.n) for a in anchors):
            problems.append(f"anchors {anchors} are not three distinct vertices")
        else:
            a, b, c = anchors
            for x, y in ((a, b), (b, c), (a, c)):
                if not g.has_edge(x, y):
                    problems.append(f"anchor pair ({x},{y}) is not an edge")
            for x in anchors:
                if g.degree(x) != q + 2:
                    problems.append(f"anchor degree ≠ q+2: vertex {x} has degree {g.degree(x)}, expected {q + 2}")
    return problems
