"""Canonical forms and automorphisms for small graphs (n <= 12).

Individualization-refinement without automorphism pruning, except that
twins inside a cell (vertices with equal neighbourhoods apart from each other)
are tried only once; swapping twins is always an automorphism.
"""
from __future__ import annotations

from typing import Iterator, Optional

from .graph import Graph, GraphError

DEFAULT_CAP = 12


class CanonCapError(GraphError):
    pass


def _refine(adj: list[int], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement: split cells by neighbour counts into every cell."""
    while True:
        masks = [sum(1 << v for v in c) for c in cells]
        new: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            sig: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                key = tuple(bin(adj[v] & m).count("1") for m in masks)
                sig.setdefault(key, []).append(v)
            if len(sig) > 1:
                changed = True
                for key in sorted(sig):
                    new.append(sig[key])
            else:
                new.append(cell)
        cells = new
        if not changed:
            return cells


def _code(adj: list[int], order: list[int]) -> bytes:
    n = len(order)
    bits = 0
    for i in range(n):
        ai = adj[order[i]]
        for j in range(i + 1, n):
            bits = (bits << 1) | ((ai >> order[j]) & 1)
    nbytes = (n * (n - 1) // 2 + 7) // 8
    return bytes([n]) + bits.to_bytes(nbytes, "big")


def _leaves(adj: list[int], cells: list[list[int]]) -> Iterator[list[int]]:
    cells = _refine(adj, cells)
    target = None
    for idx, cell in enumerate(cells):
        if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
            target = idx
    if target is None:
        yield [c[0] for c in cells]
        return
    cell = cells[target]
    tried: list[int] = []
    for v in cell:
        if any((adj[v] & ~(1 << w)) == (adj[w] & ~(1 << v)) for w in tried):
            continue
        tried.append(v)
        rest = [w for w in cell if w != v]
        yield from _leaves(adj, cells[:target] + [[v], rest] + cells[target + 1:])


def _bitadj(g: Graph) -> list[int]:
    return [sum(1 << w for w in g.adjacency[v]) for v in range(g.n)]


def canonical_labeling(g: Graph, cap: int = DEFAULT_CAP) -> tuple[bytes, list[int]]:
    """Canonical code and a vertex order achieving it (``order[i]`` gets label ``i``)."""
    if g.n > cap:
        raise CanonCapError(f"canonical form limited to n <= {cap}, got n={g.n}")
    adj = _bitadj(g)
    if g.n == 0:
        return bytes([0]), []
    best: Optional[tuple[bytes, list[int]]] = None
    for order in _leaves(adj, [list(range(g.n))]):
        code = _code(adj, order)
        if best is None or code < best[0]:
            best = (code, order)
    assert best is not None
    return best


def canonical_form(g: Graph, cap: int = DEFAULT_CAP) -> bytes:
    return canonical_labeling(g, cap)[0]


def relabel(g: Graph, perm: list[int]) -> Graph:
    """Image of ``g`` under the vertex map ``v -> perm[v]`` (edge order follows ``g``)."""
    return Graph.from_pairs(g.n, ((perm[u], perm[v]) for u, v in g.edges))


def automorphisms(g: Graph, limit: int = 20000, cap: int = DEFAULT_CAP) -> Optional[list[tuple[int, ...]]]:
    """All vertex automorphisms of ``g``, or None if there are more than ``limit``.

    Plain backtracking with degree and adjacency consistency checks.
    """
    if g.n > cap:
        raise CanonCapError(f"automorphism search limited to n <= {cap}, got n={g.n}")
    n = g.n
    adj = g.adjacency
    deg = g.degrees()
    # refined cells give a sound colouring: automorphisms preserve them
    cells = _refine(_bitadj(g), [list(range(n))]) if n else []
    colour = [0] * n
    for i, c in enumerate(cells):
        for v in c:
            colour[v] = i
    order = sorted(range(n), key=lambda v: (len(cells[colour[v]]), -deg[v], v))
    found: list[tuple[int, ...]] = []
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            found.append(tuple(image))
            return len(found) <= limit
        v = order[i]
        for w in cells[colour[v]]:
            if used[w]:
                continue
            ok = True
            for x in order[:i]:
                if (x in adj[v]) != (image[x] in adj[w]):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used[w] = True
            if not extend(i + 1):
                return False
            used[w] = False
            image[v] = -1
        return True

    if not extend(0):
        return None
    return found


def edge_permutation(g: Graph, perm: tuple[int, ...]) -> tuple[int, ...]:
    """Edge-index map induced by an automorphism ``perm``."""
    return tuple(g.edge_index(perm[u], perm[v]) for u, v in g.edges)
