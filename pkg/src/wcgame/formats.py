"""Text, JSON and DOT formats for graphs and instances."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Union

from .graph import Decomposition, Graph, GraphError, Instance

TREE_COLOURS = ["red", "blue", "darkgreen", "orange", "purple", "brown",
                "magenta", "cyan", "gold", "gray", "olive", "navy"]


class FormatError(GraphError):
    pass


def graph_to_text(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise FormatError("missing 'n m' header line")
    try:
        n, m = map(int, rows[0])
        pairs = [tuple(map(int, r)) for r in rows[1:]]
    except ValueError as exc:
        raise FormatError(f"non-integer token: {exc}") from None
    if any(len(p) != 2 for p in pairs):
        raise FormatError("every edge line must hold exactly two vertices")
    if len(pairs) != m:
        raise FormatError(f"header announces {m} edges, found {len(pairs)}")
    return Graph.from_pairs(n, pairs)


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    return {
        "n": inst.n,
        "q": inst.q,
        "edges": [list(e) for e in inst.graph.edges],
        "trees": [sorted(t) for t in inst.decomposition.trees],
        "anchors": list(inst.anchors) if inst.anchors is not None else None,
    }


def instance_from_dict(data: dict[str, Any]) -> Instance:
    try:
        n, q = int(data["n"]), int(data["q"])
        pairs = [tuple(e) for e in data["edges"]]
        trees = data["trees"]
        anchors = data.get("anchors")
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed instance: {exc!r}") from None
    if any(len(p) != 2 or p[0] >= p[1] for p in pairs):
        raise FormatError("edges must be [u, v] pairs with u < v")
    g = Graph(n, tuple((int(u), int(v)) for u, v in pairs))
    if anchors is not None:
        if len(anchors) != 3:
            raise FormatError("anchors must be a triple or null")
        anchors = tuple(int(a) for a in anchors)
    return Instance(g, Decomposition.of(trees), q, anchors)


def instance_to_json(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), sort_keys=True) + "\n"


def instance_from_json(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return instance_from_dict(data)


def instance_hash(inst: Instance) -> str:
    """Stable digest binding certificates and reports to one instance."""
    return hashlib.sha256(instance_to_json(inst).encode()).hexdigest()[:16]


def load_instance(path: Union[str, Path]) -> Instance:
    return instance_from_json(Path(path).read_text())


def save_instance(inst: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(instance_to_json(inst))


def instance_to_dot(inst: Instance) -> str:
    g = inst.graph
    tree_of = inst.decomposition.tree_of()
    anchors = set(inst.anchors or ())
    out = [f'graph "{inst.label or "instance"}" {{', "  node [shape=circle];"]
    for v in range(g.n):
        style = ' style=filled fillcolor="lightgray" penwidth=2' if v in anchors else ""
        out.append(f'  {v} [label="{v}"{style}];')
    for i, (u, v) in enumerate(g.edges):
        t = tree_of.get(i)
        colour = TREE_COLOURS[t % len(TREE_COLOURS)] if t is not None else "black"
        out.append(f'  {u} -- {v} [color="{colour}" label="{i}" tree="{t}"];')
    out.append("}")
    return "\n".join(out) + "\n"
