"""All decomposable boards of a given size, up to isomorphism, and the boundary check.

A board with ``(q+1)(n-1)`` edges on ``n`` vertices is the complement of a
graph with ``n(n-1)/2 - (q+1)(n-1)`` edges. Complements are few and small, so
they are grown one edge at a time, deduplicated by canonical form, and each
is kept if its complement packs ``q+1`` spanning trees.
"""
from __future__ import annotations

import dataclasses
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .canon import canonical_labeling
from .certificate import StrategyCertificate
from .construct import RangeError
from .game import Side, new_game
from .graph import Decomposition, Graph, Instance
from .packing import tree_packing
from .solver import SolveConfig, Solver

MAX_N = 9


def boundary_q(n: int) -> int:
    """The q just outside the constructive range: q+1 = (n-1)/2 for odd n, n/2 - 1 for even n."""
    return (n - 1) // 2 - 1 if n % 2 else n // 2 - 2


def complement_classes(n: int, size: int) -> list[Graph]:
    """Graphs on ``n`` vertices with ``size`` edges, one per isomorphism class, canonically labelled."""
    level = {canonical_labeling(Graph(n, ()))[0]: Graph(n, ())}
    for _ in range(size):
        nxt: dict[bytes, Graph] = {}
        for g in level.values():
            present = set(g.edges)
            for pair in itertools.combinations(range(n), 2):
                if pair in present:
                    continue
                h = Graph.from_pairs(n, sorted(g.edges + (pair,)))
                code, order = canonical_labeling(h)
                if code not in nxt:
                    nxt[code] = _canonical_copy(h, order)
        level = nxt
    return [level[c] for c in sorted(level)]


def _canonical_copy(g: Graph, order: list[int]) -> Graph:
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    return Graph.from_pairs(g.n, sorted(tuple(sorted((perm[u], perm[v]))) for u, v in g.edges))


def complement(g: Graph) -> Graph:
    present = set(g.edges)
    return Graph(g.n, tuple(p for p in itertools.combinations(range(g.n), 2) if p not in present))


def enumerate_decomposable(n: int, q: int) -> list[Instance]:
    """Every n-vertex union of q+1 edge-disjoint spanning trees, once per isomorphism class."""
    if n < 1 or q < 0:
        raise RangeError(f"need n >= 1 and q >= 0, got n={n}, q={q}")
    if n > MAX_N:
        raise RangeError(f"enumeration is capped at n <= {MAX_N}, got n={n}")
    total = n * (n - 1) // 2
    need = (q + 1) * (n - 1)
    if need > total:
        raise RangeError(f"(q+1)(n-1) = {need} exceeds n(n-1)/2 = {total}: no such board on {n} vertices")
    out = []
    for comp in complement_classes(n, total - need):
        g = complement(comp)
        packing = tree_packing(g, q + 1)
        if isinstance(packing, Decomposition):
            code = canonical_labeling(g)[0].hex()
            out.append(Instance(g, packing, q, None, label=f"n{n}q{q}-{code}"))
    return out


@dataclass
class InstanceVerdict:
    canonical_code: str
    winner: Optional[Side]
    nodes: int
    elapsed_ms: float
    certificate: Optional[StrategyCertificate] = field(default=None, repr=False)

    def to_dict(self, timings: bool = True) -> dict:
        d = {"canonical_code": self.canonical_code,
             "winner": self.winner.value if self.winner else "unknown",
             "nodes": self.nodes}
        if timings:
            d["elapsed_ms"] = self.elapsed_ms
        return d


@dataclass
class RemarkReport:
    n: int
    q: int
    instances: list[InstanceVerdict]

    @property
    def unknown(self) -> int:
        return sum(1 for v in self.instances if v.winner is None)

    @property
    def conclusion(self) -> str:
        total = len(self.instances)
        waiter = sum(1 for v in self.instances if v.winner is Side.WAITER)
        client = sum(1 for v in self.instances if v.winner is Side.CLIENT)
        if client:
            return f"refuted: Client wins on {client} of {total} instances"
        if self.unknown:
            return f"partial: Waiter wins on {waiter} of {total} instances, {self.unknown} unknown"
        return f"verified: Waiter wins on all {total} instances"

    @property
    def verified(self) -> bool:
        return self.conclusion.startswith("verified")

    @property
    def refuted(self) -> bool:
        return self.conclusion.startswith("refuted")

    def to_dict(self, timings: bool = True) -> dict:
        return {"n": self.n, "q": self.q,
                "instances": [v.to_dict(timings) for v in self.instances],
                "conclusion": self.conclusion}

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True) + "\n"


def _solve_one(inst: Instance, cfg: SolveConfig) -> InstanceVerdict:
    res = Solver(inst, cfg).solve(new_game(inst))
    code = inst.label.rsplit("-", 1)[-1]
    return InstanceVerdict(code, res.winner, res.nodes, round(res.elapsed * 1000, 1), res.certificate)


def verify_remark(n: int, cfg: SolveConfig = SolveConfig(), q: Optional[int] = None) -> RemarkReport:
    """Solve every decomposable board at the boundary q and collect Waiter certificates.

    ``cfg.workers`` spreads instances over processes; each instance is solved
    single-threaded with ``cfg.budget`` seconds.
    """
    q = boundary_q(n) if q is None else q
    instances = enumerate_decomposable(n, q)
    sub = dataclasses.replace(cfg, workers=1, retain_certificate=True)
    if cfg.workers > 1 and len(instances) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            verdicts = list(pool.map(_solve_one, instances, itertools.repeat(sub)))
    else:
        verdicts = [_solve_one(inst, sub) for inst in instances]
    return RemarkReport(n, q, verdicts)
