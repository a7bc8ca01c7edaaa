"""Concrete players: the anchored-triangle Client strategy, certificate-backed
optimal play, and a greedy Waiter for interactive games.

All responders are pure functions of ``(state, offer)``. The Client strategy
reads its lock off the position rather than carrying it between calls, and
declares a reduction (:class:`AnchorReduction`) so the verifier can search a
much smaller game.
"""
from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Optional

from .certificate import CertificateError, StrategyCertificate
from .formats import instance_hash
from .game import (Board, ClientWinCertificate, GameError, GameState, Side, bits, cut_certificate,
                   merge, normalize)
from .graph import Instance

log = logging.getLogger(__name__)


def _child_lab(board: Board, lab: tuple[int, ...], e: int) -> tuple[int, ...]:
    a, b = lab[board.eu[e]], lab[board.ev[e]]
    return lab if a == b else merge(lab, a, b)


def _crosses(board: Board, lab: tuple[int, ...], e: int, comp: frozenset[int]) -> bool:
    return (board.eu[e] in comp) != (board.ev[e] in comp)


def follow_certificate(board: Board, s: GameState, offer: tuple[int, ...],
                       cert: ClientWinCertificate) -> int:
    """Client's answer that keeps a live win certificate alive."""
    lab = s.lab
    dead = [e for e in offer if lab[board.eu[e]] == lab[board.ev[e]]]
    if dead:
        return dead[0]
    if cert.kind in ("deficit", "dead-edge"):
        return offer[0]
    if cert.kind == "small-cut":
        away = [e for e in offer if not _crosses(board, lab, e, cert.component)]
        return away[0] if away else offer[0]
    if cert.kind == "overfull":
        inner = [e for e in offer if board.eu[e] in cert.component and board.ev[e] in cert.component]
        return inner[0] if inner else offer[0]
    u, v = cert.pair
    uv = board.inst.graph.edge_index(u, v)
    at_u = [e for e in offer if u in (board.eu[e], board.ev[e])]
    at_v = [e for e in offer if v in (board.eu[e], board.ev[e])]
    elsewhere = [e for e in offer if e not in at_u and e not in at_v]
    if uv in offer and not elsewhere:
        return uv
    if elsewhere:
        return elsewhere[0]
    if at_u:
        # the offer is all at u and v without uv: take a v edge, u keeps at most q
        only_v = [e for e in at_v if e not in at_u]
        if only_v:
            return only_v[0]
    return offer[0]


class AnchorReduction:
    """Client's view of an anchored board, where only edges at the anchors matter.

    Client aims to finish with some set of anchors that no chosen edge
    leaves. That goal implies Client's graph is disconnected, and it depends
    only on the key: the free edges at the anchors, how Client's graph ties
    the anchors to each other and to the other vertices, and the number of
    other free edges. Offers are interchangeable when they agree on their
    anchor edges and on how many other edges they hold.
    """

    def __init__(self, inst: Instance):
        if inst.anchors is None:
            raise GameError("the anchor reduction needs an anchored instance")
        self.board = Board(inst)
        self.anchors = tuple(inst.anchors)
        self.others = tuple(v for v in range(inst.n) if v not in self.anchors)
        self.near = 0
        for x in self.anchors:
            self.near |= inst.graph.incidence[x]

    def ties(self, lab: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[bool, ...]]:
        """Anchor classes (relabelled) and, per anchor, whether its class reaches a non-anchor."""
        reached = {lab[v] for v in self.others}
        return normalize([lab[x] for x in self.anchors]), tuple(lab[x] in reached for x in self.anchors)

    def key(self, free: int, lab: tuple[int, ...]) -> tuple:
        return free & self.near, self.ties(lab), (free & ~self.near).bit_count()

    def goal(self, lab: tuple[int, ...]) -> bool:
        return not all(self.ties(lab)[1])

    def offers(self, free: int, k: int) -> Iterator[tuple[int, ...]]:
        near = list(bits(free & self.near))
        rest = list(bits(free & ~self.near))
        for size in range(max(0, k - len(rest)), min(k, len(near)) + 1):
            fill = tuple(rest[: k - size])
            for part in itertools.combinations(near, size):
                yield tuple(sorted(part + fill))

    def free_sets(self, lab: tuple[int, ...]) -> list[frozenset[int]]:
        """Unions of anchor classes not yet tied to a non-anchor vertex."""
        groups, attached = self.ties(lab)
        loose: dict[int, list[int]] = {}
        for x, g, a in zip(self.anchors, groups, attached):
            if not a:
                loose.setdefault(g, []).append(x)
        parts = list(loose.values())
        out = []
        for r in range(1, len(parts) + 1):
            for combo in itertools.combinations(parts, r):
                out.append(frozenset(v for p in combo for v in p))
        return out

    def crossing(self, free: int, comp: frozenset[int]) -> list[int]:
        eu, ev = self.board.eu, self.board.ev
        return [e for e in bits(free & self.near) if (eu[e] in comp) != (ev[e] in comp)]


@dataclass(frozen=True)
class Lock:
    """A won configuration and the discipline that keeps it won.

    ``isolate``: the anchor set ``comp`` has at most q free crossing edges;
    refuse them. ``pair``: anchors u and v are untouched, adjacent by a free
    edge and each has at most q+1 free edges.
    """
    kind: str
    comp: frozenset[int]
    pair: tuple[int, int] = ()


class Lemma2Strategy:
    """Client isolates a piece of the anchor triangle (u0, v0, w0).

    * An offered edge away from the anchors: take the lowest one.
    * A lock holds: keep its discipline (see :class:`Lock`).
    * Some offered edge yields a lock: take the first such edge.
    * One untouched anchor x with every offered edge at x, one of them a
      triangle edge: take the triangle edge.
    * Otherwise take the edge that leaves the loose anchor sets with the
      fewest free crossing edges, touching as few anchors as possible.

    Choices depend only on ``reduction.key`` and the offer's anchor edges,
    so the verifier can search the reduced game instead of the full one.
    """

    def __init__(self, inst: Instance):
        if inst.anchors is None:
            raise GameError("the triangle strategy needs an anchored instance")
        self.inst = inst
        self.reduction = AnchorReduction(inst)
        self.board = self.reduction.board
        self.q = inst.q
        g = inst.graph
        a, b, c = inst.anchors
        self.triangle = frozenset(g.edge_index(x, y) for x, y in ((a, b), (b, c), (a, c)))
        self.lock = functools.lru_cache(maxsize=1 << 16)(self._lock)

    def _lock(self, free: int, lab: tuple[int, ...]) -> Optional[Lock]:
        red, q = self.reduction, self.q
        best = None
        for comp in red.free_sets(lab):
            if len(red.crossing(free, comp)) <= q and (best is None or len(comp) < len(best)):
                best = comp
        if best is not None:
            return Lock("isolate", best)
        g = self.inst.graph
        single = [x for x in red.anchors if frozenset({x}) in red.free_sets(lab)]
        for u, v in itertools.combinations(single, 2):
            uv = g.edge_index(u, v) if v in g.adjacency[u] else None
            if uv is None or not (free >> uv) & 1:
                continue
            if all((free & g.incidence[x]).bit_count() <= q + 1 for x in (u, v)):
                return Lock("pair", frozenset({u, v}), (u, v))
        return None

    def _keep(self, lock: Lock, s: GameState, offer: tuple[int, ...]) -> int:
        eu, ev = self.board.eu, self.board.ev
        if lock.kind == "isolate":
            away = [e for e in offer if (eu[e] in lock.comp) == (ev[e] in lock.comp)]
            return away[0]
        u, v = lock.pair
        uv = self.inst.graph.edge_index(u, v)
        at_u = [e for e in offer if u in (eu[e], ev[e])]
        at_v = [e for e in offer if v in (eu[e], ev[e])]
        elsewhere = [e for e in offer if e not in at_u and e not in at_v]
        if elsewhere:
            return elsewhere[0]
        if uv in offer:
            return uv
        # all at u and v without uv: tie v off, u keeps at most q edges
        return at_v[0] if len(at_v) <= len(at_u) else at_u[0]

    def _child(self, s: GameState, offer: tuple[int, ...], e: int) -> tuple[int, tuple[int, ...]]:
        return s.free & ~sum(1 << f for f in offer), _child_lab(self.board, s.lab, e)

    def _pressure(self, free: int, lab: tuple[int, ...]) -> int:
        red = self.reduction
        sets = red.free_sets(lab)
        return min((len(red.crossing(free, c)) for c in sets), default=1 << 30)

    def choose(self, s: GameState, offer: tuple[int, ...]) -> int:
        board, red = self.board, self.reduction
        offer = tuple(sorted(offer))
        outside = [e for e in offer if not (red.near >> e) & 1]
        if outside:
            return outside[0]
        lock = self.lock(s.free, s.lab)
        if lock is not None:
            return self._keep(lock, s, offer)
        for e in offer:
            if self.lock(*self._child(s, offer, e)) is not None:
                return e
        tri = [e for e in offer if e in self.triangle]
        if len(tri) == 1:
            for x in red.anchors:
                alone = frozenset({x}) in red.free_sets(s.lab)
                if alone and all(x in (board.eu[e], board.ev[e]) for e in offer):
                    return tri[0]

        def score(e: int) -> tuple:
            free, lab = self._child(s, offer, e)
            touch = (board.eu[e] in red.anchors) + (board.ev[e] in red.anchors)
            return self._pressure(free, lab), touch, e

        return min(offer, key=score)

    def mode(self, s: GameState) -> str:
        lock = self.lock(s.free, s.lab)
        return f"{lock.kind}({sorted(lock.comp)})" if lock else "open"

    def __call__(self, s: GameState, offer: tuple[int, ...]) -> int:
        choice = self.choose(s, offer)
        if log.isEnabledFor(logging.DEBUG):
            log.debug("round=%d offer=%s chosen=%d mode=%s", s.round, ",".join(map(str, offer)),
                      choice, self.mode(s))
        return choice


def lemma2_strategy(inst: Instance) -> Lemma2Strategy:
    return Lemma2Strategy(inst)


def lowest_edge_strategy(s: GameState, offer: tuple[int, ...]) -> int:
    return min(offer)


class CertifiedWaiter:
    def __init__(self, inst: Instance, cert: StrategyCertificate):
        self.cert = cert

    def __call__(self, s: GameState) -> tuple[int, ...]:
        try:
            return tuple(self.cert.moves[s.key])
        except KeyError:
            raise CertificateError(f"missing key: position at round {s.round} is not in the certificate") from None


class CertifiedClient:
    def __init__(self, inst: Instance, cert: StrategyCertificate):
        self.cert = cert
        self.board = Board(inst)

    def __call__(self, s: GameState, offer: tuple[int, ...]) -> int:
        offer = tuple(sorted(offer))
        table = self.cert.moves.get(s.key)
        if table is not None and offer in table:
            return table[offer]
        lab = s.lab
        rest = s.free & ~sum(1 << e for e in offer)
        for e in offer:
            x, y = lab[self.board.eu[e]], lab[self.board.ev[e]]
            if x == y:
                return e
            for f in bits(rest):
                a, b = lab[self.board.eu[f]], lab[self.board.ev[f]]
                if {a, b} == {x, y}:
                    return e
        cert = cut_certificate(self.board, s.free, s.lab, kinds="xds")
        if cert is not None:
            return follow_certificate(self.board, s, offer, cert)
        raise CertificateError(f"missing key: no answer to offer {offer} at round {s.round}")


def optimal_strategy(cert: StrategyCertificate, side: Side | str, inst: Instance):
    side = Side(side)
    if cert.instance != instance_hash(inst):
        raise CertificateError("certificate does not belong to this instance")
    if Side(cert.side) is not side:
        raise CertificateError(f"certificate is for {Side(cert.side).value}, not {side.value}")
    return CertifiedWaiter(inst, cert) if side is Side.WAITER else CertifiedClient(inst, cert)


def heuristic_waiter(s: GameState) -> tuple[int, ...]:
    """Greedy: as many component-merging edges as possible, lowest indices first."""
    k = s.q + 1
    free = s.free_edges
    if len(free) < k:
        raise GameError("no legal offer: fewer than q+1 free edges")
    live = [e for e in free if not s.is_dead(e)]
    dead = [e for e in free if s.is_dead(e)]
    return tuple(sorted((live + dead)[:k] if len(live) < k else live[:k]))
