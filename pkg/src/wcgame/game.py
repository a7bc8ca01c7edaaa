"""Waiter-Client connectivity game on a union of q+1 spanning trees.

State is quotiented: only the free edges and the partition of the vertices
into Client's components are kept. Client's actual edges never matter beyond
that partition, and discarded edges are whatever is neither free nor chosen.

Internally a partition is a *label tuple*: ``lab[v]`` is the number of v's
class, classes numbered in order of their smallest vertex. Two states are the
same position iff ``(free, lab)`` agree.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .graph import Instance, verify_instance


class GameError(ValueError):
    pass


class Side(str, enum.Enum):
    WAITER = "Waiter"
    CLIENT = "Client"


class Pruning(str, enum.Enum):
    NONE = "none"
    DEAD_COLLAPSE = "dead-collapse"
    BUNDLE = "bundle"
    OBS1 = "obs1"


PRUNING_ORDER = [Pruning.NONE, Pruning.DEAD_COLLAPSE, Pruning.BUNDLE, Pruning.OBS1]


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def normalize(lab: Sequence[int]) -> tuple[int, ...]:
    """Relabel classes in order of first appearance."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(c, len(seen)) for c in lab)


def merge(lab: tuple[int, ...], a: int, b: int) -> tuple[int, ...]:
    """Label tuple after joining classes ``a`` and ``b`` (a != b)."""
    if a > b:
        a, b = b, a
    # b's members take label a; labels above b shift down by one
    return tuple(a if c == b else (c - 1 if c > b else c) for c in lab)


class Board:
    """Per-instance tables shared by the rules engine and the searches."""

    def __init__(self, inst: Instance):
        g = inst.graph
        self.inst = inst
        self.n = g.n
        self.m = g.m
        self.q = inst.q
        self.k = inst.q + 1
        self.eu = [u for u, _ in g.edges]
        self.ev = [v for _, v in g.edges]
        self.inc = list(g.incidence)
        self.full = (1 << g.m) - 1
        self.start_lab = tuple(range(g.n))

    def rounds_left(self, free: int) -> int:
        return popcount(free) // self.k

    def analyse(self, free: int, lab: tuple[int, ...]):
        """Bundles, dead edges and class degrees of a position.

        Returns ``(bundles, dead, deg, ncls)`` where ``bundles`` maps a class
        pair ``(a, b)`` with ``a < b`` to the mask of free edges joining them.
        """
        ncls = max(lab) + 1 if lab else 0
        deg = [0] * ncls
        bundles: dict[tuple[int, int], int] = {}
        dead = 0
        eu, ev = self.eu, self.ev
        x = free
        while x:
            low = x & -x
            e = low.bit_length() - 1
            x ^= low
            a, b = lab[eu[e]], lab[ev[e]]
            if a == b:
                dead |= low
                continue
            if a > b:
                a, b = b, a
            key = (a, b)
            bundles[key] = bundles.get(key, 0) | low
            deg[a] += 1
            deg[b] += 1
        return bundles, dead, deg, ncls


@dataclass(frozen=True)
class GameState:
    instance: Instance = field(repr=False, compare=False)
    free: int
    lab: tuple[int, ...]
    chosen_count: int

    @property
    def n(self) -> int:
        return len(self.lab)

    @property
    def q(self) -> int:
        return self.instance.q

    @property
    def parts(self) -> tuple[frozenset[int], ...]:
        groups: dict[int, set[int]] = {}
        for v, c in enumerate(self.lab):
            groups.setdefault(c, set()).add(v)
        return tuple(frozenset(groups[c]) for c in sorted(groups))

    @property
    def free_edges(self) -> list[int]:
        return list(bits(self.free))

    @property
    def round(self) -> int:
        return (self.instance.graph.m - popcount(self.free)) // (self.q + 1)

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.free, self.lab)

    def class_of(self, v: int) -> frozenset[int]:
        c = self.lab[v]
        return frozenset(u for u, d in enumerate(self.lab) if d == c)

    def free_degree(self, v: int) -> int:
        return popcount(self.instance.graph.incidence[v] & self.free)

    def outgoing(self, part: Iterable[int]) -> list[int]:
        """Free edges with exactly one endpoint in ``part``."""
        part = set(part)
        g = self.instance.graph
        return [e for e in bits(self.free) if (g.edges[e][0] in part) != (g.edges[e][1] in part)]

    def is_dead(self, e: int) -> bool:
        u, v = self.instance.graph.edges[e]
        return self.lab[u] == self.lab[v]


@dataclass(frozen=True)
class ClientWinCertificate:
    """A condition under which Client wins from the certified position.

    ``small-cut``: a class (``component``) with at most q outgoing free edges
    (``edges``). ``adjacent-pair``: two untouched vertices of free degree q+1
    joined by a free edge (``pair``). ``dead-edge``: a free edge inside a
    class; it must be offered some day and Client then takes it. ``deficit``:
    more classes remain than rounds can merge. ``overfull``: a union of
    classes (``component``) spanning more than (q+1)(|classes in it| - 1)
    free edges, so the free edges between classes hold no q+1 disjoint
    spanning trees; Client takes edges inside it whenever offered.
    """

    kind: str
    component: frozenset[int] = frozenset()
    edges: tuple[int, ...] = ()
    pair: Optional[tuple[int, int]] = None


def new_game(inst: Instance) -> GameState:
    problems = verify_instance(inst)
    if problems:
        raise GameError("invalid instance: " + "; ".join(problems))
    return GameState(inst, (1 << inst.graph.m) - 1, tuple(range(inst.n)), 0)


def check_offer(s: GameState, offer: Iterable[int]) -> tuple[int, ...]:
    offer = tuple(sorted(offer))
    k = s.q + 1
    if len(offer) != k or len(set(offer)) != k:
        raise GameError(f"offer must hold {k} distinct edges, got {list(offer)}")
    for e in offer:
        if not (0 <= e < s.instance.graph.m):
            raise GameError(f"edge index {e} out of range")
        if not (s.free >> e) & 1:
            raise GameError(f"edge {e} is not free (already offered)")
    return offer


def apply_round(s: GameState, offer: Iterable[int], choice: int) -> GameState:
    offer = check_offer(s, offer)
    if choice not in offer:
        raise GameError(f"chosen edge {choice} is not in the offer {list(offer)}")
    mask = sum(1 << e for e in offer)
    u, v = s.instance.graph.edges[choice]
    a, b = s.lab[u], s.lab[v]
    lab = s.lab if a == b else merge(s.lab, a, b)
    return GameState(s.instance, s.free & ~mask, lab, s.chosen_count + 1)


def terminal_winner(s: GameState) -> Optional[Side]:
    if s.free:
        return None
    return Side.WAITER if max(s.lab, default=0) == 0 else Side.CLIENT


_SUBSETS: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _subset_tables(c: int) -> tuple[np.ndarray, np.ndarray]:
    if c not in _SUBSETS:
        idx = np.arange(1 << c)
        member = ((idx[:, None] >> np.arange(c)[None, :]) & 1).astype(np.int64)
        _SUBSETS[c] = (member, member.sum(axis=1))
    return _SUBSETS[c]


def overfull_classes(bundles: dict, ncls: int, k: int) -> int:
    """Mask of a class set S spanning more than k(|S|-1) free edges, or 0.

    With exactly k(ncls-1) free edges this is the Nash-Williams test for k
    edge-disjoint spanning trees of the quotient multigraph.
    """
    if ncls < 3:
        return 0
    member, size = _subset_tables(ncls)
    w = np.zeros((ncls, ncls), dtype=np.int64)
    for (a, b), mask in bundles.items():
        w[a, b] = mask.bit_count()
    inside = ((member @ w) * member).sum(axis=1)
    bad = np.flatnonzero(inside > k * (size - 1))
    return int(bad[0]) if bad.size else 0


def quotient_code(analysis, iso: bool = True, perm_cap: int = 5040) -> tuple:
    """Transposition key for a position: its class multigraph plus dead-edge count.

    The game from a position only depends on how many free edges join each
    pair of classes and how many free edges are dead, so positions with equal
    codes have equal values. With ``iso`` the classes are relabelled to the
    lexicographically least weight matrix (brute force within refinement
    cells, skipped when more than ``perm_cap`` orders remain).
    """
    bundles, dead, deg, ncls = analysis
    w = [[0] * ncls for _ in range(ncls)]
    for (a, b), mask in bundles.items():
        w[a][b] = w[b][a] = mask.bit_count()
    ndead = dead.bit_count()
    if iso and ncls > 1:
        colour = [(deg[a], tuple(sorted(w[a]))) for a in range(ncls)]
        colour = [(colour[a], tuple(sorted((w[a][b], colour[b]) for b in range(ncls) if w[a][b])))
                  for a in range(ncls)]
        order = sorted(range(ncls), key=lambda a: colour[a])
        cells = [list(g) for _, g in itertools.groupby(order, key=lambda a: colour[a])]
        count = 1
        for cell in cells:
            for i in range(2, len(cell) + 1):
                count *= i
        if count <= perm_cap:
            best = None
            for parts in itertools.product(*(itertools.permutations(c) for c in cells)):
                perm = [a for p in parts for a in p]
                code = tuple(w[perm[i]][perm[j]] for i in range(ncls) for j in range(i + 1, ncls))
                if best is None or code < best:
                    best = code
            return (True, ndead, ncls, best)
    code = tuple(w[i][j] for i in range(ncls) for j in range(i + 1, ncls))
    return (False, ndead, ncls, code)


def cut_certificate(board: Board, free: int, lab: tuple[int, ...], kinds: str = "xdsap",
                    analysis=None) -> Optional[ClientWinCertificate]:
    """Client-win certificate for a raw position, checking the kinds in ``kinds``.

    x = deficit, d = dead-edge, s = small-cut, a = adjacent-pair, p = overfull.
    """
    bundles, dead, deg, ncls = analysis or board.analyse(free, lab)
    q = board.q
    if "x" in kinds and ncls - 1 > board.rounds_left(free):
        return ClientWinCertificate("deficit")
    if ncls <= 1:
        return None
    if "d" in kinds and dead:
        e = (dead & -dead).bit_length() - 1
        return ClientWinCertificate("dead-edge", frozenset(v for v in range(board.n) if lab[v] == lab[board.eu[e]]), (e,))
    if "s" in kinds:
        for c in range(ncls):
            if deg[c] <= q:
                comp = frozenset(v for v in range(board.n) if lab[v] == c)
                out = tuple(e for (a, b), mask in bundles.items() if c in (a, b) for e in bits(mask))
                return ClientWinCertificate("small-cut", comp, tuple(sorted(out)))
    if "a" in kinds:
        size = [0] * ncls
        for c in lab:
            size[c] += 1
        for (a, b), mask in sorted(bundles.items()):
            if size[a] == 1 and size[b] == 1 and deg[a] == q + 1 and deg[b] == q + 1:
                u, v = lab.index(a), lab.index(b)
                return ClientWinCertificate("adjacent-pair", frozenset((u, v)), tuple(bits(mask)), (u, v))
    if "p" in kinds:
        sub = overfull_classes(bundles, ncls, board.k)
        if sub:
            comp = frozenset(v for v in range(board.n) if (sub >> lab[v]) & 1)
            return ClientWinCertificate("overfull", comp)
    return None


def client_cut(s: GameState) -> Optional[ClientWinCertificate]:
    return cut_certificate(Board(s.instance), s.free, s.lab)


def _losing_offer(board: Board, free: int, bundles, dead: int) -> Optional[tuple[int, ...]]:
    """First offer, lexicographically, that holds a dead edge or splits a bundle."""
    k = board.k
    free_list = list(bits(free))
    for offer in itertools.combinations(free_list, k):
        mask = sum(1 << e for e in offer)
        if mask & dead:
            return offer
        for bm in bundles.values():
            if (bm & mask) and (bm & ~mask):
                return offer
    return None


def bundle_offers(board: Board, free: int, lab: tuple[int, ...], obs1: bool = False,
                  analysis=None) -> list[tuple[int, list[int]]]:
    """Offers made of whole bundles, as ``(offer mask, [one edge per bundle])``.

    Any offer that splits a bundle or contains a dead edge loses at once for
    Waiter, so these are the only offers worth searching. With ``obs1``,
    offers that give a class with at most q+2 outgoing free edges between 2
    and q of them are dropped as well.
    """
    bundles, dead, deg, ncls = analysis or board.analyse(free, lab)
    k, q = board.k, board.q
    items = sorted(bundles.items(), key=lambda kv: kv[1] & -kv[1])
    sizes = [popcount(mask) for _, mask in items]
    out: list[tuple[int, list[int]]] = []
    chosen: list[int] = []

    def rec(i: int, total: int) -> None:
        if total == k:
            mask = 0
            reps = []
            for j in chosen:
                mask |= items[j][1]
                reps.append((items[j][1] & -items[j][1]).bit_length() - 1)
            if obs1 and ncls > 1:
                touch = [0] * ncls
                for j in chosen:
                    (a, b), bm = items[j]
                    touch[a] += sizes[j]
                    touch[b] += sizes[j]
                for c in range(ncls):
                    if deg[c] <= q + 2 and 2 <= touch[c] <= q:
                        return
            out.append((mask, reps))
            return
        for j in range(i, len(items)):
            if total + sizes[j] <= k:
                chosen.append(j)
                rec(j + 1, total + sizes[j])
                chosen.pop()

    rec(0, 0)
    out.sort(key=lambda t: sorted(bits(t[0])))
    return out


def offer_classes(s: GameState, pruning: str | Pruning = Pruning.NONE) -> list[tuple[int, ...]]:
    """Representative Waiter offers in lexicographic edge-index order."""
    pruning = Pruning(pruning)
    k = s.q + 1
    free_list = s.free_edges
    if len(free_list) < k:
        raise GameError(f"only {len(free_list)} free edges, an offer needs {k}")
    if pruning is Pruning.NONE:
        return list(itertools.combinations(free_list, k))
    board = Board(s.instance)
    analysis = board.analyse(s.free, s.lab)
    bundles, dead, deg, ncls = analysis
    if pruning is Pruning.DEAD_COLLAPSE:
        dead_list = list(bits(dead))
        live = [e for e in free_list if not (dead >> e) & 1]
        out = []
        for j in range(0, min(k, len(dead_list)) + 1):
            for part in itertools.combinations(live, k - j):
                out.append(tuple(sorted(part + tuple(dead_list[:j]))))
        return sorted(out)
    offers = [tuple(bits(mask)) for mask, _ in
              bundle_offers(board, s.free, s.lab, obs1=pruning is Pruning.OBS1, analysis=analysis)]
    if not offers:
        # every remaining offer loses for Waiter; keep one so the position has a move
        spoiler = _losing_offer(board, s.free, bundles, dead)
        offers.append(spoiler if spoiler is not None else tuple(free_list[:k]))
    return offers


@dataclass(frozen=True)
class Transcript:
    rounds: tuple[tuple[tuple[int, ...], int], ...]

    def to_text(self) -> str:
        return "".join(f"offer: {','.join(map(str, o))} chose: {c}\n" for o, c in self.rounds)

    @classmethod
    def from_text(cls, text: str) -> "Transcript":
        rounds = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                head, chose = line.split("chose:")
                offer_txt = head.split("offer:")[1]
                offer = tuple(int(t) for t in offer_txt.replace(" ", "").split(",") if t)
                rounds.append((offer, int(chose)))
            except (ValueError, IndexError):
                raise GameError(f"line {lineno}: expected 'offer: i,j,k chose: j', got {line!r}") from None
        return cls(tuple(rounds))


def replay(inst: Instance, transcript: Transcript) -> list[GameState]:
    """All states visited by a transcript, starting with the initial one."""
    states = [new_game(inst)]
    for offer, choice in transcript.rounds:
        states.append(apply_round(states[-1], offer, choice))
    return states
