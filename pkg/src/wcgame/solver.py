"""Exact solving of the connectivity Waiter-Client game.

``Solver.waiter_wins`` is a memoized AND/OR search over quotient positions
``(free, lab)``. Waiter picks an offer (OR), Client answers (AND from
Waiter's view). Client-win certificates from :func:`game.cut_certificate`
close nodes early when ``cuts`` is on.
"""
from __future__ import annotations

import dataclasses
import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .canon import automorphisms, edge_permutation
from .certificate import StrategyCertificate
from .formats import instance_hash
from .game import (Board, GameError, GameState, Pruning, Side, Transcript, bits, bundle_offers,
                   cut_certificate, merge, new_game, quotient_code)
from .graph import Instance

TABLE_KEYS = ("position", "quotient", "iso")
DEFAULT_CAPACITY = int(os.environ.get("WCGAME_TABLE_CAPACITY", "4000000"))


class BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class SolveConfig:
    pruning: Pruning = Pruning.BUNDLE
    capacity: int = DEFAULT_CAPACITY
    budget: float = 0.0
    workers: int = 1
    retain_certificate: bool = False
    cuts: bool = True
    root_symmetry: bool = True
    table_key: str = "iso"  # position | quotient | iso

    def __post_init__(self):
        object.__setattr__(self, "pruning", Pruning(self.pruning))
        if self.table_key not in TABLE_KEYS:
            raise ValueError(f"table_key must be one of {', '.join(TABLE_KEYS)}")
        if self.capacity <= 0:
            raise ValueError("table capacity must be positive")
        if self.budget < 0:
            raise ValueError("budget must be >= 0 (0 means unlimited)")
        if self.workers < 1:
            raise ValueError("need at least one worker")


@dataclass
class SolveResult:
    winner: Optional[Side]
    nodes: int
    table_hits: int
    elapsed: float
    pruning: Pruning
    certificate: Optional[StrategyCertificate] = None

    @property
    def unknown(self) -> bool:
        return self.winner is None

    def report(self) -> dict:
        return {
            "winner": self.winner.value if self.winner else None,
            "nodes": self.nodes,
            "table_hits": self.table_hits,
            "elapsed_ms": round(self.elapsed * 1000, 1),
            "pruning": self.pruning.value,
            "unknown": self.unknown,
        }


@dataclass
class Counterexample:
    transcript: Transcript
    reason: str


class Solver:
    def __init__(self, inst: Instance, cfg: SolveConfig = SolveConfig()):
        self.inst = inst
        self.cfg = cfg
        self.board = Board(inst)
        self.tables: dict[int, dict] = {}
        self.stored = 0
        self.nodes = 0
        self.hits = 0
        self.deadline = 0.0
        self._root_reps: Optional[list[tuple[int, ...]]] = None

    # -- transposition table -------------------------------------------------

    def _lookup(self, depth: int, key):
        table = self.tables.get(depth)
        if table is None:
            return None
        return table.get(key)

    def _store(self, depth: int, key, value: bool) -> None:
        if self.stored >= self.cfg.capacity:
            # shallow entries are cheapest to recompute: drop them first
            for d in sorted(self.tables):
                if self.tables[d] and d != depth:
                    self.stored -= len(self.tables[d])
                    self.tables[d] = {}
                    break
            else:
                self.stored -= len(self.tables.get(depth, ()))
                self.tables[depth] = {}
        self.tables.setdefault(depth, {})[key] = value
        self.stored += 1

    def _key(self, free: int, lab: tuple[int, ...], analysis):
        mode = self.cfg.table_key
        if mode == "position":
            return (free, lab)
        return quotient_code(analysis, iso=mode == "iso")

    # -- move generation -----------------------------------------------------

    def moves(self, free: int, lab: tuple[int, ...], analysis) -> Iterator[tuple[int, list[int]]]:
        """Waiter offers as ``(mask, client choices)`` for the configured pruning level."""
        b = self.board
        k = b.k
        pruning = self.cfg.pruning
        if free == b.full and lab == b.start_lab and self.cfg.root_symmetry:
            reps = self.root_offers()
            if reps is not None:
                for offer in reps:
                    yield sum(1 << e for e in offer), list(offer)
                return
        if pruning is Pruning.NONE:
            for offer in itertools.combinations(bits(free), k):
                yield sum(1 << e for e in offer), list(offer)
            return
        if pruning is Pruning.DEAD_COLLAPSE:
            dead = analysis[1]
            dead_list = list(bits(dead))
            live = [e for e in bits(free) if not (dead >> e) & 1]
            for j in range(0, min(k, len(dead_list)) + 1):
                for part in itertools.combinations(live, k - j):
                    choices = list(part) + dead_list[:1] if j else list(part)
                    yield sum(1 << e for e in part + tuple(dead_list[:j])), choices
            return
        offers = bundle_offers(b, free, lab, obs1=pruning is Pruning.OBS1, analysis=analysis)
        bundles, _, deg, _ = analysis
        eu, ev = b.eu, b.ev

        def waiter_key(item):
            mask, reps = item
            return (min(min(deg[lab[eu[e]]], deg[lab[ev[e]]]) for e in reps), mask & -mask)

        offers.sort(key=waiter_key)
        for mask, reps in offers:
            if len(reps) > 1:
                reps = sorted(reps, key=lambda e: (deg[lab[eu[e]]] + deg[lab[ev[e]]], e))
            yield mask, reps

    def root_offers(self) -> Optional[list[tuple[int, ...]]]:
        """Root offers up to the board's automorphisms, or None if not worth it."""
        if self._root_reps is None:
            g = self.inst.graph
            autos = automorphisms(g, limit=2000) if g.n <= 12 else None
            if not autos or len(autos) <= 1:
                self._root_reps = []
            else:
                perms = [edge_permutation(g, a) for a in autos]
                seen = set()
                reps = []
                for offer in itertools.combinations(range(g.m), self.board.k):
                    canon = min(tuple(sorted(p[e] for e in offer)) for p in perms)
                    if canon not in seen:
                        seen.add(canon)
                        reps.append(offer)
                self._root_reps = reps
        if not self._root_reps:
            return None
        if self.cfg.pruning in (Pruning.NONE, Pruning.DEAD_COLLAPSE):
            return self._root_reps
        # at the root every bundle is a single edge, so bundle offers are all offers
        if self.cfg.pruning is Pruning.OBS1:
            allowed = {tuple(bits(m)) for m, _ in bundle_offers(self.board, self.board.full,
                                                                  self.board.start_lab, obs1=True)}
            return [o for o in self._root_reps if o in allowed]
        return self._root_reps

    # -- search --------------------------------------------------------------

    def waiter_wins(self, free: int, lab: tuple[int, ...]) -> bool:
        self.nodes += 1
        if self.deadline and time.monotonic() > self.deadline:
            raise BudgetExhausted
        if not free:
            return max(lab) == 0
        b = self.board
        depth = free.bit_count() // b.k
        analysis = b.analyse(free, lab)
        key = self._key(free, lab, analysis)
        cached = self._lookup(depth, key)
        if cached is not None:
            self.hits += 1
            return cached
        if self.cfg.cuts and cut_certificate(b, free, lab, analysis=analysis) is not None:
            self._store(depth, key, False)
            return False
        eu, ev = b.eu, b.ev
        result = False
        for mask, choices in self.moves(free, lab, analysis):
            rest = free & ~mask
            for e in choices:
                x, y = lab[eu[e]], lab[ev[e]]
                child = lab if x == y else merge(lab, x, y)
                if not self.waiter_wins(rest, child):
                    break
            else:
                result = True
                break
        self._store(depth, key, result)
        return result

    def client_wins(self, free: int, lab: tuple[int, ...]) -> bool:
        """Client's side of the same game, written out separately as a cross-check."""
        if not free:
            return max(lab) != 0
        b = self.board
        analysis = b.analyse(free, lab)
        if self.cfg.cuts and cut_certificate(b, free, lab, analysis=analysis) is not None:
            return True
        for mask, choices in self.moves(free, lab, analysis):
            rest = free & ~mask
            if not any(self.client_wins(rest, lab if lab[b.eu[e]] == lab[b.ev[e]]
                                        else merge(lab, lab[b.eu[e]], lab[b.ev[e]]))
                       for e in choices):
                return False
        return True

    def _start(self) -> None:
        self.deadline = time.monotonic() + self.cfg.budget if self.cfg.budget else 0.0

    def solve(self, s: GameState) -> SolveResult:
        t0 = time.monotonic()
        self._start()
        try:
            if self.cfg.workers > 1 and s.free:
                wins = self._solve_parallel(s.free, s.lab)
            else:
                wins = self.waiter_wins(s.free, s.lab)
        except BudgetExhausted:
            return SolveResult(None, self.nodes, self.hits, time.monotonic() - t0, self.cfg.pruning)
        winner = Side.WAITER if wins else Side.CLIENT
        cert = None
        if self.cfg.retain_certificate:
            try:
                cert = self.extract(s, winner)
            except BudgetExhausted:
                return SolveResult(None, self.nodes, self.hits, time.monotonic() - t0, self.cfg.pruning)
        return SolveResult(winner, self.nodes, self.hits, time.monotonic() - t0, self.cfg.pruning, cert)

    def _solve_parallel(self, free: int, lab: tuple[int, ...]) -> bool:
        """Split the offers at ``(free, lab)`` round-robin over worker processes."""
        b = self.board
        analysis = b.analyse(free, lab)
        if self.cfg.cuts and cut_certificate(b, free, lab, analysis=analysis) is not None:
            return False
        offers = list(self.moves(free, lab, analysis))
        chunks = [offers[i::self.cfg.workers] for i in range(self.cfg.workers)]
        remaining = max(0.0, self.deadline - time.monotonic()) if self.deadline else 0.0
        sub = dataclasses.replace(self.cfg, budget=remaining, workers=1, retain_certificate=False)
        with ProcessPoolExecutor(max_workers=self.cfg.workers) as pool:
            futures = [pool.submit(_evaluate_offers, self.inst, sub, free, lab, chunk)
                       for chunk in chunks if chunk]
            results = [f.result() for f in futures]
        any_win = False
        exhausted = False
        for wins, nodes, hits, out_of_time in results:
            self.nodes += nodes
            self.hits += hits
            any_win = any_win or wins
            exhausted = exhausted or out_of_time
        if exhausted and not any_win:
            raise BudgetExhausted
        return any_win

    # -- certificates --------------------------------------------------------

    def extract(self, s: GameState, side: Side) -> StrategyCertificate:
        moves: dict = {}
        if side is Side.WAITER:
            if not self.waiter_wins(s.free, s.lab):
                raise GameError("Waiter does not win here; no Waiter certificate exists")
            self._waiter_cert(s.free, s.lab, moves)
        else:
            if self.waiter_wins(s.free, s.lab):
                raise GameError("Client does not win here; no Client certificate exists")
            self._client_cert(s.free, s.lab, moves)
        return StrategyCertificate(side, instance_hash(self.inst), self.inst.n, self.inst.q,
                                   (s.free, s.lab), moves)

    def _waiter_cert(self, free: int, lab: tuple[int, ...], moves: dict) -> None:
        if not free or (free, lab) in moves:
            return
        b = self.board
        analysis = b.analyse(free, lab)
        for mask, choices in self.moves(free, lab, analysis):
            rest = free & ~mask
            if all(self.waiter_wins(rest, _child(b, lab, e)) for e in choices):
                offer = tuple(bits(mask))
                moves[(free, lab)] = offer
                for e in offer:
                    self._waiter_cert(rest, _child(b, lab, e), moves)
                return
        raise AssertionError("lost a winning Waiter line while extracting")

    def _client_cert(self, free: int, lab: tuple[int, ...], moves: dict) -> None:
        if (free, lab) in moves or not free:
            return
        b = self.board
        analysis = b.analyse(free, lab)
        if cut_certificate(b, free, lab, kinds="xds", analysis=analysis) is not None:
            return
        answers = {}
        for mask, reps in bundle_offers(b, free, lab, analysis=analysis):
            rest = free & ~mask
            for e in reps:
                child = _child(b, lab, e)
                if not self.waiter_wins(rest, child):
                    answers[tuple(bits(mask))] = e
                    break
            else:
                raise AssertionError("lost a winning Client line while extracting")
        moves[(free, lab)] = answers
        for offer, e in answers.items():
            self._client_cert(free & ~sum(1 << x for x in offer), _child(b, lab, e), moves)


def _child(b: Board, lab: tuple[int, ...], e: int) -> tuple[int, ...]:
    x, y = lab[b.eu[e]], lab[b.ev[e]]
    return lab if x == y else merge(lab, x, y)


def _evaluate_offers(inst: Instance, cfg: SolveConfig, free: int, lab: tuple[int, ...], offers):
    solver = Solver(inst, cfg)
    solver._start()
    b = solver.board
    try:
        for mask, choices in offers:
            rest = free & ~mask
            if all(solver.waiter_wins(rest, _child(b, lab, e)) for e in choices):
                return True, solver.nodes, solver.hits, False
    except BudgetExhausted:
        return False, solver.nodes, solver.hits, True
    return False, solver.nodes, solver.hits, False


def solve(s: GameState, cfg: SolveConfig = SolveConfig()) -> SolveResult:
    return Solver(s.instance, cfg).solve(s)


def extract_certificate(res: SolveResult, side: Side | str) -> StrategyCertificate:
    side = Side(side)
    if res.winner is None:
        raise GameError("no certificate for an unknown result")
    if res.winner is not side:
        raise GameError(f"{side.value} lost this game; only {res.winner.value} has a certificate")
    if res.certificate is None:
        raise GameError("certificate was not retained (set retain_certificate)")
    return res.certificate


ClientResponder = Callable[[GameState, tuple[int, ...]], int]


def verify_client_strategy(inst: Instance, strat: ClientResponder,
                           cfg: SolveConfig = SolveConfig(pruning=Pruning.NONE),
                           start: Optional[GameState] = None) -> Optional[Counterexample]:
    """Search every Waiter offer sequence against a fixed Client responder.

    Returns None if Client wins every line, else the first losing (or
    contract-breaking) transcript found in offer order. With ``cfg.cuts`` a
    line is closed as soon as a Client-win certificate holds whose kind the
    strategy declares it follows (``strat.follows_cuts``).

    A strategy may declare ``strat.reduction`` with ``key(free, lab)``,
    ``offers(free, k)`` and ``goal(lab)``: its answers depend only on the key
    and the offer's class, and it claims the stronger terminal ``goal``
    (which must imply a disconnected graph). Positions are then merged by
    key and only one offer per class is searched.

    ``start`` searches from a later position; transcripts then begin there.
    """
    root = start if start is not None else new_game(inst)
    board = Board(inst)
    eu, ev, k = board.eu, board.ev, board.k
    safe: set = set()
    deadline = time.monotonic() + cfg.budget if cfg.budget else 0.0
    counter = [0]
    red = getattr(strat, "reduction", None)
    trusted = getattr(strat, "follows_cuts", "") if cfg.cuts and red is None else ""
    certified = getattr(strat, "certificate", None) or (
        lambda free, lab: cut_certificate(board, free, lab, kinds=trusted))
    key = red.key if red is not None else (lambda free, lab: (free, lab))
    offers = red.offers if red is not None else (lambda free, k: itertools.combinations(bits(free), k))

    def rec(free: int, lab: tuple[int, ...], path: list) -> Optional[Counterexample]:
        counter[0] += 1
        if deadline and time.monotonic() > deadline:
            raise BudgetExhausted
        if not free:
            if max(lab) == 0:
                return Counterexample(Transcript(tuple(path)), "Client's graph is connected")
            if red is not None and not red.goal(lab):
                return Counterexample(Transcript(tuple(path)), "Client's claimed goal is not reached")
            return None
        if trusted and certified(free, lab) is not None:
            safe.add(key(free, lab))
            return None
        s = GameState(inst, free, lab, root.chosen_count + len(path))
        for offer in offers(free, k):
            c = strat(s, offer)
            if c not in offer:
                return Counterexample(Transcript(tuple(path + [(offer, c)])),
                                      f"strategy chose {c}, which is not in the offer")
            rest = free & ~sum(1 << e for e in offer)
            x, y = lab[eu[c]], lab[ev[c]]
            child = lab if x == y else merge(lab, x, y)
            if key(rest, child) in safe:
                continue
            found = rec(rest, child, path + [(offer, c)])
            if found is not None:
                return found
        safe.add(key(free, lab))
        return None

    return rec(root.free, root.lab, [])
