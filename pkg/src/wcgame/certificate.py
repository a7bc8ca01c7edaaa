"""Strategy certificates and their independent replay.

A certificate maps positions ``(free, lab)`` to the certified side's move:
an offer for Waiter, or a table ``offer -> chosen edge`` for Client. The
replayer below shares no code with the search; it re-derives positions from
the raw edge list and checks the claim against every opposing move.

Client certificates leave two kinds of positions implicit, and the replayer
accepts them as already won by Client:

* a free edge inside a Client component (it is offered eventually and Client
  takes it, so Client's n-1 edges contain a cycle), or more components left
  than rounds remain to merge them;
* a component with at most q outgoing free edges (every offer touching it has
  another edge for Client to take, so it stays cut off).

Offers missing from a Client table are answered by a fixed rule: take an
offered edge that is inside a component or that leaves a parallel free edge
behind. Both create the first condition above.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

from .graph import Instance

FORMAT = "wcgame-certificate"


class CertificateError(ValueError):
    pass


@dataclass
class StrategyCertificate:
    side: Any  # game.Side; kept loose so this module does not import the engine
    instance: str
    n: int
    q: int
    root: tuple[int, tuple[int, ...]]
    moves: dict

    def __len__(self) -> int:
        return len(self.moves)

    def to_lines(self) -> list[str]:
        side = getattr(self.side, "value", self.side)
        head = {"format": FORMAT, "version": 1, "side": side, "instance": self.instance,
                "n": self.n, "q": self.q, "root": {"free": hex(self.root[0]), "lab": list(self.root[1])}}
        lines = [json.dumps(head, sort_keys=True)]
        for (free, lab) in sorted(self.moves, key=lambda k: (-k[0].bit_count(), k[0], k[1])):
            move = self.moves[(free, lab)]
            rec: dict[str, Any] = {"free": hex(free), "lab": list(lab)}
            if side == "Waiter":
                rec["offer"] = list(move)
            else:
                rec["answers"] = [list(o) + [c] for o, c in sorted(move.items())]
            lines.append(json.dumps(rec, sort_keys=True))
        return lines

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text("\n".join(self.to_lines()) + "\n")

    @classmethod
    def from_lines(cls, lines: list[str]) -> "StrategyCertificate":
        lines = [ln for ln in lines if ln.strip()]
        if not lines:
            raise CertificateError("empty certificate")
        try:
            head = json.loads(lines[0])
            if head.get("format") != FORMAT:
                raise CertificateError("not a certificate file")
            side = head["side"]
            root = (int(head["root"]["free"], 16), tuple(head["root"]["lab"]))
            moves: dict = {}
            for ln in lines[1:]:
                rec = json.loads(ln)
                key = (int(rec["free"], 16), tuple(rec["lab"]))
                if side == "Waiter":
                    moves[key] = tuple(rec["offer"])
                else:
                    moves[key] = {tuple(a[:-1]): a[-1] for a in rec["answers"]}
        except (KeyError, ValueError, TypeError) as exc:
            raise CertificateError(f"malformed certificate: {exc!r}") from None
        from .game import Side
        return cls(Side(side), head["instance"], head["n"], head["q"], root, moves)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "StrategyCertificate":
        return cls.from_lines(Path(path).read_text().splitlines())


# -- independent replay -------------------------------------------------------

def _relabel(lab: list[int]) -> tuple[int, ...]:
    first: dict[int, int] = {}
    out = []
    for c in lab:
        if c not in first:
            first[c] = len(first)
        out.append(first[c])
    return tuple(out)


class _Replayer:
    def __init__(self, inst: Instance, cert: StrategyCertificate):
        self.edges = inst.graph.edges
        self.k = inst.q + 1
        self.q = inst.q
        self.cert = cert
        self.done: set = set()
        self.positions = 0

    def take(self, lab: tuple[int, ...], e: int) -> tuple[int, ...]:
        u, v = self.edges[e]
        cu, cv = lab[u], lab[v]
        if cu == cv:
            return lab
        return _relabel([cu if c == cv else c for c in lab])

    def free_list(self, free: int) -> list[int]:
        return [i for i in range(len(self.edges)) if free >> i & 1]

    def client_already_won(self, free: int, lab: tuple[int, ...]) -> bool:
        fl = self.free_list(free)
        classes = len(set(lab))
        if classes - 1 > len(fl) // self.k:
            return True
        if classes == 1:
            return False
        out = {c: 0 for c in set(lab)}
        for e in fl:
            u, v = self.edges[e]
            if lab[u] == lab[v]:
                return True
            out[lab[u]] += 1
            out[lab[v]] += 1
        return min(out.values()) <= self.q

    def default_answer(self, free: int, lab: tuple[int, ...], offer: tuple[int, ...]) -> Optional[int]:
        rest = [e for e in self.free_list(free) if e not in offer]
        for e in offer:
            u, v = self.edges[e]
            if lab[u] == lab[v]:
                return e
            pair = {lab[u], lab[v]}
            for f in rest:
                x, y = self.edges[f]
                if {lab[x], lab[y]} == pair:
                    return e
        return None

    def waiter(self, free: int, lab: tuple[int, ...], path: list) -> None:
        self.positions += 1
        if not free:
            if len(set(lab)) != 1:
                raise CertificateError(f"Client stays disconnected after {path}")
            return
        key = (free, lab)
        if key in self.done:
            return
        offer = self.cert.moves.get(key)
        if offer is None:
            raise CertificateError(f"missing key: no Waiter move for position after {path}")
        if len(set(offer)) != self.k or any(not (free >> e & 1) for e in offer):
            raise CertificateError(f"illegal offer {offer} after {path}")
        rest = free & ~sum(1 << e for e in offer)
        for e in offer:
            self.waiter(rest, self.take(lab, e), path + [(tuple(offer), e)])
        self.done.add(key)

    def client(self, free: int, lab: tuple[int, ...], path: list) -> None:
        self.positions += 1
        if not free:
            if len(set(lab)) == 1:
                raise CertificateError(f"Client's graph is connected after {path}")
            return
        key = (free, lab)
        if key in self.done:
            return
        if self.client_already_won(free, lab):
            self.done.add(key)
            return
        table = self.cert.moves.get(key, {})
        for offer in itertools.combinations(self.free_list(free), self.k):
            e = table.get(offer)
            if e is None:
                e = self.default_answer(free, lab, offer)
            if e is None:
                raise CertificateError(f"missing key: no Client answer to {offer} after {path}")
            if e not in offer:
                raise CertificateError(f"answer {e} not in offer {offer} after {path}")
            rest = free & ~sum(1 << x for x in offer)
            self.client(rest, self.take(lab, e), path + [(offer, e)])
        self.done.add(key)


def replay_certificate(inst: Instance, cert: StrategyCertificate, expected_hash: Optional[str] = None) -> int:
    """Check ``cert`` against all opposing play; returns positions visited.

    Raises :class:`CertificateError` on the first failure.
    """
    if expected_hash is not None and cert.instance != expected_hash:
        raise CertificateError(f"certificate is bound to instance {cert.instance}, not {expected_hash}")
    if cert.n != inst.n or cert.q != inst.q:
        raise CertificateError("certificate parameters do not match the instance")
    r = _Replayer(inst, cert)
    free, lab = cert.root
    side = getattr(cert.side, "value", cert.side)
    if side == "Waiter":
        r.waiter(free, tuple(lab), [])
    elif side == "Client":
        r.client(free, tuple(lab), [])
    else:
        raise CertificateError(f"unknown side {side!r}")
    return r.positions
