"""Command-line interface: ``wcgame <command> ...`` or ``python -m wcgame``.

Exit codes: 0 verified / succeeded, 1 refuted, 2 unknown (budget), 3 usage or input error.
Files written by ``--out`` hold no timings, so identical invocations give
identical bytes; timings go to a ``.log`` sidecar next to the file.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .certificate import FORMAT, CertificateError, StrategyCertificate, replay_certificate
from .construct import build_gnq, build_gq
from .enumeration import boundary_q, enumerate_decomposable, verify_remark
from .formats import instance_hash, instance_to_dot, instance_to_json, load_instance, save_instance
from .game import (PRUNING_ORDER, GameError, GameState, Pruning, Side, Transcript, apply_round,
                   check_offer, new_game, replay, terminal_winner)
from .graph import GraphError, verify_instance
from .solver import TABLE_KEYS, BudgetExhausted, SolveConfig, Solver, verify_client_strategy
from .strategy import heuristic_waiter, lemma2_strategy, lowest_edge_strategy

OK, REFUTED, UNKNOWN, USAGE = 0, 1, 2, 3

log = logging.getLogger("wcgame")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path: Optional[str], text: str, timings: Optional[dict] = None) -> None:
    if path is None:
        return
    Path(path).write_text(text)
    if timings is not None:
        Path(path + ".log").write_text(json.dumps(timings, sort_keys=True) + "\n")


def _config(args) -> SolveConfig:
    return SolveConfig(pruning=args.pruning, budget=args.budget, workers=args.workers,
                       table_key=args.table_key)


def _solver_flags(p: argparse.ArgumentParser, pruning: str = SolveConfig().pruning.value) -> None:
    p.add_argument("--pruning", choices=[x.value for x in PRUNING_ORDER], default=pruning)
    p.add_argument("--budget", type=float, default=0.0, help="seconds; 0 = unlimited")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--table-key", choices=TABLE_KEYS, default="iso")


# -- commands -----------------------------------------------------------------

def cmd_construct(args) -> int:
    if args.family is None:
        args.family = "gnq" if args.n is not None else "gq"
    if args.family == "gq":
        inst = build_gq(args.q)
        if args.n is not None and args.n != inst.n:
            raise UsageError(f"the gq family with q={args.q} has n=3(q+1)={inst.n}, not {args.n}")
    else:
        if args.n is None:
            raise UsageError("--family gnq needs --n")
        inst = build_gnq(args.n, args.q, seed=args.seed)
    if args.out:
        save_instance(inst, args.out)
    else:
        sys.stdout.write(instance_to_json(inst))
    if args.dot:
        Path(args.dot).write_text(instance_to_dot(inst))
    print(f"{inst.label}: n={inst.n} q={inst.q} edges={inst.graph.m} hash={instance_hash(inst)}",
          file=sys.stderr)
    return OK


def cmd_check(args) -> int:
    inst = load_instance(args.instance)
    problems = verify_instance(inst)
    if problems:
        for p in problems:
            print(f"invalid: {p}")
        return REFUTED
    print(f"ok: n={inst.n} q={inst.q} edges={inst.graph.m} trees={inst.decomposition.k}"
          + (f" anchors={list(inst.anchors)}" if inst.anchors else ""))
    return OK


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    cfg = _config(args)
    if args.cert:
        cfg = dataclasses.replace(cfg, retain_certificate=True)
    res = Solver(inst, cfg).solve(new_game(inst))
    report = res.report()
    print(_dump(report), end="")
    stable = {k: v for k, v in report.items() if k != "elapsed_ms"}
    _write(args.out, _dump(stable), {"elapsed_ms": report["elapsed_ms"]})
    if res.unknown:
        return UNKNOWN
    if args.cert and res.certificate is not None:
        res.certificate.save(args.cert)
        print(f"certificate: {len(res.certificate)} positions -> {args.cert}", file=sys.stderr)
    return OK


_STRATEGIES = {"lemma2": lemma2_strategy, "lowest": lambda inst: lowest_edge_strategy}


def cmd_verify_strategy(args) -> int:
    inst = load_instance(args.instance)
    strat = _STRATEGIES[args.strategy](inst)
    cfg = SolveConfig(pruning=Pruning.NONE, budget=args.budget)
    t0 = time.monotonic()
    try:
        found = verify_client_strategy(inst, strat, cfg)
    except BudgetExhausted:
        print("unknown: budget exhausted")
        return UNKNOWN
    elapsed = round((time.monotonic() - t0) * 1000, 1)
    if found is None:
        print(f"ok: {args.strategy} wins every line ({elapsed} ms)")
        return OK
    text = found.transcript.to_text()
    print(f"refuted: {found.reason}")
    print(text, end="")
    _write(args.out, text)
    return REFUTED


def cmd_enumerate(args) -> int:
    q = boundary_q(args.n) if args.q is None else args.q
    insts = enumerate_decomposable(args.n, q)
    rows = []
    for inst in insts:
        rows.append({"label": inst.label, "hash": instance_hash(inst), "edges": inst.graph.m})
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            save_instance(inst, Path(args.out) / f"{inst.label}.json")
    print(_dump({"n": args.n, "q": q, "count": len(insts), "instances": rows}), end="")
    return OK


def cmd_verify_remark(args) -> int:
    cfg = SolveConfig(pruning=args.pruning, budget=args.budget, workers=args.workers,
                      table_key=args.table_key)
    report = verify_remark(args.n, cfg, q=args.q)
    print(report.to_json(), end="")
    _write(args.out, report.to_json(timings=False),
           {v.canonical_code: v.elapsed_ms for v in report.instances})
    if args.certs:
        Path(args.certs).mkdir(parents=True, exist_ok=True)
        for v in report.instances:
            if v.certificate is not None:
                v.certificate.save(Path(args.certs) / f"n{report.n}q{report.q}-{v.canonical_code}.jsonl")
    if report.refuted:
        return REFUTED
    return UNKNOWN if report.unknown else OK


def cmd_replay(args) -> int:
    inst = load_instance(args.instance)
    text = Path(args.file).read_text()
    first = text.lstrip().split("\n", 1)[0]
    if FORMAT in first:
        cert = StrategyCertificate.from_lines(text.splitlines())
        try:
            visited = replay_certificate(inst, cert, expected_hash=instance_hash(inst))
        except CertificateError as exc:
            print(f"invalid certificate: {exc}")
            return REFUTED
        side = getattr(cert.side, "value", cert.side)
        print(f"ok: {side} certificate holds against all opposing play ({visited} positions)")
        return OK
    states = replay(inst, Transcript.from_text(text))
    last = states[-1]
    won = terminal_winner(last)
    status = f"winner: {won.value}" if won else f"in progress after round {last.round}"
    print(f"ok: {len(states) - 1} rounds replayed, {status}")
    return OK


def cmd_bench(args) -> int:
    rows = []
    targets = [(f"n7q2-{i}", inst) for i, inst in enumerate(enumerate_decomposable(7, 2))]
    targets.append(("gq2", build_gq(2)))
    for name, inst in targets:
        res = Solver(inst, SolveConfig(pruning=args.pruning, budget=args.budget)).solve(new_game(inst))
        rate = res.nodes / res.elapsed if res.elapsed > 0 else 0.0
        rows.append({"instance": name, "winner": res.winner.value if res.winner else "unknown",
                     "nodes": res.nodes, "elapsed_ms": round(res.elapsed * 1000, 1),
                     "nodes_per_s": round(rate)})
        print(f"{name:10s} {rows[-1]['winner']:8s} nodes={res.nodes:<9d} {rate:10.0f} nodes/s", flush=True)
    _write(args.out, _dump(rows))
    return OK


# -- interactive play ---------------------------------------------------------

def _show(s: GameState) -> str:
    g = s.instance.graph
    lines = [f"round {s.round + 1}/{s.n - 1}  components: "
             + " ".join("{" + ",".join(map(str, sorted(p))) + "}" for p in s.parts)]
    free = s.free_edges
    lines.append("free edges: " + "  ".join(f"{e}:{g.edges[e][0]}-{g.edges[e][1]}"
                                             + ("*" if s.is_dead(e) else "") for e in free))
    return "\n".join(lines)


class _OptimalClient:
    def __init__(self, inst):
        self.solver = Solver(inst, SolveConfig(pruning=Pruning.OBS1))

    def __call__(self, s: GameState, offer):
        best = None
        for e in offer:
            child = apply_round(s, offer, e)
            if not self.solver.waiter_wins(child.free, child.lab):
                return e
            best = e if best is None else best
        return best


class _OptimalWaiter:
    def __init__(self, inst):
        self.solver = Solver(inst, SolveConfig(pruning=Pruning.OBS1))

    def __call__(self, s: GameState):
        b = self.solver.board
        analysis = b.analyse(s.free, s.lab)
        fallback = None
        for mask, choices in self.solver.moves(s.free, s.lab, analysis):
            offer = tuple(e for e in range(b.m) if mask >> e & 1)
            fallback = fallback or offer
            if all(self.solver.waiter_wins(apply_round(s, offer, e).free, apply_round(s, offer, e).lab)
                   for e in offer):
                return offer
        return fallback if fallback is not None else heuristic_waiter(s)


def cmd_play(args) -> int:
    inst = load_instance(args.instance)
    human = Side(args.as_.capitalize())
    if human is Side.WAITER:
        if args.opponent == "heuristic":
            raise UsageError("the heuristic opponent plays Waiter; use --as client")
        client = _OptimalClient(inst) if args.opponent == "optimal" else lemma2_strategy(inst)
    else:
        if args.opponent == "lemma2":
            raise UsageError("lemma2 is a Client strategy; use --as waiter")
        waiter = _OptimalWaiter(inst) if args.opponent == "optimal" else heuristic_waiter
    s = new_game(inst)
    stdin = args.input or sys.stdin
    print(f"You are {human.value}. Commands: show, offer i j ..., choose i, quit")
    while terminal_winner(s) is None:
        if human is Side.CLIENT:
            offer = waiter(s)
            print(f"Waiter offers {','.join(map(str, offer))}")
        else:
            offer = None
        while True:
            print("> ", end="", flush=True)
            line = stdin.readline()
            if not line:
                print("\nbye")
                return OK
            words = line.split()
            if not words:
                continue
            cmd, rest = words[0], words[1:]
            try:
                if cmd == "quit":
                    return OK
                if cmd == "show":
                    print(_show(s))
                elif cmd == "offer" and human is Side.WAITER:
                    offer = check_offer(s, [int(x) for x in rest])
                    c = client(s, offer)
                    print(f"Client takes {c}")
                    s = apply_round(s, offer, c)
                    break
                elif cmd == "choose" and human is Side.CLIENT:
                    c = int(rest[0])
                    s = apply_round(s, offer, c)
                    break
                else:
                    print("unknown command")
            except (GameError, ValueError, IndexError) as exc:
                print(f"illegal: {exc}")
    print(_show(s))
    print(f"game over: {terminal_winner(s).value} wins")
    return OK


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wcgame", description="Waiter-Client connectivity games on unions of spanning trees")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging (strategy traces)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a board from the constructive families")
    c.add_argument("--n", type=int)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--family", choices=["gq", "gnq"])
    c.add_argument("--seed", type=int, default=None, help="randomize the padding choices")
    c.add_argument("--out")
    c.add_argument("--dot")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("check", help="validate an instance file")
    c.add_argument("instance")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("solve", help="solve the game from the start position")
    c.add_argument("instance")
    _solver_flags(c)
    c.add_argument("--cert", help="write the winner's certificate (JSON lines)")
    c.add_argument("--out", help="write the report without timings")
    c.set_defaults(func=cmd_solve)

    c = sub.add_parser("verify-strategy", help="check a Client strategy against every Waiter line")
    c.add_argument("instance")
    c.add_argument("--strategy", choices=sorted(_STRATEGIES), default="lemma2")
    c.add_argument("--budget", type=float, default=0.0)
    c.add_argument("--out", help="write the counterexample transcript here")
    c.set_defaults(func=cmd_verify_strategy)

    c = sub.add_parser("enumerate", help="all decomposable boards up to isomorphism")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--q", type=int, help="default: the boundary value for n")
    c.add_argument("--out", help="directory for instance files")
    c.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("verify-remark", help="solve every boundary board for n")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--q", type=int)
    _solver_flags(c)
    c.add_argument("--out", help="write the report without timings")
    c.add_argument("--certs", help="directory for Waiter certificates")
    c.set_defaults(func=cmd_verify_remark)

    c = sub.add_parser("replay", help="replay a transcript or check a certificate")
    c.add_argument("instance")
    c.add_argument("file")
    c.set_defaults(func=cmd_replay)

    c = sub.add_parser("play", help="play interactively against a strategy")
    c.add_argument("instance")
    c.add_argument("--as", dest="as_", choices=["waiter", "client"], required=True)
    c.add_argument("--opponent", choices=["optimal", "lemma2", "heuristic"], default="optimal")
    c.set_defaults(func=cmd_play, input=None)

    c = sub.add_parser("bench", help="node throughput on the n=7 boundary boards and G(2)")
    c.add_argument("--pruning", choices=[x.value for x in PRUNING_ORDER], default="obs1")
    c.add_argument("--budget", type=float, default=120.0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (GraphError, CertificateError, GameError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
