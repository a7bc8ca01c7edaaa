"""Solve the game on G(q) exactly and check the anchored-triangle Client strategy.

    python scripts/solve_g2.py --q 2 --pruning obs1
"""
import argparse
import time

from wcgame.construct import build_gq
from wcgame.game import new_game
from wcgame.solver import SolveConfig, solve, verify_client_strategy
from wcgame.strategy import lemma2_strategy


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--pruning", default="obs1", choices=["none", "dead-collapse", "bundle", "obs1"])
    p.add_argument("--budget", type=float, default=0.0)
    p.add_argument("--skip-solve", action="store_true", help="only verify the strategy")
    args = p.parse_args()

    inst = build_gq(args.q)
    print(f"{inst.label}: n={inst.n}, {inst.graph.m} edges, anchors {inst.anchors}")
    if not args.skip_solve:
        res = solve(new_game(inst), SolveConfig(pruning=args.pruning, budget=args.budget))
        rep = res.report()
        print(f"solve: winner={rep['winner']} nodes={rep['nodes']} hits={rep['table_hits']} "
              f"{rep['elapsed_ms'] / 1000:.1f} s")
    t0 = time.perf_counter()
    found = verify_client_strategy(inst, lemma2_strategy(inst))
    took = time.perf_counter() - t0
    if found is None:
        print(f"strategy: wins every Waiter line ({took:.1f} s)")
    else:
        print(f"strategy: refuted ({found.reason})")
        print(found.transcript.to_text(), end="")


if __name__ == "__main__":
    main()
