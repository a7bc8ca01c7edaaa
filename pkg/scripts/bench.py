"""Node throughput of each pruning level on the n=7 boundary boards and on G(2).

    python scripts/bench.py --levels bundle obs1 --budget 120
"""
import argparse

from wcgame.construct import build_gq
from wcgame.enumeration import enumerate_decomposable
from wcgame.game import new_game
from wcgame.solver import SolveConfig, solve


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", nargs="+", default=["none", "dead-collapse", "bundle", "obs1"])
    p.add_argument("--budget", type=float, default=60.0)
    p.add_argument("--no-g2", action="store_true")
    args = p.parse_args()

    boards = enumerate_decomposable(7, 2)
    if not args.no_g2:
        boards.append(build_gq(2))
    print(f"{'board':22s} {'level':14s} {'winner':8s} {'nodes':>9s} {'seconds':>8s} {'nodes/s':>9s}")
    for inst in boards:
        for level in args.levels:
            res = solve(new_game(inst), SolveConfig(pruning=level, budget=args.budget))
            winner = res.winner.value if res.winner else "unknown"
            rate = res.nodes / res.elapsed if res.elapsed else 0.0
            print(f"{inst.label:22s} {level:14s} {winner:8s} {res.nodes:9d} {res.elapsed:8.2f} {rate:9.0f}",
                  flush=True)


if __name__ == "__main__":
    main()
