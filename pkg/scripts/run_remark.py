"""Solve every boundary board for each n and write one report per n.

    python scripts/run_remark.py --n 7 8 9 --budget 600 --out results/
"""
import argparse
from pathlib import Path

from wcgame.certificate import replay_certificate
from wcgame.enumeration import enumerate_decomposable, verify_remark
from wcgame.solver import SolveConfig


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[7])
    p.add_argument("--budget", type=float, default=0.0, help="seconds per board; 0 = unlimited")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--replay", action="store_true", help="replay every Waiter certificate")
    p.add_argument("--out", type=Path)
    args = p.parse_args()

    cfg = SolveConfig(pruning="obs1", budget=args.budget, workers=args.workers)
    for n in args.n:
        report = verify_remark(n, cfg)
        print(f"n={n} q={report.q}: {report.conclusion}")
        for v in report.instances:
            winner = v.winner.value if v.winner else "unknown"
            print(f"  {v.canonical_code}  {winner:8s} nodes={v.nodes:<8d} {v.elapsed_ms / 1000:8.1f} s")
        if args.replay:
            boards = {b.label.rsplit("-", 1)[-1]: b for b in enumerate_decomposable(n, report.q)}
            for v in report.instances:
                if v.certificate is not None:
                    replay_certificate(boards[v.canonical_code], v.certificate)
            print("  certificates replayed")
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"remark_n{n}.json").write_text(report.to_json())


if __name__ == "__main__":
    main()
