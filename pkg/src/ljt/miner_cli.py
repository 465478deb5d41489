"""``miner`` command: basin-hop over a size range and submit improvements."""

from __future__ import annotations

import argparse
import sys

from . import canonical
from .client import node_url_from_env
from .ledger import Address
from .miner import OptimizerConfig, mine_loop


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miner",
        description="Basin-hopping LJ cluster miner: optimizes structures and "
                    "submits any that beat the stored energies.")
    parser.add_argument("--node", default=node_url_from_env(),
                        help="node URL (default: $LJT_NODE_URL or local node)")
    parser.add_argument("--caller", required=True,
                        help="miner address (0x + 40 hex digits)")
    parser.add_argument("--n-from", type=int, default=2)
    parser.add_argument("--n-to", type=int, default=50)
    parser.add_argument("--hops", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--step", type=float, default=0.35,
                        help="perturbation half-width in sigma")
    parser.add_argument("--temp", type=float, default=0.8,
                        help="Metropolis temperature in epsilon")
    parser.add_argument("--gmax-tol", type=float, default=1e-8)
    parser.add_argument("--max-lm-iters", type=int, default=5000)
    parser.add_argument("--report-dir", default=None,
                        help="also write report.json, per-n CSV files and figures here")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        Address.parse(args.caller)
    except ValueError as exc:
        print(f"bad --caller: {exc}", file=sys.stderr)
        return 2
    cfg = OptimizerConfig(seed=args.seed, hops=args.hops, step=args.step,
                          temperature=args.temp, gmax_tol=args.gmax_tol,
                          max_lm_iters=args.max_lm_iters)

    def progress(entry: dict) -> None:
        print(f"n={entry['n']}: {entry['status']}"
              + (f" energy={entry['energy']}" if "energy" in entry else "")
              + (f" reward={entry['reward']}" if "reward" in entry else ""),
              file=sys.stderr)

    report, positions = mine_loop(args.node, args.n_from, args.n_to, cfg,
                                  caller=args.caller, on_result=progress)
    if args.report_dir:
        from .report import write_report  # matplotlib import stays off the fast path
        path = write_report(report, args.report_dir, positions)
        print(f"report written to {path}", file=sys.stderr)
    sys.stdout.buffer.write(canonical.dumps_loose(report) + b"\n")
    statuses = {r.get("status") for r in report["results"]}
    return 1 if statuses <= {"error"} else 0


if __name__ == "__main__":
    raise SystemExit(main())
