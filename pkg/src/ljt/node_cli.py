"""``ljt-node`` command: run, verify, or initialize a node."""

from __future__ import annotations

import argparse
import logging
import sys

from .chain import (
    GenesisConfig,
    load_genesis_file,
    load_lines,
    store_genesis_file,
    verify_chain,
)
from .contract import ContractParams
from .errors import CorruptLog
from .ledger import Address
from .node import Node, NodeConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ljt-node", description="LJT chain node")
    parser.add_argument("--config", help="node config JSON (listen, block_log, genesis, ...)")
    parser.add_argument("--verify-only", action="store_true",
                        help="verify the block log, print the head state root, exit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")
    init = sub.add_parser("init", help="write a dev genesis + node config into a directory")
    init.add_argument("--dir", required=True)
    init.add_argument("--owner", default=None, help="owner address (random if omitted)")
    init.add_argument("--listen", default="127.0.0.1:8545")
    init.add_argument("--alloc", action="append", default=[], metavar="ADDR=BASEUNITS",
                      help="native allocation, repeatable")
    init.add_argument("--owner-grant", type=int, default=1000)
    return parser


def _cmd_init(args: argparse.Namespace) -> int:
    import json
    import os

    os.makedirs(args.dir, exist_ok=True)
    owner = Address.parse(args.owner) if args.owner else Address.random()
    allocations: dict[Address, int] = {}
    for entry in args.alloc:
        addr_text, _, value = entry.partition("=")
        allocations[Address.parse(addr_text)] = int(value)
    genesis = GenesisConfig(
        params=ContractParams(owner=owner, initial_owner_grant=args.owner_grant),
        allocations=allocations,
    )
    genesis_path = os.path.join(args.dir, "genesis.json")
    store_genesis_file(genesis_path, genesis)
    node_cfg = {
        "listen": args.listen,
        "block_log": os.path.join(args.dir, "blocks.log"),
        "genesis": genesis_path,
        "seal_interval": "on-submit",
        "dev_faucet": True,
    }
    cfg_path = os.path.join(args.dir, "node.json")
    with open(cfg_path, "w") as fh:
        json.dump(node_cfg, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"owner   {owner}")
    print(f"genesis {genesis_path}")
    print(f"config  {cfg_path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    if args.command == "init":
        return _cmd_init(args)
    if not args.config:
        print("--config is required (or use the 'init' subcommand)", file=sys.stderr)
        return 2
    cfg = NodeConfig.from_file(args.config)
    if args.verify_only:
        genesis = load_genesis_file(cfg.genesis)
        try:
            lines = load_lines(cfg.block_log)
        except FileNotFoundError:
            print("block log missing", file=sys.stderr)
            return 1
        result = verify_chain(genesis, lines)
        if not result:
            print(f"corrupt at height {result.height}: {result.reason} ({result.detail})",
                  file=sys.stderr)
            return 1
        from .chain import Block
        head = Block.from_line(lines[-1])
        print("0x" + head.state_root.hex())
        return 0
    try:
        node = Node(cfg)
    except CorruptLog as exc:
        print(f"refusing to serve: {exc}", file=sys.stderr)
        return 1
    node.serve_forever()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
