"""``ljt`` command: local wallets plus submit/query access to a node."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .client import ApiError, NodeClient, node_url_from_env
from .ledger import Address


def wallet_path() -> str:
    return os.environ.get("LJT_WALLET_PATH",
                          os.path.join(os.path.expanduser("~"), ".ljt", "wallets.json"))


def load_wallets() -> dict:
    try:
        with open(wallet_path()) as fh:
            return json.load(fh)
    except FileNotFoundError:
        return {"wallets": {}, "default": None}


def save_wallets(data: dict) -> None:
    path = wallet_path()
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def resolve_address(text: str | None) -> str:
    """An explicit 0x address, a wallet name, or the default wallet."""
    data = load_wallets()
    if text is None:
        name = data.get("default")
        if name is None or name not in data["wallets"]:
            raise SystemExit("no default wallet; run 'ljt wallet new' or pass --from")
        return data["wallets"][name]
    if text.startswith("0x"):
        return str(Address.parse(text))
    if text in data["wallets"]:
        return data["wallets"][text]
    raise SystemExit(f"unknown wallet {text!r}")


def emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ljt", description="LJT wallet and node client")
    parser.add_argument("--node", default=None, help="node URL (default: $LJT_NODE_URL)")
    sub = parser.add_subparsers(dest="command", required=True)

    wallet = sub.add_parser("wallet", help="manage local wallets")
    wsub = wallet.add_subparsers(dest="wallet_command", required=True)
    wnew = wsub.add_parser("new")
    wnew.add_argument("--name", default=None)
    wsub.add_parser("list")

    submit = sub.add_parser("submit", help="send a transaction")
    submit.add_argument("--from", dest="sender", default=None,
                        help="wallet name or 0x address (default wallet otherwise)")
    ssub = submit.add_subparsers(dest="call", required=True)
    mine = ssub.add_parser("mine")
    mine.add_argument("--csv", required=True, help="positions CSV file")
    access = ssub.add_parser("access")
    access.add_argument("--n", type=int, required=True)
    rate = ssub.add_parser("rate")
    rate.add_argument("--rate", type=int, required=True)
    buy = ssub.add_parser("buy")
    buy.add_argument("--seller", required=True)
    buy.add_argument("--value", type=int, required=True, help="native base units")
    xfer = ssub.add_parser("transfer")
    xfer.add_argument("--to", required=True)
    xfer.add_argument("--amount", type=int, required=True)
    faucet = ssub.add_parser("faucet")
    faucet.add_argument("--value", type=int, required=True)

    query = sub.add_parser("query", help="read node state")
    query.add_argument("--caller", default=None,
                       help="identity for access-gated reads (wallet name or address)")
    qsub = query.add_subparsers(dest="what", required=True)
    for name in ("balance", "native", "access", "rate"):
        q = qsub.add_parser(name)
        q.add_argument("address", help="wallet name or 0x address")
    data = qsub.add_parser("data")
    data.add_argument("n", type=int)
    data.add_argument("--save-csv", default=None, help="write the structure as CSV")
    data.add_argument("--plot", default=None, help="write a 3D scatter PNG")
    qsub.add_parser("top-balances")
    qsub.add_parser("top-rates")
    qsub.add_parser("head")
    qsub.add_parser("state-root")
    blocks = qsub.add_parser("blocks")
    blocks.add_argument("--from", dest="start", type=int, default=None)
    blocks.add_argument("--to", dest="end", type=int, default=None)
    qsub.add_parser("params")
    qsub.add_parser("wallets")

    calc = sub.add_parser("calc-energy", help="evaluate a CSV without submitting")
    calc.add_argument("--csv", required=True)
    return parser


def cmd_wallet(args: argparse.Namespace) -> int:
    data = load_wallets()
    if args.wallet_command == "new":
        name = args.name or f"wallet{len(data['wallets']) + 1}"
        if name in data["wallets"]:
            raise SystemExit(f"wallet {name!r} already exists")
        addr = str(Address.random())
        data["wallets"][name] = addr
        if data.get("default") is None:
            data["default"] = name
        save_wallets(data)
        emit({"name": name, "address": addr, "default": data["default"] == name})
    else:
        emit(data)
    return 0


def cmd_submit(args: argparse.Namespace, node_url: str) -> int:
    sender = resolve_address(args.sender)
    client = NodeClient(node_url, caller=sender)
    if args.call == "mine":
        with open(args.csv) as fh:
            receipt = client.mine_csv(fh.read())
    elif args.call == "access":
        receipt = client.gain_access(args.n)
    elif args.call == "rate":
        receipt = client.set_rate(args.rate)
    elif args.call == "buy":
        receipt = client.buy(resolve_address(args.seller), args.value)
    elif args.call == "transfer":
        receipt = client.transfer(resolve_address(args.to), args.amount)
    else:
        receipt = client.faucet(sender, args.value)
    emit(receipt)
    return 0 if receipt.get("ok") else 1


def cmd_query(args: argparse.Namespace, node_url: str) -> int:
    caller = resolve_address(args.caller) if args.caller else None
    client = NodeClient(node_url, caller=caller)
    if args.what in ("balance", "native", "access", "rate"):
        addr = resolve_address(args.address)
        emit(getattr(client, args.what if args.what != "rate" else "rate")(addr))
    elif args.what == "data":
        body = client.data(args.n)
        emit(body)
        if args.save_csv:
            from .lj_energy import format_positions_csv
            with open(args.save_csv, "w") as fh:
                fh.write(format_positions_csv(body["coords"]))
        if args.plot:
            from .report import render_cluster_png
            render_cluster_png(body["coords"], args.plot, title=f"n = {args.n}")
    elif args.what == "top-balances":
        emit(client.top_balances())
    elif args.what == "top-rates":
        emit(client.top_rates())
    elif args.what == "head":
        emit(client.head())
    elif args.what == "state-root":
        emit(client.state_root())
    elif args.what == "blocks":
        emit(client.blocks(args.start, args.end))
    elif args.what == "params":
        emit(client.params())
    else:
        emit(client.wallets())
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    node_url = args.node or node_url_from_env()
    try:
        if args.command == "wallet":
            return cmd_wallet(args)
        if args.command == "submit":
            return cmd_submit(args, node_url)
        if args.command == "query":
            return cmd_query(args, node_url)
        client = NodeClient(node_url)
        with open(args.csv) as fh:
            emit(client.calc_energy(csv_text=fh.read()))
        return 0
    except ApiError as exc:
        emit(exc.body)
        return 1
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
