"""HTTP node: serves the chain and contract, owns persistence and sealing.

All mutation flows through a single sealing path. In "on-submit" mode each
transaction is sealed into its own block inside the request; in interval
mode requests queue and a sealer thread batches them. A sealed block is
written to the log (atomic temp-file rename, fsynced) before the receipt is
acknowledged, so an acknowledged transaction survives any crash.

Identity is simulated: the X-Caller header names the transaction sender and
the node assigns nonces. Real signatures could slot in at this boundary.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any

from . import canonical
from .chain import (
    Call,
    Chain,
    GenesisConfig,
    Receipt,
    Transaction,
    faucet_call,
    load_genesis_file,
    load_lines,
    replay_chain,
    store_lines,
)
from .contract import (
    effective_rate,
    has_access,
    params_to_jsonable,
    view_top_balance,
    view_top_rate,
)
from .errors import ConfigError, ParseError
from .ledger import Address
from .lj_energy import ClusterConfig, calc_energy, parse_positions_csv

log = logging.getLogger("ljt.node")


@dataclass
class NodeConfig:
    listen: str = "127.0.0.1:8545"
    block_log: str = "blocks.log"
    genesis: str = "genesis.json"
    seal_interval: str | float = "on-submit"
    dev_faucet: bool = True
    queue_limit: int = 256

    @classmethod
    def from_file(cls, path: str) -> "NodeConfig":
        with open(path, "rb") as fh:
            obj = json.load(fh)
        cfg = cls()
        for key in ("listen", "block_log", "genesis", "seal_interval",
                    "dev_faucet", "queue_limit"):
            if key in obj:
                setattr(cfg, key, obj[key])
        return cfg

    @property
    def host_port(self) -> tuple[str, int]:
        host, _, port = self.listen.rpartition(":")
        return host or "127.0.0.1", int(port)


class QueueFull(Exception):
    pass


class _Pending:
    __slots__ = ("caller", "call", "event", "receipt")

    def __init__(self, caller: Address, call: Call):
        self.caller = caller
        self.call = call
        self.event = threading.Event()
        self.receipt: Receipt | None = None


class Node:
    """Chain owner: replays the log at startup, seals and persists new blocks."""

    def __init__(self, cfg: NodeConfig):
        self.cfg = cfg
        self.genesis_cfg: GenesisConfig = load_genesis_file(cfg.genesis)
        self._lock = threading.RLock()
        self._pending: list[_Pending] = []
        self._stop = threading.Event()
        self._sealer: threading.Thread | None = None
        self._server: ThreadingHTTPServer | None = None
        self._load_chain()

    def _load_chain(self) -> None:
        try:
            lines = load_lines(self.cfg.block_log)
        except FileNotFoundError:
            lines = []
        if lines:
            self.chain, _ = replay_chain(self.genesis_cfg, lines)  # raises CorruptLog
            log.info("replayed %d blocks, head root %s",
                     len(lines) - 1, self.chain.head.state_root.hex())
        else:
            self.chain = Chain(self.genesis_cfg)
            self._persist()
            log.info("initialized fresh chain, genesis root %s",
                     self.chain.head.state_root.hex())

    def _persist(self) -> None:
        store_lines(self.cfg.block_log, (b.to_line() for b in self.chain.blocks))

    # -- sealing --

    def _seal_batch(self, batch: list[_Pending]) -> None:
        # caller holds the lock
        txs = []
        nonces = dict(self.chain.nonces)
        for item in batch:
            nonce = nonces.get(item.caller, 0)
            nonces[item.caller] = nonce + 1
            txs.append(Transaction(item.caller, nonce, item.call))
        _, receipts = self.chain.seal_block(txs, int(time.time()))
        self._persist()
        for item, receipt in zip(batch, receipts):
            item.receipt = receipt
            item.event.set()

    def submit(self, caller: Address, call: Call, timeout: float = 30.0) -> Receipt:
        item = _Pending(caller, call)
        if self.cfg.seal_interval == "on-submit":
            with self._lock:
                self._seal_batch([item])
        else:
            with self._lock:
                if len(self._pending) >= self.cfg.queue_limit:
                    raise QueueFull(f"{len(self._pending)} transactions pending")
                self._pending.append(item)
            if not item.event.wait(timeout):
                raise QueueFull("seal queue did not drain in time")
        assert item.receipt is not None
        return item.receipt

    def _sealer_loop(self) -> None:
        interval = float(self.cfg.seal_interval)
        while not self._stop.wait(interval):
            self._drain()
        self._drain()

    def _drain(self) -> None:
        with self._lock:
            if self._pending:
                batch, self._pending = self._pending, []
                self._seal_batch(batch)

    # -- serving --

    def start(self) -> None:
        if self.cfg.seal_interval != "on-submit":
            self._sealer = threading.Thread(target=self._sealer_loop, daemon=True)
            self._sealer.start()
        host, port = self.cfg.host_port
        handler = _make_handler(self)
        self._server = ThreadingHTTPServer((host, port), handler)
        self._server.daemon_threads = True
        thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        thread.start()
        log.info("listening on %s:%d", *self._server.server_address[:2])

    @property
    def port(self) -> int:
        assert self._server is not None
        return self._server.server_address[1]

    def stop(self) -> None:
        self._stop.set()
        if self._sealer is not None:
            self._sealer.join(timeout=5)
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()

    def serve_forever(self) -> None:
        self.start()
        try:
            while True:
                time.sleep(3600)
        except KeyboardInterrupt:
            self.stop()

    # -- snapshot reads (world objects are immutable once published) --

    def world(self):
        with self._lock:
            return self.chain.world

    def dev_wallets(self) -> list[str]:
        world = self.world()
        addrs = {self.genesis_cfg.params.owner}
        addrs.update(self.genesis_cfg.allocations)
        addrs.update(world.ledger.ljt_balances)
        addrs.update(world.ledger.native_balances)
        return [str(a) for a in sorted(addrs)]


class _HttpError(Exception):
    def __init__(self, status: int, code: str, detail: str = ""):
        self.status = status
        self.code = code
        self.detail = detail


_ROUTES: list[tuple[str, re.Pattern, str]] = [
    ("POST", re.compile(r"^/tx$"), "tx"),
    ("POST", re.compile(r"^/calc-energy$"), "calc_energy"),
    ("POST", re.compile(r"^/dev/faucet$"), "faucet"),
    ("GET", re.compile(r"^/balance/(0x[0-9a-f]{40})$"), "balance"),
    ("GET", re.compile(r"^/native/(0x[0-9a-f]{40})$"), "native"),
    ("GET", re.compile(r"^/access/(0x[0-9a-f]{40})$"), "access"),
    ("GET", re.compile(r"^/rates/(0x[0-9a-f]{40})$"), "rates"),
    ("GET", re.compile(r"^/data/(\d+)$"), "data"),
    ("GET", re.compile(r"^/top/balances$"), "top_balances"),
    ("GET", re.compile(r"^/top/rates$"), "top_rates"),
    ("GET", re.compile(r"^/chain/head$"), "head"),
    ("GET", re.compile(r"^/chain/blocks$"), "blocks"),
    ("GET", re.compile(r"^/state-root$"), "state_root"),
    ("GET", re.compile(r"^/params$"), "params"),
    ("GET", re.compile(r"^/dev/wallets$"), "wallets"),
]


def _make_handler(node: Node):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt: str, *args) -> None:
            log.debug("%s %s", self.address_string(), fmt % args)

        def _send(self, status: int, payload: Any) -> None:
            body = canonical.dumps_loose(payload)
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type, X-Caller")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self) -> None:  # CORS preflight for the browser UI
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type, X-Caller")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def _dispatch(self, method: str) -> None:
            path, _, query = self.path.partition("?")
            try:
                for verb, pattern, name in _ROUTES:
                    if verb != method:
                        continue
                    match = pattern.match(path)
                    if match:
                        status, payload = getattr(self, "h_" + name)(match, query)
                        self._send(status, payload)
                        return
                raise _HttpError(404, "NotFound", f"no route for {method} {path}")
            except _HttpError as exc:
                self._send(exc.status, {"error": exc.code, "detail": exc.detail})
            except Exception as exc:  # defensive: never drop a connection silently
                log.exception("internal error")
                self._send(500, {"error": "Internal", "detail": str(exc)})

        def do_GET(self) -> None:
            self._dispatch("GET")

        def do_POST(self) -> None:
            self._dispatch("POST")

        # -- helpers --

        def _body(self) -> Any:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            try:
                return json.loads(raw.decode("utf-8")) if raw else {}
            except (ValueError, UnicodeDecodeError) as exc:
                raise _HttpError(400, "MalformedBody", str(exc)) from None

        def _caller(self, required: bool = True) -> Address | None:
            raw = self.headers.get("X-Caller")
            if raw is None:
                if required:
                    raise _HttpError(400, "MissingCaller", "X-Caller header required")
                return None
            try:
                return Address.parse(raw.strip())
            except ValueError as exc:
                raise _HttpError(400, "BadCaller", str(exc)) from None

        def _receipt_response(self, receipt: Receipt) -> tuple[int, dict]:
            return (200 if receipt.ok else 422), receipt.to_jsonable()

        def _parse_call(self, body: Any) -> Call:
            if not isinstance(body, dict):
                raise _HttpError(400, "MalformedBody", "expected a call object")
            if body.get("type") == "MineToken" and "csv" in body:
                try:
                    config = parse_positions_csv(body["csv"])
                except (ParseError, ConfigError) as exc:
                    raise _HttpError(400, exc.code, str(exc)) from None
                body = {"type": "MineToken", "pos": list(config.coords)}
            try:
                return Call.from_jsonable(body)
            except (ValueError, TypeError) as exc:
                raise _HttpError(400, "MalformedBody", str(exc)) from None

        # -- handlers --

        def h_tx(self, match, query) -> tuple[int, dict]:
            caller = self._caller()
            call = self._parse_call(self._body())
            try:
                receipt = node.submit(caller, call)
            except QueueFull as exc:
                raise _HttpError(503, "QueueFull", str(exc)) from None
            return self._receipt_response(receipt)

        def h_faucet(self, match, query) -> tuple[int, dict]:
            if not node.cfg.dev_faucet:
                raise _HttpError(404, "NotFound", "dev faucet disabled")
            body = self._body()
            if not isinstance(body, dict) or set(body) != {"address", "value"}:
                raise _HttpError(400, "MalformedBody", "need address and value")
            try:
                addr = Address.parse(body["address"])
                call = faucet_call(body["value"])
            except (ValueError, TypeError) as exc:
                raise _HttpError(400, "MalformedBody", str(exc)) from None
            try:
                receipt = node.submit(addr, call)
            except QueueFull as exc:
                raise _HttpError(503, "QueueFull", str(exc)) from None
            return self._receipt_response(receipt)

        def h_calc_energy(self, match, query) -> tuple[int, dict]:
            body = self._body()
            if not isinstance(body, dict):
                raise _HttpError(400, "MalformedBody", "expected an object")
            try:
                if "coords" in body:
                    coords = body["coords"]
                    if not isinstance(coords, list) or not all(
                            isinstance(c, int) and not isinstance(c, bool) for c in coords):
                        raise _HttpError(400, "MalformedBody", "coords must be integers")
                    config = ClusterConfig(tuple(coords))
                elif "csv" in body:
                    config = parse_positions_csv(body["csv"])
                else:
                    raise _HttpError(400, "MalformedBody", "need coords or csv")
            except (ParseError, ConfigError) as exc:
                raise _HttpError(400, exc.code, str(exc)) from None
            return 200, {"energy": calc_energy(config), "n": config.n}

        def h_balance(self, match, query) -> tuple[int, dict]:
            addr = Address.parse(match.group(1))
            return 200, {"address": str(addr), "ljt": node.world().ledger.balance_of(addr)}

        def h_native(self, match, query) -> tuple[int, dict]:
            addr = Address.parse(match.group(1))
            return 200, {"address": str(addr), "native": node.world().ledger.native_of(addr)}

        def h_access(self, match, query) -> tuple[int, dict]:
            addr = Address.parse(match.group(1))
            contract = node.world().contract
            grants = sorted(n for a, n in contract.access_db if a == addr)
            contributed = sorted(n for n, a in contract.contributor_db.items() if a == addr)
            return 200, {"address": str(addr), "access": grants, "contributed": contributed}

        def h_rates(self, match, query) -> tuple[int, dict]:
            addr = Address.parse(match.group(1))
            contract = node.world().contract
            return 200, {
                "address": str(addr),
                "rate": effective_rate(contract, addr),
                "explicit": addr in contract.rates,
            }

        def h_data(self, match, query) -> tuple[int, dict]:
            n = int(match.group(1))
            world = node.world()
            if n not in world.contract.energy_db:
                raise _HttpError(404, "NotFound", f"no data for n={n}")
            caller = self._caller(required=False)
            if caller is None or not has_access(world.contract, caller, n):
                raise _HttpError(403, "AccessDenied", f"no access to n={n}")
            return 200, {
                "n": n,
                "energy": world.contract.energy_db[n],
                "coords": list(world.contract.position_db[n].coords),
                "contributor": str(world.contract.contributor_db[n]),
            }

        def h_top_balances(self, match, query) -> tuple[int, dict]:
            top = view_top_balance(node.world().ledger)
            return 200, {"balances": [[str(a), v] for a, v in top]}

        def h_top_rates(self, match, query) -> tuple[int, dict]:
            world = node.world()
            top = view_top_rate(world.contract, world.ledger)
            return 200, {"rates": [[str(a), r] for a, r in top]}

        def h_head(self, match, query) -> tuple[int, dict]:
            with node._lock:
                head = node.chain.head
            return 200, {
                "height": head.height,
                "hash": "0x" + head.hash().hex(),
                "state_root": "0x" + head.state_root.hex(),
                "timestamp": head.timestamp,
            }

        def h_blocks(self, match, query) -> tuple[int, dict]:
            params = dict(p.split("=", 1) for p in query.split("&") if "=" in p)
            with node._lock:
                blocks = list(node.chain.blocks)
            try:
                start = int(params.get("from", 0))
                end = int(params.get("to", len(blocks) - 1))
            except ValueError as exc:
                raise _HttpError(400, "MalformedBody", str(exc)) from None
            if not (0 <= start <= end < len(blocks)):
                raise _HttpError(404, "NotFound",
                                 f"height range [{start}, {end}] outside chain")
            lines = [canonical.loads(b.to_line()) for b in blocks[start:end + 1]]
            return 200, {"blocks": lines}

        def h_state_root(self, match, query) -> tuple[int, dict]:
            with node._lock:
                root = node.chain.head.state_root
            return 200, {"state_root": "0x" + root.hex()}

        def h_params(self, match, query) -> tuple[int, dict]:
            return 200, params_to_jsonable(node.world().contract.params)

        def h_wallets(self, match, query) -> tuple[int, dict]:
            if not node.cfg.dev_faucet:
                raise _HttpError(404, "NotFound", "dev endpoints disabled")
            return 200, {"addresses": node.dev_wallets()}

    return Handler


def serve(cfg: NodeConfig) -> Node:
    """Replay the log and start serving; raises CorruptLog on a bad log."""
    node = Node(cfg)
    node.start()
    return node
