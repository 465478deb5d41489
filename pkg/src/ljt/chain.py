"""Hash-linked block ledger hosting the contract.

Blocks batch transactions; each block records the SHA-256 state root of the
world (ledger + contract) after applying its transactions, and the hash of
its predecessor's canonical serialization. Block production is a trivial
single-sealer authority: the consensus-like work in this system is the
mining rule itself, so the interesting property is that any node replaying
the log reaches a byte-identical world.

Block-log format: one canonical-JSON object per line, append-only. Each line
carries the block body plus its own hash ("hash" covers everything except
itself), so a tampered line is detectable at its own height without a
successor. Failed contract calls are sealed like any other transaction - the
failure is an on-chain fact - with the caller's nonce consumed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from . import canonical
from .canonical import hex_to_bytes, require_uint
from .contract import (
    ContractParams,
    ContractState,
    MineResult,
    buy_token,
    contract_from_jsonable,
    contract_to_jsonable,
    gain_access,
    genesis as contract_genesis,
    mine_token,
    params_from_jsonable,
    params_to_jsonable,
    set_exchange_rate,
)
from .errors import BadNonce, ConfigError, ContractError, CorruptLog, DivergenceDetected
from .ledger import (
    Address,
    LedgerState,
    ledger_from_jsonable,
    ledger_to_jsonable,
    native_mint,
    transfer,
)
from .lj_energy import ClusterConfig

ZERO_HASH = bytes(32)

CALL_TYPES = ("MineToken", "GainAccess", "SetExchangeRate", "BuyToken",
              "TransferLJT", "FaucetNative")


@dataclass(frozen=True)
class Call:
    """A contract invocation: one of the six transaction variants."""

    type: str
    fields: dict

    def to_jsonable(self) -> dict:
        return {"type": self.type, **self.fields}

    @classmethod
    def from_jsonable(cls, obj: dict) -> "Call":
        if not isinstance(obj, dict) or "type" not in obj:
            raise ValueError("call must be an object with a 'type' field")
        kind = obj["type"]
        body = {k: v for k, v in obj.items() if k != "type"}
        if kind == "MineToken":
            if set(body) != {"pos"} or not isinstance(body["pos"], list):
                raise ValueError("MineToken requires a 'pos' array")
            pos = tuple(require_uint(c, what="coordinate") for c in body["pos"])
            return cls(kind, {"pos": list(pos)})
        if kind == "GainAccess":
            if set(body) != {"n"}:
                raise ValueError("GainAccess requires 'n'")
            return cls(kind, {"n": require_uint(body["n"], what="n")})
        if kind == "SetExchangeRate":
            if set(body) != {"rate"}:
                raise ValueError("SetExchangeRate requires 'rate'")
            return cls(kind, {"rate": require_uint(body["rate"], what="rate")})
        if kind == "BuyToken":
            if set(body) != {"seller", "value"}:
                raise ValueError("BuyToken requires 'seller' and 'value'")
            return cls(kind, {"seller": str(Address.parse(body["seller"])),
                              "value": require_uint(body["value"], what="value")})
        if kind == "TransferLJT":
            if set(body) != {"amount", "to"}:
                raise ValueError("TransferLJT requires 'to' and 'amount'")
            return cls(kind, {"amount": require_uint(body["amount"], what="amount"),
                              "to": str(Address.parse(body["to"]))})
        if kind == "FaucetNative":
            if set(body) != {"value"}:
                raise ValueError("FaucetNative requires 'value'")
            return cls(kind, {"value": require_uint(body["value"], what="value")})
        raise ValueError(f"unknown call type {kind!r}")


def mine_call(coords: Sequence[int]) -> Call:
    return Call.from_jsonable({"type": "MineToken", "pos": list(coords)})


def access_call(n: int) -> Call:
    return Call.from_jsonable({"type": "GainAccess", "n": n})


def rate_call(rate: int) -> Call:
    return Call.from_jsonable({"type": "SetExchangeRate", "rate": rate})


def buy_call(seller: Address, value: int) -> Call:
    return Call.from_jsonable({"type": "BuyToken", "seller": str(seller), "value": value})


def transfer_call(to: Address, amount: int) -> Call:
    return Call.from_jsonable({"type": "TransferLJT", "to": str(to), "amount": amount})


def faucet_call(value: int) -> Call:
    return Call.from_jsonable({"type": "FaucetNative", "value": value})


@dataclass(frozen=True)
class Transaction:
    caller: Address
    nonce: int
    call: Call

    def to_jsonable(self) -> dict:
        return {"call": self.call.to_jsonable(), "caller": str(self.caller), "nonce": self.nonce}

    @classmethod
    def from_jsonable(cls, obj: dict) -> "Transaction":
        if not isinstance(obj, dict) or set(obj) != {"call", "caller", "nonce"}:
            raise ValueError("transaction must have exactly caller/nonce/call")
        return cls(
            caller=Address.parse(obj["caller"]),
            nonce=require_uint(obj["nonce"], what="nonce"),
            call=Call.from_jsonable(obj["call"]),
        )


@dataclass(frozen=True)
class Receipt:
    """Outcome of one applied transaction (derived on replay, not hashed)."""

    caller: Address
    nonce: int
    call_type: str
    ok: bool
    error: str | None = None
    mine_result: MineResult | None = None
    height: int | None = None

    def to_jsonable(self) -> dict:
        out: dict = {
            "call_type": self.call_type,
            "caller": str(self.caller),
            "nonce": self.nonce,
            "ok": self.ok,
        }
        if self.error is not None:
            out["error"] = self.error
        if self.mine_result is not None:
            out["mine_result"] = self.mine_result.to_jsonable()
        if self.height is not None:
            out["height"] = self.height
        return out


@dataclass(frozen=True)
class WorldState:
    """Everything the state root covers: token ledger plus contract storage."""

    ledger: LedgerState
    contract: ContractState

    def to_jsonable(self) -> dict:
        return {"contract": contract_to_jsonable(self.contract),
                "ledger": ledger_to_jsonable(self.ledger)}

    @classmethod
    def from_jsonable(cls, obj: dict) -> "WorldState":
        if set(obj) != {"contract", "ledger"}:
            raise ValueError("world must have exactly contract/ledger")
        return cls(ledger=ledger_from_jsonable(obj["ledger"]),
                   contract=contract_from_jsonable(obj["contract"]))

    def state_root(self) -> bytes:
        return canonical.digest(self.to_jsonable())


@dataclass(frozen=True)
class Block:
    height: int
    prev_hash: bytes
    timestamp: int
    txs: tuple[Transaction, ...]
    state_root: bytes

    def body_jsonable(self) -> dict:
        return {
            "height": self.height,
            "prev_hash": self.prev_hash,
            "state_root": self.state_root,
            "timestamp": self.timestamp,
            "txs": [t.to_jsonable() for t in self.txs],
        }

    def hash(self) -> bytes:
        return canonical.digest(self.body_jsonable())

    def to_line(self) -> bytes:
        """Canonical log line: body fields plus the block's own hash."""
        obj = self.body_jsonable()
        obj["hash"] = self.hash()
        return canonical.dumps(obj)

    @classmethod
    def from_line(cls, line: bytes) -> "Block":
        obj = canonical.loads(line)
        if not isinstance(obj, dict) or set(obj) != {"hash", "height", "prev_hash",
                                                     "state_root", "timestamp", "txs"}:
            raise ValueError("block line must have hash/height/prev_hash/state_root/timestamp/txs")
        block = cls(
            height=require_uint(obj["height"], what="height"),
            prev_hash=hex_to_bytes(obj["prev_hash"], length=32),
            timestamp=require_uint(obj["timestamp"], what="timestamp"),
            txs=tuple(Transaction.from_jsonable(t) for t in obj["txs"]),
            state_root=hex_to_bytes(obj["state_root"], length=32),
        )
        if hex_to_bytes(obj["hash"], length=32) != block.hash():
            raise ValueError("stored block hash does not match body")
        if block.to_line() != line:
            raise ValueError("block line is not in canonical form")
        return block


def canonical_serialize(value) -> bytes:
    """Canonical bytes of a Transaction, Block, WorldState, or jsonable value."""
    if isinstance(value, Transaction):
        return canonical.dumps(value.to_jsonable())
    if isinstance(value, Block):
        return value.to_line()
    if isinstance(value, WorldState):
        return canonical.dumps(value.to_jsonable())
    return canonical.dumps(value)


# --- genesis ---

@dataclass(frozen=True)
class GenesisConfig:
    params: ContractParams
    allocations: dict[Address, int] = field(default_factory=dict)
    timestamp: int = 0

    def to_jsonable(self) -> dict:
        return {
            "allocations": {str(a): v for a, v in sorted(self.allocations.items())},
            "params": params_to_jsonable(self.params),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "GenesisConfig":
        if set(obj) != {"allocations", "params", "timestamp"}:
            raise ValueError("genesis must have allocations/params/timestamp")
        return cls(
            params=params_from_jsonable(obj["params"]),
            allocations={Address.parse(a): require_uint(v, what="allocation")
                         for a, v in obj["allocations"].items()},
            timestamp=require_uint(obj["timestamp"], what="timestamp"),
        )


def genesis_world(cfg: GenesisConfig) -> WorldState:
    contract_state, ledger = contract_genesis(cfg.params)
    for addr, value in sorted(cfg.allocations.items()):
        ledger = native_mint(ledger, addr, value)
    return WorldState(ledger=ledger, contract=contract_state)


def genesis_block(cfg: GenesisConfig) -> Block:
    return Block(height=0, prev_hash=ZERO_HASH, timestamp=cfg.timestamp,
                 txs=(), state_root=genesis_world(cfg).state_root())


# --- transaction application ---

def apply_transaction(world: WorldState, nonces: dict[Address, int],
                      tx: Transaction) -> tuple[WorldState, dict[Address, int], Receipt]:
    """Apply one transaction. BadNonce means the tx is not includable at all;
    contract errors consume the nonce and are recorded in the receipt."""
    expected = nonces.get(tx.caller, 0)
    if tx.nonce != expected:
        raise BadNonce(f"{tx.caller} nonce {tx.nonce}, expected {expected}")
    new_nonces = {**nonces, tx.caller: expected + 1}
    kind = tx.call.type
    fields = tx.call.fields
    try:
        ledger, contract_state = world.ledger, world.contract
        mine_result = None
        if kind == "MineToken":
            pos = ClusterConfig(tuple(fields["pos"]))
            contract_state, ledger, mine_result = mine_token(
                contract_state, ledger, tx.caller, pos)
        elif kind == "GainAccess":
            contract_state, ledger = gain_access(contract_state, ledger, tx.caller, fields["n"])
        elif kind == "SetExchangeRate":
            contract_state = set_exchange_rate(contract_state, tx.caller, fields["rate"])
        elif kind == "BuyToken":
            ledger = buy_token(contract_state, ledger, tx.caller,
                               Address.parse(fields["seller"]), fields["value"])
        elif kind == "TransferLJT":
            ledger = transfer(ledger, tx.caller, Address.parse(fields["to"]), fields["amount"])
        elif kind == "FaucetNative":
            ledger = native_mint(ledger, tx.caller, fields["value"])
        else:  # unreachable: Call.from_jsonable validates the type
            raise ValueError(f"unknown call type {kind!r}")
    except (ContractError, ConfigError) as exc:
        receipt = Receipt(tx.caller, tx.nonce, kind, ok=False, error=exc.code)
        return world, new_nonces, receipt
    new_world = WorldState(ledger=ledger, contract=contract_state)
    receipt = Receipt(tx.caller, tx.nonce, kind, ok=True, mine_result=mine_result)
    return new_world, new_nonces, receipt


ApplyFn = Callable[[WorldState, dict[Address, int], Transaction],
                   tuple[WorldState, dict[Address, int], Receipt]]


# --- the chain ---

class Chain:
    """Mutable single-sealer chain: genesis world plus an append-only block list."""

    def __init__(self, cfg: GenesisConfig):
        self.cfg = cfg
        self.world = genesis_world(cfg)
        self.nonces: dict[Address, int] = {}
        self.blocks: list[Block] = [genesis_block(cfg)]

    @property
    def head(self) -> Block:
        return self.blocks[-1]

    @property
    def height(self) -> int:
        return self.head.height

    def next_nonce(self, caller: Address) -> int:
        return self.nonces.get(caller, 0)

    def seal_block(self, pending: Sequence[Transaction], timestamp: int) -> tuple[Block, list[Receipt]]:
        """Apply ``pending`` in order and append the resulting block."""
        world, nonces = self.world, self.nonces
        receipts = []
        for tx in pending:  # BadNonce propagates, naming the offender
            world, nonces, receipt = apply_transaction(world, nonces, tx)
            receipts.append(receipt)
        block = Block(
            height=self.height + 1,
            prev_hash=self.head.hash(),
            timestamp=timestamp,
            txs=tuple(pending),
            state_root=world.state_root(),
        )
        self.world, self.nonces = world, nonces
        self.blocks.append(block)
        receipts = [replace(r, height=block.height) for r in receipts]
        return block, receipts


# --- verification and replication ---

@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    height: int | None = None
    reason: str | None = None    # BrokenLink | HashMismatch | StateRootMismatch | BadNonce
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(height: int, reason: str, detail: str = "") -> VerifyResult:
    return VerifyResult(False, height, reason, detail)


def verify_chain(cfg: GenesisConfig, lines: Sequence[bytes],
                 collect_receipts: list[Receipt] | None = None,
                 world_out: list[WorldState] | None = None) -> VerifyResult:
    """Recompute the whole chain from genesis and check every invariant.

    Returns the first violation: a non-canonical or unparseable line and a
    stored hash that does not cover the body are both HashMismatch; a bad
    predecessor link or height is BrokenLink; replay disagreements are
    StateRootMismatch or BadNonce.
    """
    if not lines:
        return _fail(0, "BrokenLink", "empty chain: genesis block missing")
    world = genesis_world(cfg)
    nonces: dict[Address, int] = {}
    prev_hash = None
    for height, line in enumerate(lines):
        try:
            block = Block.from_line(bytes(line))
        except (ValueError, KeyError, TypeError) as exc:
            return _fail(height, "HashMismatch", f"bad block line: {exc}")
        if block.height != height:
            return _fail(height, "BrokenLink", f"height field says {block.height}")
        if height == 0:
            if block.prev_hash != ZERO_HASH:
                return _fail(0, "BrokenLink", "genesis prev_hash must be zero")
            if block.txs:
                return _fail(0, "HashMismatch", "genesis block must carry no transactions")
            if block.timestamp != cfg.timestamp:
                return _fail(0, "HashMismatch", "genesis timestamp disagrees with config")
        else:
            if block.prev_hash != prev_hash:
                return _fail(height, "BrokenLink", "prev_hash does not match predecessor")
            try:
                for tx in block.txs:
                    world, nonces, receipt = apply_transaction(world, nonces, tx)
                    if collect_receipts is not None:
                        collect_receipts.append(replace(receipt, height=height))
            except BadNonce as exc:
                return _fail(height, "BadNonce", str(exc))
        if world.state_root() != block.state_root:
            return _fail(height, "StateRootMismatch", "replayed world disagrees with sealed root")
        prev_hash = block.hash()
    if world_out is not None:
        world_out.append(world)
    return VerifyResult(True)


def replay_chain(cfg: GenesisConfig, lines: Sequence[bytes]) -> tuple[Chain, list[Receipt]]:
    """Rebuild a live Chain from a verified block log."""
    receipts: list[Receipt] = []
    result = verify_chain(cfg, lines, collect_receipts=receipts)
    if not result:
        raise CorruptLog(result.height or 0, result.reason or "unknown", result.detail)
    chain = Chain(cfg)
    for line in lines[1:]:
        block = Block.from_line(bytes(line))
        chain.seal_block(block.txs, block.timestamp)
    return chain, receipts


def replicate(cfg: GenesisConfig, lines: Sequence[bytes], k: int,
              overrides: dict[int, GenesisConfig] | None = None,
              apply_overrides: dict[int, "ApplyFn"] | None = None) -> list[bytes]:
    """Replay the chain on ``k`` isolated instances; return each final root.

    Every replica must agree with the sealed state roots block by block;
    the first disagreement raises DivergenceDetected naming the replica and
    height. Fault injection for tests: ``overrides`` substitutes a replica's
    genesis config (detected at height 0), ``apply_overrides`` substitutes
    its transition function (detected at the first block where behavior
    differs, e.g. a node deciding mines with a perturbed delta).
    """
    overrides = overrides or {}
    apply_overrides = apply_overrides or {}
    sealed: list[Block] = [Block.from_line(bytes(line)) for line in lines]
    roots: list[bytes] = []
    for node in range(k):
        node_cfg = overrides.get(node, cfg)
        apply_fn = apply_overrides.get(node, apply_transaction)
        world = genesis_world(node_cfg)
        nonces: dict[Address, int] = {}
        for block in sealed:
            if block.height > 0:
                try:
                    for tx in block.txs:
                        world, nonces, _ = apply_fn(world, nonces, tx)
                except BadNonce:
                    raise DivergenceDetected(node, block.height) from None
            if world.state_root() != block.state_root:
                raise DivergenceDetected(node, block.height)
        roots.append(world.state_root())
    return roots


# --- block-log persistence ---

def load_lines(path: str) -> list[bytes]:
    with open(path, "rb") as fh:
        return [line for line in fh.read().split(b"\n") if line]


def store_lines(path: str, lines: Iterable[bytes]) -> None:
    """Atomically rewrite the block log (write-temp-then-rename, fsynced)."""
    payload = b"\n".join(lines) + b"\n"
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(payload)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)
    dir_fd = os.open(os.path.dirname(os.path.abspath(path)) or ".", os.O_RDONLY)
    try:
        os.fsync(dir_fd)
    finally:
        os.close(dir_fd)


def load_genesis_file(path: str) -> GenesisConfig:
    with open(path, "rb") as fh:
        return GenesisConfig.from_jsonable(canonical.loads(fh.read()))


def store_genesis_file(path: str, cfg: GenesisConfig) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical.dumps(cfg.to_jsonable()) + b"\n")
