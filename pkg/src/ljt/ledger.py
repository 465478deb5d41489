"""Token and native-currency ledger (ERC-20 subset semantics).

LJT has zero decimals: balances are whole tokens. The simulated native
currency uses 1e9 base units per coin. All amounts are checked uint64; an
overflow is an error, never a wraparound.

LedgerState is immutable in use: operations return a new state and never
mutate their input, which gives rejected transactions snapshot semantics for
free. Maps never store zero balances, so equal states serialize to equal
bytes.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field

from .canonical import hex_to_bytes, require_uint
from .errors import (
    InsufficientBalance,
    InsufficientNative,
    NativeOverflow,
    SupplyOverflow,
)

UINT64_MAX = 2**64 - 1
NATIVE_UNITS_PER_COIN = 10**9


@dataclass(frozen=True, order=True)
class Address:
    """20-byte account identifier, rendered as 0x-prefixed lowercase hex."""

    raw: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.raw, bytes) or len(self.raw) != 20:
            raise ValueError("address must be exactly 20 bytes")

    def __str__(self) -> str:
        return "0x" + self.raw.hex()

    @classmethod
    def parse(cls, text: str) -> "Address":
        return cls(hex_to_bytes(text, length=20))

    @classmethod
    def random(cls) -> "Address":
        return cls(secrets.token_bytes(20))


def check_token_amount(value: int, what: str = "amount") -> int:
    return require_uint(value, bits=64, what=what)


@dataclass(frozen=True)
class LedgerState:
    """LJT balances, native balances and the LJT total supply."""

    ljt_balances: dict[Address, int] = field(default_factory=dict)
    native_balances: dict[Address, int] = field(default_factory=dict)
    total_supply: int = 0

    def balance_of(self, addr: Address) -> int:
        return self.ljt_balances.get(addr, 0)

    def native_of(self, addr: Address) -> int:
        return self.native_balances.get(addr, 0)

    def _with_ljt(self, balances: dict[Address, int], supply: int | None = None) -> "LedgerState":
        return LedgerState(
            ljt_balances=balances,
            native_balances=self.native_balances,
            total_supply=self.total_supply if supply is None else supply,
        )


def _moved(balances: dict[Address, int], src: Address, dst: Address, amount: int,
           insufficient: type[Exception]) -> dict[Address, int]:
    have = balances.get(src, 0)
    if have < amount:
        raise insufficient(f"{src} holds {have}, needs {amount}")
    out = dict(balances)
    if src == dst or amount == 0:
        return out
    remaining = have - amount
    if remaining:
        out[src] = remaining
    else:
        del out[src]
    out[dst] = out.get(dst, 0) + amount
    return out


def transfer(state: LedgerState, src: Address, dst: Address, amount: int) -> LedgerState:
    """Move LJT between accounts; a self-transfer still validates the balance."""
    check_token_amount(amount)
    return state._with_ljt(_moved(state.ljt_balances, src, dst, amount, InsufficientBalance))


def mint(state: LedgerState, to: Address, amount: int) -> LedgerState:
    """Create new LJT; the only supply-increasing operation."""
    check_token_amount(amount)
    supply = state.total_supply + amount
    if supply > UINT64_MAX:
        raise SupplyOverflow(f"total supply {supply} exceeds uint64")
    balances = dict(state.ljt_balances)
    if amount:
        balances[to] = balances.get(to, 0) + amount
    return state._with_ljt(balances, supply)


def native_transfer(state: LedgerState, src: Address, dst: Address, value: int) -> LedgerState:
    """Move native base units between accounts."""
    check_token_amount(value, "native value")
    return LedgerState(
        ljt_balances=state.ljt_balances,
        native_balances=_moved(state.native_balances, src, dst, value, InsufficientNative),
        total_supply=state.total_supply,
    )


def native_mint(state: LedgerState, to: Address, value: int) -> LedgerState:
    """Faucet credit of native currency (dev chains and genesis allocations)."""
    check_token_amount(value, "native value")
    balance = state.native_balances.get(to, 0) + value
    if balance > UINT64_MAX:
        raise NativeOverflow(f"native balance {balance} exceeds uint64")
    balances = dict(state.native_balances)
    if value:
        balances[to] = balance
    return LedgerState(
        ljt_balances=state.ljt_balances,
        native_balances=balances,
        total_supply=state.total_supply,
    )


def ledger_to_jsonable(state: LedgerState) -> dict:
    return {
        "ljt": {str(a): v for a, v in state.ljt_balances.items()},
        "native": {str(a): v for a, v in state.native_balances.items()},
        "total_supply": state.total_supply,
    }


def ledger_from_jsonable(obj: dict) -> LedgerState:
    if set(obj) != {"ljt", "native", "total_supply"}:
        raise ValueError(f"bad ledger keys: {sorted(obj)}")
    ljt = {Address.parse(a): require_uint(v, what="ljt balance") for a, v in obj["ljt"].items()}
    native = {Address.parse(a): require_uint(v, what="native balance")
              for a, v in obj["native"].items()}
    if any(v == 0 for v in ljt.values()) or any(v == 0 for v in native.values()):
        raise ValueError("zero balances must be absent")
    return LedgerState(
        ljt_balances=ljt,
        native_balances=native,
        total_supply=require_uint(obj["total_supply"], what="total supply"),
    )
