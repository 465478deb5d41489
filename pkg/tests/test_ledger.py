from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from ljt.errors import InsufficientBalance, InsufficientNative, SupplyOverflow
from ljt.ledger import (
    Address,
    LedgerState,
    UINT64_MAX,
    ledger_from_jsonable,
    ledger_to_jsonable,
    mint,
    native_mint,
    native_transfer,
    transfer,
)

A = Address.parse("0x" + "aa" * 20)
B = Address.parse("0x" + "bb" * 20)
C = Address.parse("0x" + "cc" * 20)
ADDRS = [A, B, C]


class TestAddress:
    def test_render_round_trip(self):
        addr = Address.random()
        assert Address.parse(str(addr)) == addr
        assert str(addr).startswith("0x") and len(str(addr)) == 42

    def test_rejects_bad_hex(self):
        with pytest.raises(ValueError):
            Address.parse("0x" + "AA" * 20)  # uppercase is non-canonical
        with pytest.raises(ValueError):
            Address.parse("0x" + "aa" * 19)
        with pytest.raises(ValueError):
            Address.parse("aa" * 20)

    def test_bytes_length_enforced(self):
        with pytest.raises(ValueError):
            Address(b"\x01" * 19)


class TestOps:
    def test_fresh_ledger_balance_zero(self):
        assert LedgerState().balance_of(A) == 0

    def test_mint_then_balance(self):
        state = mint(LedgerState(), A, 10)
        assert state.balance_of(A) == 10
        assert state.total_supply == 10

    def test_mint_twice_sums(self):
        state = mint(mint(LedgerState(), A, 10), B, 10)
        assert state.total_supply == 20

    def test_mint_overflow(self):
        state = mint(LedgerState(), A, UINT64_MAX)
        with pytest.raises(SupplyOverflow):
            mint(state, B, 1)

    def test_transfer(self):
        state = transfer(mint(LedgerState(), A, 10), A, B, 4)
        assert state.balance_of(A) == 6
        assert state.balance_of(B) == 4
        assert state.total_supply == 10

    def test_transfer_all_clears_entry(self):
        state = transfer(mint(LedgerState(), A, 10), A, B, 10)
        assert state.balance_of(A) == 0
        assert A not in state.ljt_balances  # zero balances are never stored
        assert state.balance_of(B) == 10

    def test_transfer_insufficient(self):
        state = mint(LedgerState(), A, 5)
        with pytest.raises(InsufficientBalance):
            transfer(state, A, B, 6)

    def test_self_transfer_identity(self):
        state = mint(LedgerState(), A, 5)
        out = transfer(state, A, A, 5)
        assert out.balance_of(A) == 5
        with pytest.raises(InsufficientBalance):
            transfer(state, A, A, 6)  # still validates

    def test_inputs_never_mutated(self):
        state = mint(LedgerState(), A, 10)
        transfer(state, A, B, 4)
        assert state.balance_of(A) == 10 and state.balance_of(B) == 0

    def test_native_transfer(self):
        state = native_mint(LedgerState(), A, 10**9)
        out = native_transfer(state, A, B, 5 * 10**8)
        assert out.native_of(A) == 5 * 10**8
        assert out.native_of(B) == 5 * 10**8

    def test_native_insufficient(self):
        state = native_mint(LedgerState(), A, 10)
        with pytest.raises(InsufficientNative):
            native_transfer(state, A, B, 11)

    def test_native_zero_noop(self):
        state = native_mint(LedgerState(), A, 10)
        out = native_transfer(state, A, B, 0)
        assert out.native_of(B) == 0


op_strategy = st.lists(
    st.one_of(
        st.tuples(st.just("mint"), st.sampled_from(range(3)), st.integers(0, 1000)),
        st.tuples(st.just("transfer"), st.sampled_from(range(3)),
                  st.sampled_from(range(3)), st.integers(0, 1500)),
        st.tuples(st.just("nmint"), st.sampled_from(range(3)), st.integers(0, 1000)),
        st.tuples(st.just("ntransfer"), st.sampled_from(range(3)),
                  st.sampled_from(range(3)), st.integers(0, 1500)),
    ),
    max_size=40,
)


@given(op_strategy)
def test_conservation_against_reference(ops):
    """Random op sequences preserve per-asset sums; results match a plain
    dict-of-bigints reference ledger that has no uint64 machinery at all."""
    state = LedgerState()
    ref_ljt = {a: 0 for a in ADDRS}
    ref_native = {a: 0 for a in ADDRS}
    ref_supply = 0
    for op in ops:
        try:
            if op[0] == "mint":
                state = mint(state, ADDRS[op[1]], op[2])
                ref_ljt[ADDRS[op[1]]] += op[2]
                ref_supply += op[2]
            elif op[0] == "transfer":
                _, i, j, amount = op
                state = transfer(state, ADDRS[i], ADDRS[j], amount)
                assert ref_ljt[ADDRS[i]] >= amount
                ref_ljt[ADDRS[i]] -= amount
                ref_ljt[ADDRS[j]] += amount
            elif op[0] == "nmint":
                state = native_mint(state, ADDRS[op[1]], op[2])
                ref_native[ADDRS[op[1]]] += op[2]
            else:
                _, i, j, value = op
                state = native_transfer(state, ADDRS[i], ADDRS[j], value)
                assert ref_native[ADDRS[i]] >= value
                ref_native[ADDRS[i]] -= value
                ref_native[ADDRS[j]] += value
        except (InsufficientBalance, InsufficientNative):
            continue  # reference state intentionally untouched
    for a in ADDRS:
        assert state.balance_of(a) == ref_ljt[a] >= 0
        assert state.native_of(a) == ref_native[a] >= 0
    assert state.total_supply == ref_supply == sum(ref_ljt.values())
    assert sum(state.ljt_balances.values()) == state.total_supply


@given(op_strategy)
def test_serialization_round_trip(ops):
    state = LedgerState()
    for op in ops:
        try:
            if op[0] == "mint":
                state = mint(state, ADDRS[op[1]], op[2])
            elif op[0] == "transfer":
                state = transfer(state, ADDRS[op[1]], ADDRS[op[2]], op[3])
            elif op[0] == "nmint":
                state = native_mint(state, ADDRS[op[1]], op[2])
            else:
                state = native_transfer(state, ADDRS[op[1]], ADDRS[op[2]], op[3])
        except (InsufficientBalance, InsufficientNative):
            continue
    assert ledger_from_jsonable(ledger_to_jsonable(state)) == state
