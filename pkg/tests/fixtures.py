"""Deterministic fixture chains shared by the chain, node and acceptance tests."""

from __future__ import annotations

import math
from fractions import Fraction

from ljt.chain import (
    Chain,
    GenesisConfig,
    Transaction,
    access_call,
    buy_call,
    faucet_call,
    mine_call,
    rate_call,
    transfer_call,
)
from ljt.contract import ContractParams, mining_accepts
from ljt.lj_energy import ClusterConfig, calc_energy

from conftest import ALICE, BOB, CAROL, OWNER

R_MIN_X = 1_122_462  # 2**(1/6) sigma in micro-sigma


def chain_config(n: int) -> ClusterConfig:
    """n particles on a line at the pair-minimum spacing; beats every genesis
    lattice by far more than 3%."""
    return ClusterConfig(tuple(
        c for i in range(n) for c in (i * R_MIN_X, 0, 0)))


def probe_triangle() -> ClusterConfig:
    """Equilateral triangle, edge 1.68 sigma: improves the n=3 genesis energy
    by ~17%, inside (3%, 50%) so a delta-perturbed replica decides it
    differently."""
    e = 1_680_000
    return ClusterConfig((0, 0, 0, e, 0, 0, e // 2, round(e * math.sqrt(3) / 2), 0))


class FixtureInfo:
    def __init__(self, cfg: GenesisConfig, chain: Chain, probe_height: int,
                 accepted_mines: int):
        self.cfg = cfg
        self.chain = chain
        self.lines = [b.to_line() for b in chain.blocks]
        self.probe_height = probe_height
        self.accepted_mines = accepted_mines


def build_fixture(total_blocks: int = 50) -> FixtureInfo:
    """A 50-block chain exercising every call type, including failures.

    Block at ``probe_height`` holds the chain's first mine, whose improvement
    sits between 3% and 50%: replicas running a perturbed delta diverge
    exactly there.
    """
    cfg = GenesisConfig(
        params=ContractParams(owner=OWNER),
        allocations={ALICE: 20 * 10**9, BOB: 5 * 10**9},
    )
    chain = Chain(cfg)
    accepted = 0

    def seal(*txs: tuple) -> None:
        built = [Transaction(caller, chain.next_nonce(caller), call)
                 for caller, call in txs]
        # distinct callers per block keep the interim nonce math trivial
        assert len({caller for caller, _ in txs}) == len(txs)
        chain.seal_block(built, 1000 + chain.height + 1)

    # funding and market setup
    seal((CAROL, faucet_call(2 * 10**9)))
    seal((OWNER, rate_call(120)), (ALICE, rate_call(200)))
    seal((ALICE, buy_call(OWNER, 2 * 10**9)))   # 240 LJT at rate 120

    # first mine: the delta-sensitive probe
    probe = probe_triangle()
    stored = chain.world.contract.energy_db[3]
    energy = calc_energy(probe)
    assert mining_accepts(cfg.params.delta, stored, energy)
    assert not mining_accepts(Fraction(1, 2), stored, energy)
    seal((BOB, mine_call(probe.coords)))
    probe_height = chain.height
    accepted += 1

    # a run of real improvements, then duplicate resubmissions (rejected)
    for n in (2, 3, 4, 5, 6):
        seal((ALICE, mine_call(chain_config(n).coords)))
        accepted += 1
    seal((BOB, mine_call(chain_config(4).coords)))      # rejected: identical
    seal((CAROL, mine_call(chain_config(2).coords)))    # rejected: identical

    # access fees, trades, transfers, and sealed failures
    seal((CAROL, buy_call(ALICE, 10**8)))               # 20 LJT at rate 200
    seal((CAROL, access_call(3)), (BOB, access_call(2)))
    seal((ALICE, transfer_call(BOB, 25)))
    seal((CAROL, transfer_call(BOB, 10**6)))            # fails: InsufficientBalance
    seal((CAROL, buy_call(OWNER, 10)))                  # fails: DustPurchase
    seal((BOB, access_call(2)))                         # fails: AlreadyGranted
    seal((BOB, mine_call((0, 0, 0, 0, 0, 0))))          # fails: CoincidentParticles

    # pad with empty blocks
    while chain.height < total_blocks - 1:
        chain.seal_block([], 1000 + chain.height + 1)
    assert len(chain.blocks) == total_blocks
    return FixtureInfo(cfg, chain, probe_height, accepted)
