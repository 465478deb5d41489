from __future__ import annotations

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

from ljt.chain import GenesisConfig  # noqa: E402
from ljt.contract import ContractParams  # noqa: E402
from ljt.ledger import Address  # noqa: E402

OWNER = Address.parse("0x" + "01" * 20)
ALICE = Address.parse("0x" + "aa" * 20)
BOB = Address.parse("0x" + "bb" * 20)
CAROL = Address.parse("0x" + "cc" * 20)


@pytest.fixture
def owner() -> Address:
    return OWNER


@pytest.fixture
def alice() -> Address:
    return ALICE


@pytest.fixture
def bob() -> Address:
    return BOB


def make_genesis(allocations: dict[Address, int] | None = None,
                 owner_grant: int = 1000, **param_kwargs) -> GenesisConfig:
    params = ContractParams(owner=OWNER, initial_owner_grant=owner_grant, **param_kwargs)
    return GenesisConfig(params=params, allocations=allocations or {})


@pytest.fixture
def genesis_cfg() -> GenesisConfig:
    return make_genesis()


@pytest.fixture
def node_factory(tmp_path):
    """Start in-process nodes on ephemeral ports; stops them all at teardown."""
    from ljt.chain import store_genesis_file
    from ljt.node import Node, NodeConfig

    started = []
    counter = [0]

    def factory(genesis=None, subdir=None, **cfg_kwargs):
        counter[0] += 1
        base = tmp_path / (subdir or f"node{counter[0]}")
        base.mkdir(exist_ok=True)
        genesis_path = str(base / "genesis.json")
        if not os.path.exists(genesis_path):
            store_genesis_file(genesis_path, genesis or make_genesis())
        cfg = NodeConfig(listen="127.0.0.1:0", block_log=str(base / "blocks.log"),
                         genesis=genesis_path, **cfg_kwargs)
        node = Node(cfg)
        node.start()
        started.append(node)
        return node, f"http://127.0.0.1:{node.port}"

    yield factory
    for node in started:
        node.stop()


# expensive basin-hopping runs, shared across test modules


@pytest.fixture(scope="session")
def lj7_candidate():
    from ljt.miner import OptimizerConfig, basin_hop

    return basin_hop(7, OptimizerConfig(seed=1, hops=500, step=0.35, temperature=0.8))


@pytest.fixture(scope="session")
def lj13_candidate():
    from ljt.miner import OptimizerConfig, basin_hop

    return basin_hop(13, OptimizerConfig(seed=1, hops=2000, step=0.25, temperature=0.8))
