"""The LJT smart-contract state machine.

Rules implemented here:

- mining: a submitted configuration for cluster size n is accepted iff its
  energy U satisfies U < E_stored - delta*|E_stored|, checked in exact
  rational micro-epsilon arithmetic; the miner is rewarded rho freshly
  minted tokens and becomes the contributor of record for n
- data access: one token moves from the caller to the contributor of record;
  grants are perpetual per (address, n) and expose the current data
- token market: sellers set a tokens-per-coin exchange rate; the owner's
  stored rate is floored at owner_min_rate (greed limiting); buyers pay
  native currency and receive floor(value * rate / 1e9) tokens
- leaderboards: top-10 holders by balance, top-10 sellers by effective rate

State transitions are pure: every operation returns fresh state objects and
raises a ContractError subclass on failure, leaving inputs untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .canonical import require_uint
from .errors import (
    AccessDenied,
    AlreadyGranted,
    BadClusterSize,
    DustPurchase,
    InsufficientBalance,
    InsufficientNative,
    SellerInsufficientTokens,
    ZeroRate,
)
from .lattice import simple_cubic
from .ledger import (
    Address,
    LedgerState,
    NATIVE_UNITS_PER_COIN,
    mint,
    native_transfer,
    transfer,
)
from .lj_energy import COORD_SCALE, MAX_PARTICLES, MIN_PARTICLES, ClusterConfig, calc_energy

ACCESS_FEE = 1  # LJT per gain_access call


@dataclass(frozen=True)
class ContractParams:
    """Genesis-time contract parameters."""

    owner: Address
    delta: Fraction = Fraction(3, 100)   # required relative energy improvement
    rho: int = 10                        # LJT reward per accepted mine
    owner_min_rate: int = 100            # greed-limiting floor, LJT per coin
    initial_owner_grant: int = 1000      # LJT minted to the owner at genesis

    def __post_init__(self) -> None:
        if not (0 < self.delta < 1):
            raise ValueError("delta must lie strictly between 0 and 1")
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.owner_min_rate < 1:
            raise ValueError("owner_min_rate must be at least 1")
        require_uint(self.rho, what="rho")
        require_uint(self.owner_min_rate, what="owner_min_rate")
        require_uint(self.initial_owner_grant, what="initial_owner_grant")


@dataclass(frozen=True)
class ContractState:
    """On-chain contract storage; the three databases share the key set 2..50."""

    energy_db: dict[int, int]
    position_db: dict[int, ClusterConfig]
    contributor_db: dict[int, Address]
    access_db: frozenset[tuple[Address, int]]
    rates: dict[Address, int]
    params: ContractParams


@dataclass(frozen=True)
class MineResult:
    accepted: bool
    n: int
    energy: int
    previous_energy: int
    reward: int

    def to_jsonable(self) -> dict:
        return {
            "accepted": self.accepted,
            "energy": self.energy,
            "n": self.n,
            "previous_energy": self.previous_energy,
            "reward": self.reward,
        }


def _check_cluster_size(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or not (MIN_PARTICLES <= n <= MAX_PARTICLES):
        raise BadClusterSize(f"cluster size {n!r} outside [{MIN_PARTICLES}, {MAX_PARTICLES}]")
    return n


def mining_accepts(delta: Fraction, stored: int, candidate: int) -> bool:
    """Exact acceptance predicate: candidate < stored - delta*|stored|."""
    return Fraction(candidate) < Fraction(stored) - delta * abs(Fraction(stored))


def lattice_config(n: int, spacing_micro: int = COORD_SCALE) -> ClusterConfig:
    """Simple cubic seed structure for n particles on the fixed-point grid."""
    sites = simple_cubic(n, 1.0)
    return ClusterConfig(tuple(round(v) * spacing_micro for v in sites))


def genesis(params: ContractParams) -> tuple[ContractState, LedgerState]:
    """Deploy the contract: cubic seed data for every n, owner grant minted."""
    energy_db: dict[int, int] = {}
    position_db: dict[int, ClusterConfig] = {}
    contributor_db: dict[int, Address] = {}
    for n in range(MIN_PARTICLES, MAX_PARTICLES + 1):
        config = lattice_config(n)
        position_db[n] = config
        energy_db[n] = calc_energy(config)
        contributor_db[n] = params.owner
    state = ContractState(
        energy_db=energy_db,
        position_db=position_db,
        contributor_db=contributor_db,
        access_db=frozenset(),
        rates={},
        params=params,
    )
    ledger = mint(LedgerState(), params.owner, params.initial_owner_grant)
    return state, ledger


def mine_token(state: ContractState, ledger: LedgerState, caller: Address,
               pos: ClusterConfig) -> tuple[ContractState, LedgerState, MineResult]:
    """Evaluate a submission; update the databases and reward on acceptance."""
    n = pos.n
    energy = calc_energy(pos)
    stored = state.energy_db[n]
    if not mining_accepts(state.params.delta, stored, energy):
        return state, ledger, MineResult(False, n, energy, stored, 0)
    new_state = replace(
        state,
        energy_db={**state.energy_db, n: energy},
        position_db={**state.position_db, n: pos},
        contributor_db={**state.contributor_db, n: caller},
    )
    new_ledger = mint(ledger, caller, state.params.rho)
    return new_state, new_ledger, MineResult(True, n, energy, stored, state.params.rho)


def gain_access(state: ContractState, ledger: LedgerState, caller: Address,
                n: int) -> tuple[ContractState, LedgerState]:
    """Charge one token (paid to the contributor of record) for access to n."""
    _check_cluster_size(n)
    if (caller, n) in state.access_db:
        raise AlreadyGranted(f"{caller} already holds access to n={n}")
    if ledger.balance_of(caller) < ACCESS_FEE:
        raise InsufficientBalance(f"{caller} cannot pay the {ACCESS_FEE} LJT access fee")
    new_ledger = transfer(ledger, caller, state.contributor_db[n], ACCESS_FEE)
    new_state = replace(state, access_db=state.access_db | {(caller, n)})
    return new_state, new_ledger


def has_access(state: ContractState, caller: Address, n: int) -> bool:
    return (
        (caller, n) in state.access_db
        or state.contributor_db.get(n) == caller
        or caller == state.params.owner
    )


def view_data(state: ContractState, caller: Address, n: int) -> tuple[int, ClusterConfig]:
    """Read the stored energy and structure; free for grantees, contributor, owner."""
    _check_cluster_size(n)
    if not has_access(state, caller, n):
        raise AccessDenied(f"{caller} has no access to n={n}")
    return state.energy_db[n], state.position_db[n]


def set_exchange_rate(state: ContractState, caller: Address, rate: int) -> ContractState:
    """Publish a tokens-per-coin rate; the owner's rate is floored at R_min."""
    require_uint(rate, what="exchange rate")
    if rate < 1:
        raise ZeroRate("exchange rate must be at least 1 token per coin")
    if caller == state.params.owner:
        rate = max(rate, state.params.owner_min_rate)
    return replace(state, rates={**state.rates, caller: rate})


def effective_rate(state: ContractState, seller: Address) -> int:
    """The seller's published rate, or the owner's minimum rate if unset."""
    return state.rates.get(seller, state.params.owner_min_rate)


def buy_token(state: ContractState, ledger: LedgerState, buyer: Address,
              seller: Address, value: int) -> LedgerState:
    """Swap ``value`` native base units for floor(value * rate / 1e9) LJT."""
    require_uint(value, what="native value")
    if ledger.native_of(buyer) < value:
        raise InsufficientNative(f"{buyer} holds {ledger.native_of(buyer)}, needs {value}")
    tokens = value * effective_rate(state, seller) // NATIVE_UNITS_PER_COIN
    if tokens < 1:
        raise DustPurchase(f"{value} base units buy 0 tokens at this rate")
    if ledger.balance_of(seller) < tokens:
        raise SellerInsufficientTokens(f"{seller} holds {ledger.balance_of(seller)}, needs {tokens}")
    ledger = native_transfer(ledger, buyer, seller, value)
    return transfer(ledger, seller, buyer, tokens)


def view_top_balance(ledger: LedgerState, limit: int = 10) -> list[tuple[Address, int]]:
    """Holders ordered by balance descending, ties by address; zeros excluded."""
    entries = sorted(ledger.ljt_balances.items(), key=lambda kv: (-kv[1], kv[0]))
    return entries[:limit]


def view_top_rate(state: ContractState, ledger: LedgerState,
                  limit: int = 10) -> list[tuple[Address, int]]:
    """Token holders as sellers, best (highest) effective rate first."""
    sellers = [(addr, effective_rate(state, addr))
               for addr, bal in ledger.ljt_balances.items() if bal >= 1]
    sellers.sort(key=lambda kv: (-kv[1], kv[0]))
    return sellers[:limit]


# --- serialization ---

def params_to_jsonable(params: ContractParams) -> dict:
    return {
        "delta_den": params.delta.denominator,
        "delta_num": params.delta.numerator,
        "initial_owner_grant": params.initial_owner_grant,
        "owner": str(params.owner),
        "owner_min_rate": params.owner_min_rate,
        "rho": params.rho,
    }


def params_from_jsonable(obj: dict) -> ContractParams:
    expected = {"delta_den", "delta_num", "initial_owner_grant", "owner", "owner_min_rate", "rho"}
    if set(obj) != expected:
        raise ValueError(f"bad params keys: {sorted(obj)}")
    return ContractParams(
        owner=Address.parse(obj["owner"]),
        delta=Fraction(require_uint(obj["delta_num"], what="delta_num"),
                       require_uint(obj["delta_den"], what="delta_den")),
        rho=require_uint(obj["rho"], what="rho"),
        owner_min_rate=require_uint(obj["owner_min_rate"], what="owner_min_rate"),
        initial_owner_grant=require_uint(obj["initial_owner_grant"], what="initial_owner_grant"),
    )


def contract_to_jsonable(state: ContractState) -> dict:
    return {
        "access": [[str(a), n] for a, n in sorted(state.access_db)],
        "contributors": [[n, str(a)] for n, a in sorted(state.contributor_db.items())],
        "energies": [[n, e] for n, e in sorted(state.energy_db.items())],
        "params": params_to_jsonable(state.params),
        "positions": [[n, list(c.coords)] for n, c in sorted(state.position_db.items())],
        "rates": {str(a): r for a, r in sorted(state.rates.items())},
    }


def contract_from_jsonable(obj: dict) -> ContractState:
    expected = {"access", "contributors", "energies", "params", "positions", "rates"}
    if set(obj) != expected:
        raise ValueError(f"bad contract keys: {sorted(obj)}")
    energies = {_check_cluster_size(n): e for n, e in obj["energies"]}
    positions = {_check_cluster_size(n): ClusterConfig(tuple(c)) for n, c in obj["positions"]}
    contributors = {_check_cluster_size(n): Address.parse(a) for n, a in obj["contributors"]}
    keys = set(range(MIN_PARTICLES, MAX_PARTICLES + 1))
    if not (set(energies) == set(positions) == set(contributors) == keys):
        raise ValueError("databases must cover exactly the sizes 2..50")
    return ContractState(
        energy_db=energies,
        position_db=positions,
        contributor_db=contributors,
        access_db=frozenset((Address.parse(a), _check_cluster_size(n)) for a, n in obj["access"]),
        rates={Address.parse(a): require_uint(r, what="rate") for a, r in obj["rates"].items()},
        params=params_from_jsonable(obj["params"]),
    )
