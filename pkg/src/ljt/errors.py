"""Exception hierarchy for the LJT simulator.

Contract-level errors (everything deriving from ContractError) are recoverable
facts recorded in transaction receipts; the error class name doubles as the
on-receipt error code.
"""

from __future__ import annotations


class LjtError(Exception):
    """Base class for all LJT domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- cluster configuration / energy kernel ---

class ConfigError(LjtError):
    """Invalid cluster configuration."""


class BadLength(ConfigError):
    """Coordinate list is not 3*n, or n lies outside [2, 50]."""


class CoordOutOfRange(ConfigError):
    """A fixed-point coordinate exceeds the 100 sigma ceiling (or uint64)."""


class NegativeCoordinate(ConfigError):
    """Fixed-point coordinates are unsigned; a negative value was supplied."""


class CoincidentParticles(ConfigError):
    """Two particles share identical fixed-point coordinates (r_ij = 0)."""


class ParseError(LjtError):
    """Malformed positions CSV (wrong column count, non-numeric field)."""


# --- ledger / contract ---

class ContractError(LjtError):
    """Base for errors raised by contract calls; recorded in receipts."""


class InsufficientBalance(ContractError):
    pass


class SupplyOverflow(ContractError):
    pass


class InsufficientNative(ContractError):
    pass


class NativeOverflow(ContractError):
    pass


class AlreadyGranted(ContractError):
    pass


class BadClusterSize(ContractError):
    pass


class AccessDenied(ContractError):
    pass


class ZeroRate(ContractError):
    pass


class DustPurchase(ContractError):
    pass


class SellerInsufficientTokens(ContractError):
    pass


# --- chain ---

class ChainError(LjtError):
    pass


class BadNonce(ChainError):
    """Transaction nonce does not match the caller's transaction count."""


class CorruptLog(ChainError):
    """Block log failed verification at startup."""

    def __init__(self, height: int, reason: str, detail: str = ""):
        self.height = height
        self.reason = reason
        self.detail = detail
        super().__init__(f"block log corrupt at height {height}: {reason}"
                         + (f" ({detail})" if detail else ""))


class DivergenceDetected(ChainError):
    """A replica's replayed state diverged from the sealed chain."""

    def __init__(self, node: int, height: int):
        self.node = node
        self.height = height
        super().__init__(f"replica {node} diverged at height {height}")


# --- miner ---

class NumericalBlowup(LjtError):
    """Non-finite energy encountered during local minimization."""
