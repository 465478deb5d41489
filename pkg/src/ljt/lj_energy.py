"""Deterministic Lennard-Jones energy kernel over fixed-point configurations.

Pair potential: U(r) = 4*eps*[(sigma/r)**12 - (sigma/r)**6], eps = sigma = 1
for the deployed contract. Coordinates live on a micro-sigma grid (1e-6 sigma
per unit), energies are reported in micro-epsilon.

``calc_energy`` is consensus-critical: every node must produce bit-identical
results. The evaluation contract is therefore pinned precisely:

1. decode each coordinate to binary64 as ``value / 1e6`` (the correctly
   rounded value of value*10**-6; 1e6 is exactly representable),
2. accumulate pair terms in strictly ascending (i, then j) order with the
   expression order written below - no reassociation, no fused multiply-add,
3. scale by 1e6 and round half-even to an integer, saturating at 2**63 - 1.

CPython evaluates float expressions left-to-right without contraction, which
satisfies (2) by construction. Do not port this kernel to a vectorizing or
FMA-contracting backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation, ROUND_HALF_EVEN
from typing import Iterable, Sequence

from .errors import (
    BadLength,
    CoincidentParticles,
    CoordOutOfRange,
    NegativeCoordinate,
    ParseError,
)

COORD_SCALE = 10**6          # micro-sigma per sigma
COORD_MAX = 10**8            # 100 sigma ceiling
ENERGY_SCALE = 10**6         # micro-epsilon per epsilon
ENERGY_SAT = 2**63 - 1       # |energy| saturates here
MIN_PARTICLES = 2
MAX_PARTICLES = 50


@dataclass(frozen=True)
class LjParams:
    """Energy and length scales. The deployed contract pins both to 1."""

    epsilon: float = 1.0
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if not (self.epsilon > 0 and self.sigma > 0):
            raise ValueError("epsilon and sigma must be strictly positive")


@dataclass(frozen=True)
class ClusterConfig:
    """Fixed-point particle positions: flat (x0, y0, z0, x1, ...) micro-sigma."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) % 3 != 0:
            raise BadLength(f"coordinate count {len(coords)} not divisible by 3")
        n = len(coords) // 3
        if not (MIN_PARTICLES <= n <= MAX_PARTICLES):
            raise BadLength(f"cluster size {n} outside [{MIN_PARTICLES}, {MAX_PARTICLES}]")
        for c in coords:
            if not isinstance(c, int) or isinstance(c, bool):
                raise CoordOutOfRange(f"coordinate {c!r} is not an integer")
            if c < 0:
                raise NegativeCoordinate(f"coordinate {c} is negative")
            if c > COORD_MAX:
                raise CoordOutOfRange(f"coordinate {c} exceeds {COORD_MAX}")
        seen = set()
        for i in range(n):
            p = coords[3 * i:3 * i + 3]
            if p in seen:
                raise CoincidentParticles(f"duplicate particle at {p}")
            seen.add(p)

    @property
    def n(self) -> int:
        return len(self.coords) // 3

    def decode(self) -> list[float]:
        """Binary64 positions in sigma units (the pinned consensus decode)."""
        return [c / 1e6 for c in self.coords]


def _to_micro_eps(value: float) -> int:
    # half-even rounding with symmetric saturation at 2**63 - 1
    scaled = value * 1e6
    if scaled >= 9.223372036854776e18:
        return ENERGY_SAT
    if scaled <= -9.223372036854776e18:
        return -ENERGY_SAT
    out = round(scaled)
    if out > ENERGY_SAT:
        return ENERGY_SAT
    if out < -ENERGY_SAT:
        return -ENERGY_SAT
    return out


def calc_energy(config: ClusterConfig) -> int:
    """Total LJ energy of ``config`` in micro-epsilon (consensus kernel)."""
    xs = config.decode()
    n = config.n
    total = 0.0
    for i in range(n - 1):
        xi = xs[3 * i]
        yi = xs[3 * i + 1]
        zi = xs[3 * i + 2]
        for j in range(i + 1, n):
            dx = xi - xs[3 * j]
            dy = yi - xs[3 * j + 1]
            dz = zi - xs[3 * j + 2]
            r2 = dx * dx + dy * dy + dz * dz
            inv2 = 1.0 / r2
            inv6 = inv2 * inv2 * inv2
            total += 4.0 * (inv6 * inv6 - inv6)
    return _to_micro_eps(total)


def energy_value(positions: Sequence[float]) -> float:
    """Real-valued LJ energy of real-valued positions (no rounding contract)."""
    n = len(positions) // 3
    total = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            dx = positions[3 * i] - positions[3 * j]
            dy = positions[3 * i + 1] - positions[3 * j + 1]
            dz = positions[3 * i + 2] - positions[3 * j + 2]
            r2 = dx * dx + dy * dy + dz * dz
            inv6 = (1.0 / r2) ** 3
            total += 4.0 * (inv6 * inv6 - inv6)
    return total


def gradient_value(positions: Sequence[float]) -> list[float]:
    """Analytic gradient of :func:`energy_value` at real-valued positions.

    Component for particle i along x:
    sum over j != i of 24*[(sigma/r)**6 - 2*(sigma/r)**12] * (xi - xj) / r**2.
    """
    n = len(positions) // 3
    grad = [0.0] * (3 * n)
    for i in range(n - 1):
        for j in range(i + 1, n):
            dx = positions[3 * i] - positions[3 * j]
            dy = positions[3 * i + 1] - positions[3 * j + 1]
            dz = positions[3 * i + 2] - positions[3 * j + 2]
            r2 = dx * dx + dy * dy + dz * dz
            inv2 = 1.0 / r2
            inv6 = inv2 * inv2 * inv2
            c = 24.0 * (inv6 - 2.0 * inv6 * inv6) * inv2
            grad[3 * i] += c * dx
            grad[3 * i + 1] += c * dy
            grad[3 * i + 2] += c * dz
            grad[3 * j] -= c * dx
            grad[3 * j + 1] -= c * dy
            grad[3 * j + 2] -= c * dz
    return grad


def gradient(config: ClusterConfig) -> list[float]:
    """Analytic energy gradient of a fixed-point configuration (off-chain use)."""
    return gradient_value(config.decode())


def parse_positions_csv(text: str | bytes) -> ClusterConfig:
    """Parse the position CSV format: one ``x,y,z`` line per particle, sigma units.

    Values are scaled by 1e6 and rounded half-even onto the micro-sigma grid.
    Raises ParseError with a 1-based line number for malformed rows.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    coords: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 3:
            raise ParseError(f"line {lineno}: expected 3 fields, got {len(fields)}")
        for field in fields:
            try:
                value = Decimal(field.strip())
            except InvalidOperation:
                raise ParseError(f"line {lineno}: non-numeric field {field.strip()!r}") from None
            if not value.is_finite():
                raise ParseError(f"line {lineno}: non-finite field {field.strip()!r}")
            fx = int((value * COORD_SCALE).quantize(Decimal(1), rounding=ROUND_HALF_EVEN))
            if fx < 0:
                raise NegativeCoordinate(f"line {lineno}: coordinate {field.strip()} is negative")
            coords.append(fx)
    return ClusterConfig(tuple(coords))


def format_positions_csv(coords: Iterable[int]) -> str:
    """Render fixed-point coordinates back to the CSV format (sigma units)."""
    coords = list(coords)
    lines = []
    for i in range(len(coords) // 3):
        parts = []
        for c in coords[3 * i:3 * i + 3]:
            d = Decimal(c) / COORD_SCALE
            parts.append(format(d.normalize(), "f"))
        lines.append(",".join(parts))
    return "\n".join(lines) + "\n"
