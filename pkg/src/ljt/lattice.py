"""Simple cubic seed lattices (genesis structures and miner starting points)."""

from __future__ import annotations

from .errors import BadClusterSize
from .lj_energy import MAX_PARTICLES, MIN_PARTICLES


def simple_cubic(n: int, spacing: float = 1.0) -> list[float]:
    """First ``n`` sites of the smallest m*m*m cubic grid, row-major.

    x varies fastest, then y, then z; site (i, j, k) sits at
    (i*spacing, j*spacing, k*spacing). All coordinates are non-negative.
    """
    if not (MIN_PARTICLES <= n <= MAX_PARTICLES):
        raise BadClusterSize(f"cluster size {n} outside [{MIN_PARTICLES}, {MAX_PARTICLES}]")
    if not spacing > 0:
        raise ValueError("spacing must be positive")
    m = 1
    while m * m * m < n:
        m += 1
    positions: list[float] = []
    count = 0
    for k in range(m):
        for j in range(m):
            for i in range(m):
                if count == n:
                    return positions
                positions.extend((i * spacing, j * spacing, k * spacing))
                count += 1
    return positions
