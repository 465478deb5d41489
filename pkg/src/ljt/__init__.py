"""Lennard-Jones Token: a self-contained simulator of a token network that
rewards submission of lower-energy LJ cluster structures and charges tokens
for data access.

Layers, bottom up: ``lj_energy`` (deterministic fixed-point energy kernel),
``ledger`` (token balances), ``contract`` (mining / access / market rules),
``chain`` (hash-linked blocks, replay, verification), ``miner`` (basin-hopping
search), ``node`` (HTTP service), plus CLI front ends.
"""

__version__ = "0.1.0"
