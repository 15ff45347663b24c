"""Deterministic stream splitting for all randomized components.

Every random choice in the library flows through a PCG64 generator keyed by
(base seed, role tag, ...extra tags).  Role tags keep topology, weights,
terminal selection, and per-pass sampling on independent, individually
reproducible streams.
"""

from __future__ import annotations

import numpy as np

ROLE_TOPOLOGY = 1
ROLE_WEIGHTS = 2
ROLE_TERMINALS = 3
ROLE_PAIRWISE = 4
ROLE_PLAN = 5
ROLE_LEVEL = 6

_MASK64 = (1 << 64) - 1


def stream(seed: int, *tags: int) -> np.random.Generator:
    """PCG64 generator for (seed, tags); same inputs give the same stream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & _MASK64, *tags])))


def derive_seed(seed: int, *tags: int) -> int:
    """Stable 64-bit sub-seed for (seed, tags)."""
    ss = np.random.SeedSequence([seed & _MASK64, *tags])
    return int(ss.generate_state(1, np.uint64)[0])
