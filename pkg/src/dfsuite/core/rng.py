"""Deterministic PRNG contract.

Every stochastic operation in the toolkit (splits, SMOTE, weight init,
shuffles, pairings) takes a generator created here. The algorithm is
pinned to PCG64 so that a given 64-bit seed yields the same stream on
every platform and run. Sub-streams for parallel or sequenced work are
derived with `spawn`, which is itself deterministic.
"""
from __future__ import annotations

import numpy as np

RNG_ALGORITHM = "pcg64"


def make_rng(seed: int) -> np.random.Generator:
    """Create the toolkit's canonical generator from a 64-bit seed."""
    if not (0 <= int(seed) < 2**64):
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def spawn(seed: int, stream: int) -> np.random.Generator:
    """Derive an independent generator for sub-stream `stream` of `seed`."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(stream)])))
