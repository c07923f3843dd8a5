"""Deterministic seeding.

Every random draw in the package flows from one integer master seed.
Trial ``i`` of an experiment uses the generator returned by
``trial_rng(master_seed, i)``, whose seed is ``mix64(master_seed, i)``:

    state  = splitmix64(master_seed) + (i + 1) * 0x9E3779B97F4A7C15   (mod 2**64)
    seed_i = splitmix64(state)

where ``splitmix64`` is the SplitMix64 output function (constants
0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).  Each seed feeds a PCG64 bit
generator.  Results therefore depend only on (master_seed, i), never on
thread scheduling.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64(master_seed: int, index: int) -> int:
    """Seed of trial ``index`` under ``master_seed``."""
    if index < 0:
        raise ValueError("trial index must be non-negative")
    state = (splitmix64(master_seed) + (index + 1) * GOLDEN_GAMMA) & MASK64
    return splitmix64(state)


def make_rng(seed=None) -> np.random.Generator:
    """Return a Generator for an int seed, or pass a Generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = 0
    if isinstance(seed, (int, np.integer)):
        return np.random.Generator(np.random.PCG64(int(seed) & MASK64))
    raise TypeError(f"seed must be an int or numpy Generator, got {type(seed).__name__}")


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    return make_rng(mix64(master_seed, index))
