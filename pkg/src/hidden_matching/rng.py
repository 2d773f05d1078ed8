"""Seeded randomness with labeled substreams.

Every random choice in the package draws from a numpy ``Generator`` backed by
PCG64, whose 128-bit seed is the SHA-256 digest of ``"<seed>/<label>"``.
Components therefore get independent, reproducible streams without sharing a
generator, and re-seeding one label never perturbs another.
"""

from __future__ import annotations

import hashlib

import numpy as np

SEED_BITS = 64


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed < 2**SEED_BITS:
        raise ValueError(f"seed must lie in [0, 2^{SEED_BITS}), got {seed}")
    return seed


def substream(seed: int, label: str) -> np.random.Generator:
    seed = check_seed(seed)
    digest = hashlib.sha256(f"{seed}/{label}".encode()).digest()
    return np.random.Generator(np.random.PCG64(int.from_bytes(digest[:16], "big")))


def derive_seed(seed: int, label: str) -> int:
    """A 64-bit child seed, for handing a labeled seed to another component."""
    seed = check_seed(seed)
    digest = hashlib.sha256(f"{seed}/{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def as_generator(rng, label: str) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return substream(rng, label)
