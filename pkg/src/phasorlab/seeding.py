"""Deterministic RNG stream derivation.

Every Monte Carlo consumer draws from a Philox4x64 counter-based
generator whose 128-bit key is SHA-256(master seed || engine name ||
replica index).  Streams for distinct (engine, replica) pairs are
independent, and the derivation is frozen: identical inputs give
byte-identical random streams across runs and platforms.
"""

from __future__ import annotations

import hashlib

import numpy as np


def philox_key(master_seed: int, engine: str, replica: int = 0) -> np.ndarray:
    """128-bit Philox key as two uint64 words."""
    if master_seed < 0 or master_seed > 0xFFFFFFFFFFFFFFFF:
        raise ValueError("master seed must fit in an unsigned 64-bit integer")
    if replica < 0:
        raise ValueError("replica index must be non-negative")
    payload = (master_seed.to_bytes(8, "little")
               + engine.encode("utf-8") + b"\x00"
               + replica.to_bytes(8, "little"))
    digest = hashlib.sha256(payload).digest()
    return np.frombuffer(digest[:16], dtype=np.uint64).copy()


def derive_rng(master_seed: int, engine: str, replica: int = 0) -> np.random.Generator:
    """Generator on the stream owned by (master seed, engine, replica)."""
    return np.random.Generator(np.random.Philox(key=philox_key(master_seed, engine, replica)))
