"""Seed handling.

Every stochastic operation takes an explicit seed (or an already-built
generator). Derived streams are split from a master seed with stable,
content-addressed keys so that batch runs are reproducible, candidate
evaluations are decorrelated, and parallel execution produces exactly the
same numbers as a sequential one.
"""
from __future__ import annotations

import hashlib

import numpy as np

Seed = "int | np.random.Generator | np.random.SeedSequence"


def make_rng(seed) -> np.random.Generator:
    """Return a Generator for an int seed, SeedSequence, or pass one through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def child_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Split one master seed into `count` independent child sequences."""
    return np.random.SeedSequence(seed).spawn(count)


def derive_seed(master: int, *tags) -> int:
    """Stable 63-bit seed derived from a master seed and arbitrary tags.

    Uses a cryptographic hash of the canonical string form, not Python's
    `hash`, so results are identical across processes and sessions.
    """
    text = "|".join([str(int(master))] + [_canon(t) for t in tags])
    digest = hashlib.blake2s(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def _canon(tag) -> str:
    if isinstance(tag, float):
        return format(tag, ".12g")
    return str(tag)
