"""Deterministic random streams keyed by a path such as ``(seed, "replica", 3)``."""

from __future__ import annotations

import hashlib
import secrets

import numpy as np


def derive_rng(seed: int, *path) -> np.random.Generator:
    """Independent generator for the stream at ``path`` under ``seed``.

    The key is hashed, so the stream for replica ``r`` does not depend on how
    many other streams were created before it or on which worker asks for it.
    """
    key = repr((int(seed),) + tuple(path)).encode()
    digest = hashlib.blake2b(key, digest_size=32).digest()
    words = np.frombuffer(digest, dtype=np.uint32)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(words.tolist())))


def fresh_seed() -> int:
    return secrets.randbits(63)
