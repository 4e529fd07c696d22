"""Stable per-item random streams.

Python's hash() is salted per process, so derived seeds go through SHA-256
to stay identical across runs, machines and parallel workers.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(*parts: int | str) -> int:
    key = "\x1f".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def sentence_rng(seed: int, corpus: str, ordinal: int) -> random.Random:
    """RNG for one sentence, independent of processing order."""
    return random.Random(derive_seed(seed, corpus, ordinal))
