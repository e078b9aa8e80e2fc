"""Deterministic random number plumbing.

Every stochastic routine in the toolkit takes either an explicit seed or a
``numpy.random.Generator``.  Nothing reads global RNG state, so any pipeline
run is reproducible from its seed alone.  Substreams derived with distinct
key paths are statistically independent, which lets e.g. per-receiver noise
draws stay stable when unrelated parts of a scene change.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _key_word(key: int | str) -> int:
    if isinstance(key, str):
        digest = hashlib.blake2s(key.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    return int(key) & 0xFFFFFFFFFFFFFFFF


def make_rng(seed: int, *keys: int | str) -> np.random.Generator:
    """Build a generator for ``seed``, optionally scoped to a substream.

    Args:
        seed: non-negative base seed for the run.
        keys: optional key path (ints or short strings) naming a substream,
            e.g. ``make_rng(seed, "noise", receiver)``.

    Returns:
        Independent ``numpy.random.Generator`` for the (seed, keys) pair.
    """
    words = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [_key_word(k) for k in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(words)))
