"""Seeded, splittable random streams.

Every sampler in the package draws from a Philox (counter-based) generator
keyed by an integer seed plus a tuple of stream labels, so independent
suites never share state and reruns are bit-for-bit reproducible.
"""

from __future__ import annotations

import zlib

import numpy as np


def stream(seed: int, *labels: str | int) -> np.random.Generator:
    key = tuple(
        label if isinstance(label, int) else zlib.crc32(label.encode("utf-8"))
        for label in labels
    )
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def as_generator(rng: np.random.Generator | int) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(int(rng))


def randint(rng: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer in the closed range [lo, hi]."""
    return int(rng.integers(lo, hi, endpoint=True))
