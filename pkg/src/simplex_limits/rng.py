"""Deterministic random streams with explicit substream derivation.

A stream is identified by ``(seed, stream_id)``.  The PCG64 key of a stream
is derived by one splitmix64 finalizer round:

    key = splitmix64((seed + (stream_id + 1) * GOLDEN_GAMMA) mod 2**64)

This hash is part of the reproducibility contract: replicate blocks are
assigned to substreams by block index, so results do not depend on how many
workers consume the blocks.  Nested substreams re-key through the parent's
own key, which keeps (parent, index) pairs from colliding across levels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1

#: Odd constant 2**64 / golden ratio, the standard splitmix64 increment.
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    """One splitmix64 finalizer round (Steele, Lea & Flood's mixer)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def substream_key(seed: int, stream_id: int) -> int:
    """64-bit generator key for substream ``stream_id`` of ``seed``."""
    return splitmix64((seed + (stream_id + 1) * GOLDEN_GAMMA) & _MASK64)


@dataclass(frozen=True)
class RandomStream:
    """Value-type handle for a deterministic random substream.

    Streams are cheap immutable values, safe to pass between workers; every
    call to :meth:`generator` returns a fresh generator positioned at the
    start of the stream.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0 <= self.stream_id < 2**64:
            raise ValueError(f"stream_id must be a 64-bit unsigned integer, got {self.stream_id}")

    @property
    def key(self) -> int:
        return substream_key(self.seed, self.stream_id)

    def generator(self) -> np.random.Generator:
        """Fresh NumPy generator seeded at this stream's key."""
        return np.random.Generator(np.random.PCG64(self.key))

    def substream(self, index: int) -> "RandomStream":
        """Child stream ``index``; children of distinct parents never collide."""
        return RandomStream(seed=self.key, stream_id=index)
