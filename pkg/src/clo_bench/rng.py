"""Splittable random streams.

Every random draw in the package goes through an :class:`RngStream`. A stream
is identified by a master seed plus a tuple of integer keys; child streams
append keys, so the stream for ``(replication=3, phase=TRAIN)`` never shares
state with any other replication or phase. Each stream is a Philox
counter-based generator whose 128-bit key is the BLAKE2b digest of the
seed and key tuple (each packed as an unsigned 64-bit little-endian word).

Normal variates are produced by the inverse-CDF transform
``ndtri(u)`` of open-interval uniforms ``u = k/2**53 + 2**-54`` so that
golden files do not depend on numpy's ziggurat implementation.
"""
from __future__ import annotations

import hashlib
import struct
import zlib
from functools import cached_property

import numpy as np
from scipy.special import ndtri

# phase tags
TRAIN = 0
VALIDATION = 1
TEST = 2
FIT = 3
COEFFICIENTS = 4
PROFILE = 5


def _key(part) -> int:
    if isinstance(part, (int, np.integer)):
        if not 0 <= part < 2**64:
            raise ValueError("stream keys must fit in an unsigned 64-bit word")
        return int(part)
    # strings are hashed with a fixed checksum, not Python's salted hash()
    return zlib.crc32(str(part).encode("utf-8"))


class RngStream:
    """A deterministic random stream addressed by ``(seed, *keys)``."""

    def __init__(self, seed: int, keys: tuple = ()):
        self.seed = _key(int(seed))
        self.keys = tuple(_key(k) for k in keys)

    @cached_property
    def _digest(self) -> bytes:
        words = (self.seed,) + self.keys
        return hashlib.blake2b(struct.pack(f"<{len(words)}Q", *words), digest_size=16).digest()

    @cached_property
    def _gen(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=int.from_bytes(self._digest, "little")))

    def child(self, *keys) -> "RngStream":
        return RngStream(self.seed, self.keys + tuple(keys))

    @property
    def seed_int(self) -> int:
        """A 32-bit integer summarizing this stream (for provenance columns)."""
        return int.from_bytes(self._digest[:4], "little")

    def __repr__(self):
        return f"RngStream(seed={self.seed}, keys={self.keys})"

    # draws ------------------------------------------------------------
    def random(self, size=None) -> np.ndarray:
        return self._gen.random(size)

    def uniform(self, low=0.0, high=1.0, size=None) -> np.ndarray:
        return low + (high - low) * self._gen.random(size)

    def normal(self, size=None) -> np.ndarray:
        u = self._gen.random(size) + 2.0**-54
        return ndtri(u)

    def integers(self, low, high, size=None) -> np.ndarray:
        return self._gen.integers(low, high, size=size)
