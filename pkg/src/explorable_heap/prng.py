"""Splittable splitmix64 generator shared by the Python and kernel paths."""
from __future__ import annotations

import numpy as np

from . import kernels
from ._jit import MASK64, U64

_MASK = int(MASK64)
# Keeps a stream seeded with s apart from a tree seeded with s.
_STREAM_SALT = 0x5851F42D4C957F2D


def _mix(x: int) -> int:
    return int(kernels.mix64(U64(x & _MASK)))


class Rng:
    """A 64-bit stream. ``state`` is a one-element array kernels update in place."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK
        self.state = np.array([_mix(self.seed ^ _STREAM_SALT)], dtype=np.uint64)

    def next_u64(self) -> int:
        return int(kernels.rng_next(self.state))

    def below(self, m: int) -> int:
        """Uniform integer in [0, m)."""
        return int(kernels.rng_below(self.state, m))

    def spawn(self, *salt: int) -> "Rng":
        """Child stream determined by this stream's seed and ``salt`` alone."""
        h = self.seed
        for s in salt:
            h = _mix(h ^ _mix(int(s) & _MASK))
        return Rng(h)
