"""Numba switch.

Set ``EXPLORABLE_HEAP_DISABLE_NUMBA=1`` before import to run every kernel as
plain Python. Both paths execute the same source and produce bit-identical
results; the fallback is only slower.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_ENABLED = numba is not None and os.environ.get(
    "EXPLORABLE_HEAP_DISABLE_NUMBA", "0"
).lower() not in ("1", "true", "yes")

if NUMBA_ENABLED:
    U64 = np.uint64
    I64 = np.int64

    def njit(fn):
        return numba.njit(cache=True, nogil=True)(fn)

else:
    # Python ints are exact; callers mask to 64 bits explicitly.
    U64 = int
    I64 = int

    def njit(fn):
        return fn


MASK64 = U64(0xFFFFFFFFFFFFFFFF)
