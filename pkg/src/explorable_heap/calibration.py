"""Recorded workspace calibration for ``peak <= W * log2(n) + W0``.

W is the ledger charge of one extend frame, since each recursion level holds
one frame. W0 is fitted per family at ``CALIBRATION_N``: the largest
``peak - W * log2(n)`` over ``CALIBRATION_TRIALS`` seeded trials (seeds
0, 1, ...). Re-run :func:`calibrate` to reproduce the recorded numbers.
"""
from __future__ import annotations

import math

from .selection import EXTEND_INVENTORY

W = len(EXTEND_INVENTORY)
CALIBRATION_N = 1 << 8
CALIBRATION_TRIALS = 50

# Measured with calibrate(); random-increment sits far below the slope
# (its recursion stays 2-3 levels deep), two-path follows it exactly.
W0 = {
    "random-increment": -35,
    "two-path": 4,
}


def fit_w0(peaks, n: int, w: int = W) -> int:
    return math.ceil(max(p - w * math.log2(n) for p in peaks))


def space_bound(family: str, n: int) -> float:
    return W * math.log2(n) + W0[family]


def calibrate(family: str, trials: int = CALIBRATION_TRIALS, n: int = CALIBRATION_N) -> int:
    """W0 for ``family`` measured on fresh seeded runs."""
    from .experiments import run_trial
    from .generators import FamilySpec

    peaks = [run_trial(FamilySpec(family), n, "select", s).peak_workspace for s in range(trials)]
    return fit_w0(peaks, n)
