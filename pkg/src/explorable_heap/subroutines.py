"""Building blocks of the selection algorithm.

All of them take the agent as a cursor positioned at the root of the tree
(or subtree) they work on, and leave it there when they return. Each declares
its live variables with the workspace ledger; the inventories below are the
documented list the space audit checks against.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, TypeVar

import numpy as np

from . import kernels
from .core import ExplorationCursor, ExplorationError, TargetNotFound
from .prng import Rng

NEG_INF = int(kernels.NEG_INF)
POS_INF = int(kernels.POS_INF)

DFS_INVENTORY = ("cutoff", "cap", "count", "phase")
GOTO_INVENTORY = ("target", "fence", "budget", "expanded")
STREAM_INVENTORY = ("seen", "chosen")
ROOTS_INVENTORY = ("l0", "lower", "upper", "m", "chosen", "phase")
GOOD_VALUES_INVENTORY = (
    "lower", "upper", "certified", "l_prime", "cap", "base", "size", "value",
)

T = TypeVar("T")


def _check(status) -> int:
    status = int(status)
    if status == kernels.OVERFLOW:
        raise ExplorationError("path buffer overflow during traversal")
    return status


@dataclass
class Bounds:
    """Certified window around the selected value: lower is good, upper is bad.

    ``NEG_INF`` / ``POS_INF`` stand for the open ends.
    """

    lower: int = NEG_INF
    upper: int = POS_INF

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty bounds ({self.lower}, {self.upper})")


@dataclass
class RootsSample:
    chosen_key: Optional[int]
    roots_remaining: int


@dataclass
class SubroutineStats:
    goodness_checks: int = 0
    good_values_calls: int = 0
    check_counts: list = field(default_factory=list)


def counting_dfs(cursor: ExplorationCursor, cutoff: int, cap: int) -> int:
    """min(#keys <= cutoff below the cursor, cap + 1); travel O(min(count, cap))."""
    with cursor.workspace.scope(len(DFS_INVENTORY)):
        return _check(cursor.run(kernels.dfs_count, int(cutoff), int(cap), reserve=cap + 2))


def goto_value(cursor: ExplorationCursor, target: int, cap: int, fence: int | None = None) -> None:
    """Walk from the cursor to the node labelled ``target``.

    Depth-first, turning back at labels above ``target`` (or above ``fence``
    when given, used to reach a child hanging just below a known good region).
    Gives up after ``cap + 1`` expanded nodes.
    """
    if fence is None:
        fence = target
    with cursor.workspace.scope(len(GOTO_INVENTORY)):
        status = _check(
            cursor.run(kernels.goto_key, int(target), int(fence), int(cap) + 1, reserve=cap + 3)
        )
    if status != 1:
        raise TargetNotFound(f"no node labelled {target} within the search region")


def stream_sample(items: Iterable[T], rng: Rng) -> Optional[T]:
    """Uniform pick from a stream of unknown length: item i replaces with prob 1/i."""
    chosen = None
    seen = 0
    for item in items:
        seen += 1
        if rng.below(seen) == 0:
            chosen = item
    return chosen


def sample_root(
    cursor: ExplorationCursor, l0: int, bounds: Bounds, cap: int, rng: Rng
) -> RootsSample:
    """Uniform pick among the active roots below the cursor.

    Roots are children of the region with keys <= ``l0`` lying outside it; a
    root is active while its subtree holds a key inside the open bounds. The
    set is enumerated and sampled in one traversal, never stored.
    """
    out = np.zeros(2, dtype=np.int64)
    with cursor.workspace.scope(len(ROOTS_INVENTORY)):
        _check(
            cursor.run(
                kernels.roots_sample, int(l0), int(bounds.lower), int(bounds.upper),
                rng.state, out, reserve=2 * cap + 4,
            )
        )
    m = int(out[0])
    return RootsSample(int(out[1]) if m else None, m)


def _window(cursor, lower, upper, inclusive, cap, rng, out):
    _check(
        cursor.run(
            kernels.window_sample, int(lower), int(upper), bool(inclusive),
            rng.state, out, reserve=2 * cap + 4,
        )
    )
    return int(out[0]), int(out[1])


def good_values(
    cursor: ExplorationCursor,
    root_key: int,
    l_prime: int,
    cap: int,
    rng: Rng,
    fence: int | None = None,
    stats: SubroutineStats | None = None,
) -> Bounds:
    """Largest good and smallest bad label among the keys <= ``l_prime`` below a root.

    The cursor sits at the root of the tree in which goodness is judged; the
    root being classified is reached with :func:`goto_value` (``fence`` as for
    that function). Randomized binary search: sample the open window
    uniformly, classify the sample with a counting DFS, shrink the window.
    ``l_prime`` itself stays in the window until it is classified, and if it
    turns out good the upper end becomes ``POS_INF``.
    """
    out = np.zeros(2, dtype=np.int64)
    lower, upper = NEG_INF, int(l_prime)
    certified = False
    checks = 0
    with cursor.workspace.scope(len(GOOD_VALUES_INVENTORY)):
        base = cursor.depth
        while True:
            goto_value(cursor, root_key, cap, fence)
            size, value = _window(cursor, lower, upper, not certified, cap, rng, out)
            cursor.climb(cursor.depth - base)
            if size == 0:
                break
            checks += 1
            if counting_dfs(cursor, value, cap) <= cap:
                lower = value
                if lower == l_prime:
                    upper = POS_INF
                    break
            else:
                upper = value
                certified = True
    if stats is not None:
        stats.goodness_checks += checks
        stats.good_values_calls += 1
        stats.check_counts.append(checks)
    return Bounds(lower, upper)
