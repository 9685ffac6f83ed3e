"""Selection algorithms over an explorable heap.

``select`` runs the doubling schedule k = 1, 2, 4, ..., n, each step an
``extend`` call that grows the set of found good values from k to the next
target. ``extend`` picks a random active root, recursively finds the good
values below it with doubling targets, classifies them with ``good_values``
and repeats until n values are certified.

``best_first_select`` is the classical baseline: node-optimal, but it
walks back and forth across the tree and keeps the whole frontier.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .core import (
    ExplorationCursor,
    ExplorationError,
    InvalidParam,
    InvariantViolated,
    PreconditionViolated,
)
from .prng import Rng
from .subroutines import (
    POS_INF,
    Bounds,
    SubroutineStats,
    counting_dfs,
    good_values,
    goto_value,
    sample_root,
)

# Live variables of one extend frame; the ledger is charged len() units per
# frame, so peak workspace grows with recursion depth.
EXTEND_INVENTORY = (
    "n", "k", "l0", "rng", "lower", "upper", "base", "ordinal",
    "r", "lp", "kp", "c", "cp",
)
SELECT_INVENTORY = ("n", "k", "kp", "lower", "rng")
# One stored key plus the stored path handle per frontier entry.
BEST_FIRST_ENTRY_UNITS = 2


@dataclass
class ExtendEntry:
    """One top-level extend call: its targets, active roots at entry, loop count."""

    n: int
    k: int
    roots_at_entry: int
    iterations: int


@dataclass
class RunTrace:
    """Counters and checks accumulated over one run."""

    n_top: int
    assertions: bool = True
    oracle: Optional[object] = None
    outer_iterations: int = 0
    total_outer_iterations: int = 0
    recursive_calls: int = 0
    max_level: int = 0
    checks_evaluated: int = 0
    entries: list = field(default_factory=list)
    subroutines: SubroutineStats = field(default_factory=SubroutineStats)

    def require(self, ok: bool, what: str) -> None:
        if not self.assertions:
            return
        self.checks_evaluated += 1
        if not ok:
            raise InvariantViolated(what)


@dataclass
class RunReport:
    result: int
    travel: int
    peak_workspace: int
    outer_iterations: int
    recursive_calls: int
    seed: int
    n: int
    algorithm: str = "select"
    family: str = ""
    max_recursion_depth: int = 0
    checks_evaluated: int = 0
    goodness_checks: int = 0
    entries: list = field(default_factory=list)


def depth_limit(n: int) -> int:
    return math.ceil(math.log2(n)) + 1 if n > 1 else 1


def select(
    cursor: ExplorationCursor,
    n: int,
    rng_seed: int,
    assertions: bool = True,
    oracle=None,
) -> RunReport:
    """n-th smallest key of the tree rooted at the cursor.

    ``oracle`` is an optional privileged checker (see
    :class:`explorable_heap.oracle.BoundsChecker`) consulted in every extend
    frame; tests use it to confirm the certified bounds.
    """
    if n < 1:
        raise InvalidParam("n must be at least 1")
    trace = RunTrace(n_top=n, assertions=assertions, oracle=oracle)
    rng = Rng(rng_seed)
    with cursor.workspace.scope(len(SELECT_INVENTORY)), cursor.anchored():
        k = 1
        lower = cursor.read()
        step = 0
        while k < n:
            kp = 2 * k if k < n / 2 else n
            lower = _extend(cursor, kp, k, lower, rng.spawn(0, step), trace, 0)
            k = kp
            step += 1
    return RunReport(
        result=lower,
        travel=cursor.travel.edges_traversed,
        peak_workspace=cursor.workspace.peak_units,
        outer_iterations=trace.outer_iterations,
        recursive_calls=trace.recursive_calls,
        seed=rng_seed,
        n=n,
        family=getattr(cursor, "source_label", ""),
        max_recursion_depth=trace.max_level,
        checks_evaluated=trace.checks_evaluated,
        goodness_checks=trace.subroutines.goodness_checks,
        entries=trace.entries,
    )


def extend(
    cursor: ExplorationCursor,
    n: int,
    k: int,
    l0: int,
    rng: Rng,
    trace: RunTrace | None = None,
) -> int:
    """n-th smallest key below the cursor, given that k >= n/2 keys are <= l0."""
    if trace is None:
        trace = RunTrace(n_top=n)
    with cursor.anchored():
        return _extend(cursor, n, k, l0, rng, trace, 0)


def _extend(cursor, n, k, l0, rng, trace: RunTrace, level: int) -> int:
    trace.max_level = max(trace.max_level, level)
    trace.require(level <= depth_limit(trace.n_top), f"recursion depth {level} too deep")
    if level:
        trace.recursive_calls += 1
    if k == 0:
        trace.require(n == 1, "k = 0 with n > 1")
        return cursor.read()
    if trace.oracle is not None:
        trace.checks_evaluated += 1
        if not trace.oracle.precondition(cursor, n, k, l0):
            raise PreconditionViolated(f"DFS(T, {l0}, {n}) != {k}")
    trace.require(n >= 2 and 2 * k >= n, f"extend called with n={n}, k={k}")
    ledger = cursor.workspace
    k_entry = k
    with ledger.scope(len(EXTEND_INVENTORY)):
        lower, upper = l0, POS_INF
        base = cursor.depth
        ordinal = 0
        iterations = 0
        roots_at_entry = None
        sampled = set() if trace.assertions else None
        while k < n:
            iterations += 1
            pick = sample_root(cursor, l0, Bounds(lower, upper), n, rng)
            if roots_at_entry is None:
                roots_at_entry = pick.roots_remaining
            trace.require(pick.chosen_key is not None, "no active root left while k < n")
            r = pick.chosen_key
            if sampled is not None:
                trace.require(r not in sampled, f"root {r} sampled twice")
                sampled.add(r)
            trace.require(iterations <= roots_at_entry, "more iterations than roots")

            lp = max(lower, r)
            kp = counting_dfs(cursor, lp, n)
            goto_value(cursor, r, n, fence=l0)
            c = counting_dfs(cursor, lp, n)
            cursor.climb(cursor.depth - base)
            cp = min(n - kp + c, 2 * c)
            while kp < n:
                trace.require(cp <= 2 * c, "c' > 2c")
                trace.require(cp <= n - kp + c, "c' > n - k' + c")
                goto_value(cursor, r, n, fence=l0)
                with cursor.anchored():
                    lp = _extend(cursor, cp, c, lp, rng.spawn(ordinal, r), trace, level + 1)
                cursor.climb(cursor.depth - base)
                ordinal += 1
                kp_next = counting_dfs(cursor, lp, n)
                trace.require(kp_next > kp, "k' did not increase")
                kp = kp_next
                c = cp
                cp = min(n - kp + c, 2 * c)

            found = good_values(cursor, r, lp, n, rng, fence=l0, stats=trace.subroutines)
            lower = max(lower, found.lower)
            upper = min(upper, found.upper)
            k = counting_dfs(cursor, lower, n)
            if trace.oracle is not None:
                trace.checks_evaluated += 1
                if not trace.oracle.brackets(cursor, n, lower, upper):
                    raise InvariantViolated(f"bounds ({lower}, {upper}) do not bracket")
    trace.total_outer_iterations += iterations
    if level == 0:
        trace.outer_iterations += iterations
        trace.entries.append(ExtendEntry(n, k_entry, roots_at_entry or 0, iterations))
    return lower


def best_first_select(cursor: ExplorationCursor, n: int) -> RunReport:
    """Pop the smallest explored node n times, exploring both children of each pop.

    The agent walks the tree path between consecutive targets.
    """
    if n < 1:
        raise InvalidParam("n must be at least 1")
    ledger = cursor.workspace
    with cursor.anchored():
        base = cursor.depth
        root_path = np.frombuffer(bytes(cursor.position.steps), dtype=np.int8)
        frontier = [(cursor.read(), b"")]
        ledger.acquire(BEST_FIRST_ENTRY_UNITS)
        popped = 0
        result = None
        while True:
            key, rel = heapq.heappop(frontier)
            ledger.release(BEST_FIRST_ENTRY_UNITS)
            popped += 1
            if popped == n:
                result = key
                break
            for d in (0, 1):
                child = rel + bytes((d,))
                path = np.concatenate([root_path, np.frombuffer(child, dtype=np.int8)])
                _walk(cursor, path)
                heapq.heappush(frontier, (cursor.read(), child))
                ledger.acquire(BEST_FIRST_ENTRY_UNITS)
        _walk(cursor, root_path)
        ledger.release(BEST_FIRST_ENTRY_UNITS * len(frontier))
        assert cursor.depth == base
    return RunReport(
        result=result,
        travel=cursor.travel.edges_traversed,
        peak_workspace=ledger.peak_units,
        outer_iterations=0,
        recursive_calls=0,
        seed=0,
        n=n,
        algorithm="best-first",
        family=getattr(cursor, "source_label", ""),
    )


def _walk(cursor, path):
    status = cursor.run(kernels.walk_to, path, len(path), reserve=len(path))
    if status < 0:
        raise ExplorationError("walk left the subtree or overflowed")
