"""Privileged ground truth.

Everything here reads labels straight from a :class:`ValueSource` with no
travel metering. Tests and the experiment harness use it to check the
exploring algorithms; the algorithms themselves never import it.
"""
from __future__ import annotations

import heapq
from typing import Iterator

from .core import ROOT, DuplicateKey, HeapViolation, InvalidParam, NodePath


def _children(source, state, path):
    for d in (0, 1):
        yield source.child_state(state, d), path + (d,)


def iter_smallest(source, root: NodePath = ROOT) -> Iterator[tuple[int, NodePath]]:
    """Yield ``(key, path)`` of the subtree at ``root`` in increasing key order."""
    state = source.state_at(root)
    heap = [(state[0], state, root.steps)]
    last = None
    while heap:
        key, state, path = heapq.heappop(heap)
        if key == last:
            raise DuplicateKey(f"key {key} occurs twice (second at {NodePath(path)})")
        last = key
        yield key, NodePath(path)
        for child, cpath in _children(source, state, path):
            if child[0] <= key:
                raise HeapViolation(f"child {NodePath(cpath)} not above its parent")
            heapq.heappush(heap, (child[0], child, cpath))


def smallest_keys(source, n: int, root: NodePath = ROOT) -> list[int]:
    out = []
    if n <= 0:
        return out
    for key, _ in iter_smallest(source, root):
        out.append(key)
        if len(out) == n:
            break
    return out


def oracle_select(source, n: int, root: NodePath = ROOT) -> int:
    """The n-th smallest key of the subtree at ``root`` (1-based)."""
    if n < 1:
        raise InvalidParam("n must be at least 1")
    return smallest_keys(source, n, root)[-1]


def count_at_most(source, cutoff: int, root: NodePath = ROOT, cap: int | None = None) -> int:
    """#{v in subtree : key(v) <= cutoff}, saturating at ``cap + 1``."""
    count = 0
    for key, _ in iter_smallest(source, root):
        if key > cutoff:
            break
        count += 1
        if cap is not None and count > cap:
            break
    return count


def rank_of(source, key: int, root: NodePath = ROOT) -> int:
    for i, (k, _) in enumerate(iter_smallest(source, root), 1):
        if k == key:
            return i
        if k > key:
            break
    raise InvalidParam(f"key {key} is not in the tree")


def path_of(source, key: int, root: NodePath = ROOT) -> NodePath:
    for k, path in iter_smallest(source, root):
        if k == key:
            return path
        if k > key:
            break
    raise InvalidParam(f"key {key} is not in the tree")


def subtree_keys_at_most(source, root: NodePath, cutoff: int) -> list[int]:
    out = []
    for k, _ in iter_smallest(source, root):
        if k > cutoff:
            break
        out.append(k)
    return out


def l0_roots(source, l0: int, root: NodePath = ROOT) -> list[tuple[NodePath, int]]:
    """Children of nodes with key <= l0 whose own key exceeds l0."""
    out = []
    for k, path in iter_smallest(source, root):
        if k > l0:
            break
        state = source.state_at(path)
        for d in (0, 1):
            child = source.child_state(state, d)
            if child[0] > l0:
                out.append((path.child(d), child[0]))
    return out


def has_key_between(source, root: NodePath, lo: int, hi: int) -> bool:
    for k, _ in iter_smallest(source, root):
        if k > lo:
            return k < hi
    return False


def active_roots(source, l0: int, lo: int, hi: int, root: NodePath = ROOT):
    """Roots whose subtree still holds a key strictly inside (lo, hi)."""
    return [(p, k) for p, k in l0_roots(source, l0, root) if has_key_between(source, p, lo, hi)]


class BoundsChecker:
    """Confirms extend's invariants against the true labels, without travel.

    Reads the agent's position (the subtree an extend frame works on) and
    enumerates that subtree directly.
    """

    def __init__(self, source):
        self.source = source

    def precondition(self, cursor, n: int, k: int, l0: int) -> bool:
        return count_at_most(self.source, l0, cursor.position, cap=n) == k

    def brackets(self, cursor, n: int, lower: int, upper: int) -> bool:
        target = oracle_select(self.source, n, cursor.position)
        return lower <= target < upper
