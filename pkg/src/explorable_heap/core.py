"""Node addressing, the metered exploration cursor and the workspace ledger."""
from __future__ import annotations

import contextlib
import enum
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import kernels


class HeapModelError(Exception):
    """A violation of the explorable-heap model or of a routine's contract."""


class MoveUpAtRoot(HeapModelError):
    pass


class DuplicateKey(HeapModelError):
    pass


class HeapViolation(HeapModelError):
    pass


class ParseError(HeapModelError):
    pass


class InvalidParam(HeapModelError, ValueError):
    pass


class TargetNotFound(HeapModelError):
    pass


class PreconditionViolated(HeapModelError):
    pass


class InvariantViolated(HeapModelError, AssertionError):
    """A runtime assertion inside the selection algorithm fired."""


class ExplorationError(HeapModelError):
    """A traversal ran past its depth or node budget."""


class Direction(enum.IntEnum):
    LEFT = 0
    RIGHT = 1
    UP = 2


@dataclass(frozen=True)
class NodePath:
    """Address of a node as the left/right steps taken from the root."""

    steps: tuple[int, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.steps)

    def child(self, d: int) -> "NodePath":
        return NodePath(self.steps + (int(d),))

    def parent(self) -> "NodePath":
        if not self.steps:
            raise MoveUpAtRoot("the root has no parent")
        return NodePath(self.steps[:-1])

    @classmethod
    def parse(cls, text: str) -> "NodePath":
        if text == "-":
            return cls()
        try:
            return cls(tuple("LR".index(c) for c in text))
        except ValueError:
            raise ParseError(f"bad path {text!r}") from None

    def __str__(self) -> str:
        return "".join("LR"[s] for s in self.steps) or "-"


ROOT = NodePath()


class TravelMeter:
    """Edge-traversal counter. Only the harness may reset it."""

    def __init__(self, meta: np.ndarray):
        self._meta = meta

    @property
    def edges_traversed(self) -> int:
        return int(self._meta[1])

    def reset(self) -> None:
        self._meta[1] = 0

    def __int__(self) -> int:
        return self.edges_traversed


class WorkspaceLedger:
    """Cooperative count of live workspace units (stored keys or counters)."""

    def __init__(self):
        self.live_units = 0
        self.peak_units = 0

    def acquire(self, units: int) -> None:
        if units < 0:
            raise InvalidParam("units must be nonnegative")
        self.live_units += units
        if self.live_units > self.peak_units:
            self.peak_units = self.live_units

    def release(self, units: int) -> None:
        self.live_units -= units
        assert self.live_units >= 0

    @contextlib.contextmanager
    def scope(self, units: int) -> Iterator["WorkspaceLedger"]:
        self.acquire(units)
        try:
            yield self
        finally:
            self.release(units)

    def reset(self) -> None:
        self.live_units = 0
        self.peak_units = 0


def workspace_scope(ledger: WorkspaceLedger, units: int):
    return ledger.scope(units)


class ExplorationCursor:
    """The agent: a position in the tree, a travel meter and a ledger.

    This is the only handle selection algorithms get. Labels are revealed one
    node at a time as the agent walks; nothing here offers random access.
    """

    _INITIAL_CAPACITY = 256

    def __init__(self, source, ledger: WorkspaceLedger | None = None):
        self._source = source
        cap = self._INITIAL_CAPACITY
        self._dirs = np.zeros(cap, dtype=np.int8)
        self._keys = np.zeros(cap, dtype=np.int64)
        self._fps = np.zeros(cap, dtype=np.uint64)
        self._tags = np.zeros(cap, dtype=np.int64)
        self._meta = np.zeros(3, dtype=np.int64)
        self._keys[0], self._fps[0], self._tags[0] = source.root_state()
        self._src = source.kernel_source()
        self.source_label = getattr(source, "identity", "")
        self.travel = TravelMeter(self._meta)
        self.workspace = ledger if ledger is not None else WorkspaceLedger()

    # -- agent state -------------------------------------------------------

    @property
    def depth(self) -> int:
        return int(self._meta[0])

    @property
    def position(self) -> NodePath:
        return NodePath(tuple(int(d) for d in self._dirs[: self.depth]))

    @property
    def at_subtree_root(self) -> bool:
        return self._meta[0] == self._meta[2]

    def read(self):
        return int(self._keys[self._meta[0]])

    def move(self, d: Direction) -> None:
        if d == Direction.UP:
            if not kernels.up(self._state()):
                raise MoveUpAtRoot(
                    "cannot move above the root" if self._meta[2] == 0
                    else "cannot move above the current subtree root"
                )
            return
        self.reserve(1)
        kernels.down(self._src, self._state(), int(d))

    def move_left(self) -> None:
        self.move(Direction.LEFT)

    def move_right(self) -> None:
        self.move(Direction.RIGHT)

    def move_up(self) -> None:
        self.move(Direction.UP)

    def climb(self, steps: int) -> None:
        target = self.depth - steps
        if target < self._meta[2]:
            raise MoveUpAtRoot("climb would leave the current subtree")
        kernels.climb_to(self._state(), target)

    @contextlib.contextmanager
    def anchored(self):
        """Treat the current node as the root until the block exits."""
        saved = int(self._meta[2])
        here = int(self._meta[0])
        self._meta[2] = here
        try:
            yield self
        finally:
            if self._meta[0] != here:
                raise ExplorationError("subtree call did not return to its root")
            self._meta[2] = saved

    # -- kernel plumbing ---------------------------------------------------

    def _state(self):
        return (self._dirs, self._keys, self._fps, self._tags, self._meta)

    def reserve(self, extra: int) -> None:
        need = int(self._meta[0]) + int(extra) + 2
        cap = self._keys.shape[0]
        if need < cap:
            return
        while cap <= need:
            cap *= 2
        for name in ("_dirs", "_keys", "_fps", "_tags"):
            old = getattr(self, name)
            new = np.zeros(cap, dtype=old.dtype)
            new[: old.shape[0]] = old
            setattr(self, name, new)

    def run(self, kernel, *args, reserve: int = 0):
        """Run a traversal kernel from the current node."""
        self.reserve(reserve)
        return kernel(self._src, self._state(), *args)
