"""Seeded heap-ordered label families and the tree-file loader.

Every source is an immutable description of an infinite binary tree. Labels
are computed lazily from the parent's label and a 64-bit path fingerprint, so
any node costs O(1) to label once its parent is known. The mixer is the
splitmix64 finalizer in :mod:`explorable_heap.kernels`.

Nodes that a finite construction does not list are padded: a padded child
gets ``parent + HUGE + mix(fingerprint) % 2**39`` with ``HUGE = 2**40``, which
keeps heap order and puts every padded label above any rank a test queries.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from ._jit import I64, MASK64, U64
from .core import (
    ROOT,
    DuplicateKey,
    HeapViolation,
    InvalidParam,
    NodePath,
    ParseError,
)

HUGE = 1 << 40
KEY_LIMIT = 1 << 62

_EMPTY = np.zeros(1, dtype=np.int64)


def root_fingerprint(seed: int) -> int:
    return int(kernels.mix64(U64(seed & int(MASK64))))


class ValueSource:
    """A fixed labelling of the infinite binary tree.

    ``key_at`` is the privileged oracle view; algorithms never see it and
    reach labels only through an :class:`~explorable_heap.core.ExplorationCursor`.
    """

    family = "abstract"
    _fam = kernels.FAM_RANDOM

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self._root_fp = root_fingerprint(self.seed)

    @property
    def identity(self) -> str:
        return f"{self.family}:{self.seed}"

    def root_state(self) -> tuple[int, int, int]:
        return 0, self._root_fp, 0

    def kernel_source(self):
        return (self._fam, _EMPTY, _EMPTY, _EMPTY)

    def child_state(self, state, d: int) -> tuple[int, int, int]:
        fam, tl, tr, tkey = self.kernel_source()
        key, fp, tag = state
        k, f, t = kernels.child_state(fam, tl, tr, tkey, I64(key), U64(fp), I64(tag), int(d))
        return int(k), int(f), int(t)

    def state_at(self, path: NodePath) -> tuple[int, int, int]:
        state = self.root_state()
        for d in path.steps:
            state = self.child_state(state, d)
        return state

    def key_at(self, path: NodePath) -> int:
        return self.state_at(path)[0]


class RandomIncrementSource(ValueSource):
    """Each edge adds a pseudorandom increment in [1, 2**20].

    The low 24 bits of a label carry the node's fingerprint, so labels are
    ``(sum of increments) << 24 | fingerprint bits``; the root is 0.
    """

    family = "random-increment"
    _fam = kernels.FAM_RANDOM


class TwoPathSource(ValueSource):
    """Left spine 1, 3, 5, ..., right spine 2, 4, 6, ..., root 0.

    The k-th smallest label is k - 1. Off-spine children are padded.
    """

    family = "two-path"
    _fam = kernels.FAM_TWO_PATH

    def __init__(self, seed: int = 0):
        super().__init__(seed)


class TrieSource(ValueSource):
    """An explicit finite labelling, padded below its listed nodes."""

    family = "trie"
    _fam = kernels.FAM_TRIE

    def __init__(self, nodes: list[tuple[NodePath, int]], seed: int = 0):
        super().__init__(seed)
        if not nodes or nodes[0][0] != ROOT:
            raise ParseError("the root must be listed first")
        index: dict[NodePath, int] = {}
        seen_keys: dict[int, NodePath] = {}
        left = np.full(len(nodes), -1, dtype=np.int64)
        right = np.full(len(nodes), -1, dtype=np.int64)
        table = np.zeros(len(nodes), dtype=np.int64)
        for i, (path, key) in enumerate(nodes):
            if path in index:
                raise ParseError(f"node {path} listed twice")
            if not -KEY_LIMIT < key < KEY_LIMIT:
                raise ParseError(f"key {key} at {path} out of range")
            if key in seen_keys:
                raise DuplicateKey(f"key {key} at both {seen_keys[key]} and {path}")
            if path != ROOT:
                parent = path.parent()
                if parent not in index:
                    raise ParseError(f"node {path} listed before its parent")
                p = index[parent]
                if key <= table[p]:
                    raise HeapViolation(
                        f"key {key} at {path} is not larger than its parent's {table[p]}"
                    )
                (left if path.steps[-1] == 0 else right)[p] = i
            index[path] = i
            seen_keys[key] = path
            table[i] = key
        self._left, self._right, self._table = left, right, table
        self.nodes = list(nodes)

    def root_state(self):
        return int(self._table[0]), self._root_fp, 0

    def kernel_source(self):
        return (self._fam, self._left, self._right, self._table)


def _trail(start: NodePath, keys, d: int) -> list[tuple[NodePath, int]]:
    out = []
    path = start
    for key in keys:
        out.append((path, int(key)))
        path = path.child(d)
    return out


class MedianGameSource(TrieSource):
    """Root 0 with two trails: M_A then S_A on the left, M_B then S_B on the right.

    ``M_A`` holds the odd and ``M_B`` the even labels in [1, 2n]; the labels
    2n+1 .. 4n+1 are split by the seed into ``S_A`` (n+1 values) and ``S_B``
    (n values). Left trails continue through left children, right trails
    through right children; the other child of every trail node is padded.
    """

    family = "median-game"

    def __init__(self, n: int, seed: int = 0):
        if n < 1:
            raise InvalidParam("median game needs n >= 1")
        self.n = n
        self.m_a = list(range(1, 2 * n, 2))
        self.m_b = list(range(2, 2 * n + 1, 2))
        pool = list(range(2 * n + 1, 4 * n + 2))
        random.Random(seed).shuffle(pool)
        self.s_a = sorted(pool[: n + 1])
        self.s_b = sorted(pool[n + 1 :])
        left = NodePath((0,))
        right = NodePath((1,))
        nodes = [(ROOT, 0)]
        nodes += _trail(left, self.m_a + self.s_a, 0)
        nodes += _trail(right, self.m_b + self.s_b, 1)
        super().__init__(nodes, seed)
        self._median_rank = None

    @property
    def identity(self) -> str:
        return f"{self.family}:{self.n}:{self.seed}"

    @property
    def median_key(self) -> int:
        """Median of S_A and S_B together, by direct sort."""
        return sorted(self.s_a + self.s_b)[self.n]

    @property
    def median_rank(self) -> int:
        """Rank of ``median_key`` in the whole tree, found by enumeration."""
        if self._median_rank is None:
            from .oracle import rank_of

            self._median_rank = rank_of(self, self.median_key)
        return self._median_rank


class FileTreeSource(TrieSource):
    family = "from-file"

    def __init__(self, nodes, seed: int = 0, path: str = ""):
        super().__init__(nodes, seed)
        self.path = path

    @property
    def identity(self) -> str:
        return f"{self.family}:{Path(self.path).name}:{self.seed}"


def random_increment_source(seed: int) -> RandomIncrementSource:
    return RandomIncrementSource(seed)


def two_path_source() -> TwoPathSource:
    return TwoPathSource()


def median_game_source(n: int, seed: int = 0) -> MedianGameSource:
    return MedianGameSource(n, seed)


def parse_tree(text: str, seed: int = 0, path: str = "<string>") -> FileTreeSource:
    """Parse the tree-file format: ``<path> <key>`` per line, ``#`` comments.

    ``path`` is ``-`` for the root or a string over ``L``/``R``; parents must
    precede their children.
    """
    nodes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"{path}:{lineno}: expected '<path> <key>'")
        node, key = parts
        if node != "-" and (not node or set(node) - {"L", "R"}):
            raise ParseError(f"{path}:{lineno}: bad node path {node!r}")
        try:
            value = int(key, 10)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: bad key {key!r}") from None
        nodes.append((NodePath.parse(node), value))
    if not nodes:
        raise ParseError(f"{path}: no nodes listed")
    return FileTreeSource(nodes, seed=seed, path=path)


def load_tree_file(path, seed: int = 0) -> FileTreeSource:
    text = Path(path).read_text(encoding="utf-8")
    return parse_tree(text, seed=seed, path=str(path))


def format_tree(nodes) -> str:
    return "".join(f"{p} {k}\n" for p, k in nodes)


@dataclass(frozen=True)
class FamilySpec:
    """Names a source: family, seed and the family's own parameter."""

    family: str
    seed: int = 0
    n: int | None = None
    path: str | None = None

    @property
    def label(self) -> str:
        if self.family == "median-game":
            return f"median-game:{self.n}"
        if self.family == "from-file":
            return f"from-file:{Path(self.path).name}"
        return self.family

    def build(self) -> ValueSource:
        return make_source(self)


FAMILIES = ("random-increment", "two-path", "median-game", "from-file")


def make_source(spec: FamilySpec) -> ValueSource:
    if spec.family == "random-increment":
        return RandomIncrementSource(spec.seed)
    if spec.family == "two-path":
        return TwoPathSource()
    if spec.family == "median-game":
        if spec.n is None:
            raise InvalidParam("median-game needs n")
        return MedianGameSource(spec.n, spec.seed)
    if spec.family == "from-file":
        if not spec.path:
            raise InvalidParam("from-file needs a tree file path")
        return load_tree_file(spec.path, seed=spec.seed)
    raise InvalidParam(f"unknown family {spec.family!r}")
