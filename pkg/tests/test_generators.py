import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from explorable_heap import (
    DuplicateKey,
    FamilySpec,
    HeapViolation,
    InvalidParam,
    NodePath,
    ParseError,
    load_tree_file,
    make_source,
    median_game_source,
    parse_tree,
    random_increment_source,
    two_path_source,
)
from explorable_heap.generators import HUGE, format_tree
from explorable_heap.oracle import oracle_select, rank_of, smallest_keys

from conftest import FIXTURE_TREES, fixture_path


def _random_path(rnd, depth):
    return NodePath(tuple(rnd.randrange(2) for _ in range(depth)))


SOURCES = [
    random_increment_source(0),
    random_increment_source(99),
    two_path_source(),
    median_game_source(8, 1),
    load_tree_file(fixture_path("figure1")),
]


@pytest.mark.parametrize("src", SOURCES, ids=lambda s: s.identity)
def test_heap_order_to_depth_12(src):
    def walk(path, key):
        if path.depth == 12:
            return
        for d in (0, 1):
            child = path.child(d)
            ck = src.key_at(child)
            assert ck > key
            walk(child, ck)

    walk(NodePath(), src.key_at(NodePath()))


@pytest.mark.parametrize("src", SOURCES, ids=lambda s: s.identity)
def test_distinct_keys_on_sampled_pairs(src):
    rnd = random.Random(5)
    paths = {_random_path(rnd, rnd.randrange(0, 30)) for _ in range(10_000)}
    keys = {src.key_at(p) for p in paths}
    assert len(keys) == len(paths)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**40), st.lists(st.integers(0, 1), max_size=40))
def test_random_increment_deterministic(seed, steps):
    p = NodePath(tuple(steps))
    assert random_increment_source(seed).key_at(p) == random_increment_source(seed).key_at(p)


def test_random_increment_root_and_seeds():
    a, b = random_increment_source(1), random_increment_source(2)
    assert a.key_at(NodePath()) == 0
    deep = NodePath((0, 1) * 10)
    assert a.key_at(deep) != b.key_at(deep)


def test_two_path_labels():
    src = two_path_source()
    assert src.key_at(NodePath()) == 0
    assert src.key_at(NodePath((0,))) == 1
    assert src.key_at(NodePath((1,))) == 2
    assert src.key_at(NodePath((0, 0))) == 3
    assert src.key_at(NodePath((0, 1))) > HUGE
    assert oracle_select(src, 5) == 4


def test_two_path_kth_is_k_minus_one():
    keys = smallest_keys(two_path_source(), 1 << 14)
    assert keys == list(range(1 << 14))


def test_median_game_multiset():
    n = 8
    src = median_game_source(n, seed=1)
    assert sorted(src.m_a + src.m_b) == list(range(1, 2 * n + 1))
    assert sorted(src.s_a + src.s_b) == list(range(2 * n + 1, 4 * n + 2))
    assert len(src.s_a) == n + 1 and len(src.s_b) == n
    # the trail layout: left spine M_A then S_A
    left = [src.key_at(NodePath((0,) * i)) for i in range(1, 2 * n + 2)]
    assert left == src.m_a + src.s_a


@pytest.mark.parametrize("n,seed", [(8, 1), (16, 3), (5, 0)])
def test_median_game_rank(n, seed):
    src = median_game_source(n, seed)
    # [DERIVED] direct sort of the construction's sets
    median = sorted(src.s_a + src.s_b)[n]
    assert src.median_key == median
    # root, 2n trail values from M, then n values of S below the median
    assert src.median_rank == rank_of(src, median) == 3 * n + 2
    assert oracle_select(src, src.median_rank) == median


def test_median_game_seed_changes_split():
    splits = {tuple(median_game_source(8, s).s_a) for s in range(10)}
    assert len(splits) > 1
    with pytest.raises(InvalidParam):
        median_game_source(0)


def test_file_examples():
    src = parse_tree("- 0\nL 5\nR 3\n")
    assert src.key_at(NodePath((1,))) == 3
    with pytest.raises(HeapViolation):
        parse_tree("- 0\nL -1\n")
    only_root = parse_tree("- 0\n")
    assert only_root.key_at(NodePath((0,))) > HUGE
    assert only_root.key_at(NodePath((1,))) > HUGE


@pytest.mark.parametrize(
    "text,err",
    [
        ("", ParseError),
        ("L 1\n- 0\n", ParseError),
        ("- 0\nLL 4\n", ParseError),
        ("- 0\nL 1\nL 2\n", ParseError),
        ("- 0\nL x\n", ParseError),
        ("- 0\nQ 4\n", ParseError),
        ("- 0\nL 1 2\n", ParseError),
        ("- 0\nL 4\nR 4\n", DuplicateKey),
        ("- 0\nL 5\nLR 4\n", HeapViolation),
    ],
)
def test_file_errors(text, err):
    with pytest.raises(err):
        parse_tree(text)


def test_comments_and_roundtrip():
    src = parse_tree("# header\n- 0   # root\n\nL 7\n")
    assert src.key_at(NodePath((0,))) == 7
    again = parse_tree(format_tree(src.nodes))
    assert again.nodes == src.nodes


@pytest.mark.parametrize("name", FIXTURE_TREES)
def test_fixtures_load(name):
    src = load_tree_file(fixture_path(name))
    assert len(smallest_keys(src, 600)) == 600


def test_make_source():
    assert make_source(FamilySpec("two-path")).key_at(NodePath((1,))) == 2
    assert FamilySpec("median-game", n=8).label == "median-game:8"
    assert FamilySpec("from-file", path="/x/y.tree").label == "from-file:y.tree"
    with pytest.raises(InvalidParam):
        make_source(FamilySpec("median-game"))
    with pytest.raises(InvalidParam):
        make_source(FamilySpec("nope"))
