"""Explorable heap selection: labels revealed by walking, cost = edges walked."""
from ._jit import NUMBA_ENABLED
from .core import (
    Direction,
    DuplicateKey,
    ExplorationCursor,
    ExplorationError,
    HeapModelError,
    HeapViolation,
    InvalidParam,
    InvariantViolated,
    MoveUpAtRoot,
    NodePath,
    ParseError,
    PreconditionViolated,
    TargetNotFound,
    TravelMeter,
    WorkspaceLedger,
    workspace_scope,
)
from .generators import (
    FamilySpec,
    ValueSource,
    load_tree_file,
    make_source,
    median_game_source,
    parse_tree,
    random_increment_source,
    two_path_source,
)
from .oracle import oracle_select
from .prng import Rng
from .selection import RunReport, best_first_select, extend, select
from .subroutines import (
    NEG_INF,
    POS_INF,
    Bounds,
    RootsSample,
    counting_dfs,
    good_values,
    goto_value,
    sample_root,
    stream_sample,
)

__version__ = "0.1.0"
