"""Batch runs, aggregation and CSV output.

Trial ``t`` of a plan uses seed ``base_seed + t`` both for the tree (seeded
families) and for the algorithm's random stream, so any CSV row can be
re-run from its own columns.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence

from .core import ExplorationCursor, HeapModelError, InvalidParam
from .generators import FAMILIES, FamilySpec, make_source
from .oracle import active_roots
from .selection import RunReport, best_first_select, select
from .subroutines import POS_INF

ALGORITHMS = ("select", "best-first")

TRIAL_FIELDS = (
    "family", "seed", "n", "algorithm", "travel", "peak_workspace",
    "outer_iterations", "recursive_calls", "result_key",
)
AGGREGATE_FIELDS = (
    "family", "n", "algorithm", "trials", "mean_travel", "max_travel",
    "mean_peak_workspace", "mean_outer_iterations", "mean_recursive_calls",
    "travel_ratio",
)


class TrialFailed(HeapModelError):
    """A model violation during one trial, tagged with what reproduces it."""

    def __init__(self, spec: FamilySpec, n: int, algorithm: str, seed: int, cause: Exception):
        self.spec, self.n, self.algorithm, self.seed, self.cause = spec, n, algorithm, seed, cause
        super().__init__(
            f"{type(cause).__name__}: {cause} "
            f"(family={spec.label} seed={seed} n={n} algorithm={algorithm})"
        )


@dataclass(frozen=True)
class ExperimentPlan:
    families: tuple
    n_values: tuple
    trials: int = 1
    algorithms: tuple = ("select",)
    base_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParam("trials must be at least 1")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise InvalidParam("n values must be positive")
        if list(self.n_values) != sorted(self.n_values):
            raise InvalidParam("n values must be sorted ascending")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise InvalidParam(f"unknown algorithm {a!r}")
        if not self.families:
            raise InvalidParam("plan lists no families")


@dataclass
class AggregateRow:
    family: str
    n: int
    algorithm: str
    trials: int
    mean_travel: float
    max_travel: int
    mean_peak_workspace: float
    mean_outer_iterations: float
    mean_recursive_calls: float
    travel_ratio: float | None


def travel_ratio(mean_travel: float, n: int) -> float | None:
    if n < 2:
        return None
    return mean_travel / (n * math.log2(n) ** 3)


def run_trial(spec: FamilySpec, n: int, algorithm: str, seed: int, assertions: bool = True) -> RunReport:
    """One run on a fresh cursor; the trial seed also seeds the tree."""
    source = make_source(replace(spec, seed=seed))
    cursor = ExplorationCursor(source)
    try:
        if algorithm == "select":
            report = select(cursor, n, seed, assertions=assertions)
        elif algorithm == "best-first":
            report = best_first_select(cursor, n)
        else:
            raise InvalidParam(f"unknown algorithm {algorithm!r}")
    except HeapModelError as exc:
        raise TrialFailed(spec, n, algorithm, seed, exc) from exc
    return replace(report, seed=seed, family=spec.label)


def run_trials(plan: ExperimentPlan) -> list[RunReport]:
    reports = []
    for spec in plan.families:
        for algorithm in plan.algorithms:
            for n in plan.n_values:
                for t in range(plan.trials):
                    reports.append(run_trial(spec, n, algorithm, plan.base_seed + t))
    reports.sort(key=lambda r: (r.family, r.algorithm, r.n, r.seed))
    return reports


def aggregate(reports: Iterable[RunReport]) -> list[AggregateRow]:
    groups: dict[tuple, list[RunReport]] = {}
    for r in reports:
        groups.setdefault((r.family, r.algorithm, r.n), []).append(r)
    rows = []
    for (family, algorithm, n), rs in sorted(groups.items()):
        mean_travel = fmean(r.travel for r in rs)
        rows.append(AggregateRow(
            family=family,
            n=n,
            algorithm=algorithm,
            trials=len(rs),
            mean_travel=mean_travel,
            max_travel=max(r.travel for r in rs),
            mean_peak_workspace=fmean(r.peak_workspace for r in rs),
            mean_outer_iterations=fmean(r.outer_iterations for r in rs),
            mean_recursive_calls=fmean(r.recursive_calls for r in rs),
            travel_ratio=travel_ratio(mean_travel, n),
        ))
    return rows


def run_plan(plan: ExperimentPlan) -> list[AggregateRow]:
    return aggregate(run_trials(plan))


def _int(x) -> str:
    return str(int(round(x)))


def trials_csv(reports: Sequence[RunReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIAL_FIELDS)
    for r in reports:
        w.writerow([
            r.family, r.seed, r.n, r.algorithm, r.travel, r.peak_workspace,
            r.outer_iterations, r.recursive_calls, r.result,
        ])
    return buf.getvalue()


def aggregate_csv(rows: Sequence[AggregateRow]) -> str:
    """Means are rounded to integers; only travel_ratio keeps 6 decimals."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AGGREGATE_FIELDS)
    for row in rows:
        w.writerow([
            row.family, row.n, row.algorithm, row.trials,
            _int(row.mean_travel), row.max_travel, _int(row.mean_peak_workspace),
            _int(row.mean_outer_iterations), _int(row.mean_recursive_calls),
            "" if row.travel_ratio is None else f"{row.travel_ratio:.6f}",
        ])
    return buf.getvalue()


def write_csv(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="")


@dataclass
class IterationReport:
    family: str
    n: int
    trials: int
    roots_at_entry: list = field(default_factory=list)
    iterations: list = field(default_factory=list)

    @property
    def mean_iterations(self) -> float:
        return fmean(self.iterations)

    @property
    def mean_roots(self) -> float:
        return fmean(self.roots_at_entry)

    @property
    def bound(self) -> float:
        """2 log2(mean m) + 2."""
        return 2 * math.log2(self.mean_roots) + 2

    def within(self, slack: float = 1.5) -> bool:
        return self.mean_iterations <= slack * self.bound


def iteration_bound_check(spec: FamilySpec, n: int, trials: int, base_seed: int = 0) -> IterationReport:
    """Outer-loop iterations of the final top-level extend call (target n) per trial.

    That call's active-root count at entry is the ``m`` of the iteration
    bound.
    """
    if n < 2:
        raise InvalidParam("n must be at least 2")
    if trials < 100:
        raise InvalidParam("the bound check needs at least 100 trials")
    report = IterationReport(spec.label, n, trials)
    for t in range(trials):
        run = run_trial(spec, n, "select", base_seed + t)
        last = run.entries[-1]
        report.roots_at_entry.append(last.roots_at_entry)
        report.iterations.append(last.iterations)
    return report


def entry_roots_by_oracle(spec: FamilySpec, seed: int, l0: int) -> int:
    """Active-root count at an extend entry, enumerated directly."""
    source = make_source(replace(spec, seed=seed))
    return len(active_roots(source, l0, l0, POS_INF))


def parse_family(token: str, seed: int = 0) -> FamilySpec:
    """``random-increment``, ``two-path``, ``median-game:N`` or ``from-file:PATH``."""
    name, _, arg = token.partition(":")
    if name not in FAMILIES:
        raise InvalidParam(f"unknown family {name!r}")
    if name == "median-game":
        try:
            return FamilySpec(name, seed, n=int(arg))
        except ValueError:
            raise InvalidParam("median-game needs a size, e.g. median-game:8") from None
    if name == "from-file":
        if not arg:
            raise InvalidParam("from-file needs a path, e.g. from-file:tree.txt")
        return FamilySpec(name, seed, path=arg)
    if arg:
        raise InvalidParam(f"family {name} takes no parameter")
    return FamilySpec(name, seed)


def parse_plan(text: str) -> ExperimentPlan:
    """Flat ``key = value`` plan file; lists are comma separated.

    Keys: families, n_values, trials, algorithms, base_seed.
    """
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in ("families", "n_values", "trials", "algorithms", "base_seed"):
            raise InvalidParam(f"plan line {lineno}: expected one of the plan keys as 'key = value'")
        if key in fields:
            raise InvalidParam(f"plan line {lineno}: {key} given twice")
        fields[key] = value.strip()
    if "families" not in fields or "n_values" not in fields:
        raise InvalidParam("plan needs families and n_values")

    def items(v):
        return [x.strip() for x in v.split(",") if x.strip()]

    try:
        return ExperimentPlan(
            families=tuple(parse_family(f) for f in items(fields["families"])),
            n_values=tuple(int(x) for x in items(fields["n_values"])),
            trials=int(fields.get("trials", "1")),
            algorithms=tuple(items(fields.get("algorithms", "select"))),
            base_seed=int(fields.get("base_seed", "0")),
        )
    except ValueError as exc:
        if isinstance(exc, InvalidParam):
            raise
        raise InvalidParam(f"plan: {exc}") from None
