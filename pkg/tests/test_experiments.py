import csv
import io

import pytest

from explorable_heap import FamilySpec, InvalidParam
from explorable_heap.experiments import (
    AGGREGATE_FIELDS,
    TRIAL_FIELDS,
    ExperimentPlan,
    TrialFailed,
    aggregate,
    aggregate_csv,
    iteration_bound_check,
    parse_family,
    parse_plan,
    run_plan,
    run_trial,
    run_trials,
    travel_ratio,
    trials_csv,
)
from explorable_heap.oracle import oracle_select
from explorable_heap.generators import make_source

from conftest import fixture_path

FAMS = (FamilySpec("random-increment"), FamilySpec("two-path"))


def test_n1_plan():
    plan = ExperimentPlan(FAMS, (1,), trials=1, algorithms=("select", "best-first"))
    rows = run_plan(plan)
    assert len(rows) == 4
    assert all(r.mean_travel == 0 and r.travel_ratio is None for r in rows)


def test_csv_is_deterministic():
    plan = ExperimentPlan(FAMS, (16, 64), trials=3, algorithms=("select", "best-first"))
    a, b = run_trials(plan), run_trials(plan)
    assert trials_csv(a) == trials_csv(b)
    assert aggregate_csv(aggregate(a)) == aggregate_csv(aggregate(b))


def test_csv_shape():
    reports = run_trials(ExperimentPlan(FAMS, (8, 32), trials=2))
    text = trials_csv(reports)
    assert "\r" not in text
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == TRIAL_FIELDS
    assert len(rows) == 1 + 2 * 2 * 2
    agg = list(csv.reader(io.StringIO(aggregate_csv(aggregate(reports)))))
    assert tuple(agg[0]) == AGGREGATE_FIELDS
    assert [int(r[1]) for r in agg[1:]] == [8, 32, 8, 32]
    # mean columns are integers, the ratio has six decimals
    for r in agg[1:]:
        int(r[4]), int(r[6])
        assert len(r[9].split(".")[1]) == 6


def test_rows_reproduce_from_their_columns():
    for r in run_trials(ExperimentPlan(FAMS, (40,), trials=2, base_seed=10)):
        spec = FamilySpec(r.family)
        again = run_trial(spec, r.n, r.algorithm, r.seed)
        assert (again.travel, again.result) == (r.travel, r.result)
        assert r.result == oracle_select(make_source(FamilySpec(r.family, r.seed)), r.n)


def test_aggregate_sorted_by_n():
    rows = run_plan(ExperimentPlan((FamilySpec("two-path"),), (256, 4096)))
    assert [r.n for r in rows] == [256, 4096]


def test_travel_ratio():
    assert travel_ratio(10.0, 1) is None
    assert travel_ratio(8 * 27, 8) == pytest.approx(1.0)


def test_plan_validation():
    with pytest.raises(InvalidParam):
        ExperimentPlan(FAMS, (4, 2))
    with pytest.raises(InvalidParam):
        ExperimentPlan(FAMS, (0,))
    with pytest.raises(InvalidParam):
        ExperimentPlan(FAMS, (4,), trials=0)
    with pytest.raises(InvalidParam):
        ExperimentPlan(FAMS, (4,), algorithms=("quick",))
    with pytest.raises(InvalidParam):
        ExperimentPlan((), (4,))


def test_parse_family():
    assert parse_family("two-path") == FamilySpec("two-path")
    assert parse_family("median-game:16") == FamilySpec("median-game", n=16)
    assert parse_family("from-file:x.tree").path == "x.tree"
    for bad in ("nope", "median-game:x", "from-file:", "two-path:3"):
        with pytest.raises(InvalidParam):
            parse_family(bad)


def test_parse_plan():
    plan = parse_plan(
        "# demo\nfamilies = random-increment, median-game:8\n"
        "n_values = 4, 16\ntrials = 2\nalgorithms = select,best-first\nbase_seed = 7\n"
    )
    assert plan.n_values == (4, 16) and plan.trials == 2 and plan.base_seed == 7
    assert plan.families[1] == FamilySpec("median-game", n=8)
    for bad in ("families = two-path\n", "n_values = 4\n", "families = two-path\nn_values = x\n",
                "families = two-path\nn_values = 4\ncolour = red\n",
                "families = two-path\nfamilies = two-path\nn_values = 4\n"):
        with pytest.raises(InvalidParam):
            parse_plan(bad)


def test_trial_failure_carries_seed(tmp_path):
    bad = tmp_path / "bad.tree"
    bad.write_text("- 0\nL 4\nR 4\n")
    with pytest.raises(Exception) as info:
        run_trial(FamilySpec("from-file", path=str(bad)), 3, "select", 5)
    assert "4" in str(info.value)
    failed = TrialFailed(FamilySpec("two-path"), 3, "select", 11, ValueError("x"))
    assert "seed=11" in str(failed)


def test_iteration_bound_check_small():
    rep = iteration_bound_check(FamilySpec("random-increment"), 64, 100)
    assert len(rep.iterations) == 100
    assert all(1 <= i <= m for i, m in zip(rep.iterations, rep.roots_at_entry))
    assert rep.within(1.5)
    with pytest.raises(InvalidParam):
        iteration_bound_check(FamilySpec("two-path"), 64, 10)


def test_file_family_trial():
    r = run_trial(FamilySpec("from-file", path=fixture_path("figure1")), 12, "select", 0)
    assert r.result == 11 and r.family == "from-file:figure1.tree"
