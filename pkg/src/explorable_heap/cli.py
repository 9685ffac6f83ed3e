"""Command-line front end.

Exit codes: 0 success, 1 runtime or model failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter
from importlib import resources
from pathlib import Path

from .core import ExplorationCursor, HeapModelError, InvalidParam
from .experiments import (
    ALGORITHMS,
    ExperimentPlan,
    aggregate,
    aggregate_csv,
    parse_family,
    parse_plan,
    run_trial,
    run_trials,
    trials_csv,
    write_csv,
)
from .generators import FAMILIES, FamilySpec, load_tree_file, make_source
from .oracle import active_roots, oracle_select
from .prng import Rng
from .subroutines import POS_INF, Bounds, sample_root


class UsageError(Exception):
    pass


def _family_spec(args) -> FamilySpec:
    if args.family == "median-game":
        return FamilySpec("median-game", args.seed, n=args.game_n)
    if args.family == "from-file":
        if not args.tree_file:
            raise UsageError("--family from-file needs --tree-file")
        return FamilySpec("from-file", args.seed, path=args.tree_file)
    return FamilySpec(args.family, args.seed)


def cmd_select(args) -> int:
    spec = _family_spec(args)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    report = run_trial(spec, args.n, args.algorithm, args.seed)
    text = trials_csv([report])
    sys.stdout.write(text if args.header else text.split("\n", 1)[1])
    return 0


def _verify_instance(rng: Rng, max_n: int) -> tuple[FamilySpec, int]:
    pick = rng.below(4)
    seed = rng.below(1 << 31)
    if pick == 0:
        spec = FamilySpec("two-path", seed)
    elif pick == 1:
        spec = FamilySpec("median-game", seed, n=(8, 16)[rng.below(2)])
    else:
        spec = FamilySpec("random-increment", seed)
    return spec, 1 + rng.below(max_n)


def cmd_verify(args) -> int:
    if args.trials < 1 or args.max_n < 1:
        raise UsageError("--trials and --max-n must be at least 1")
    rng = Rng(args.seed)
    for t in range(args.trials):
        spec, n = _verify_instance(rng, args.max_n)
        report = run_trial(spec, n, "select", spec.seed)
        expected = oracle_select(make_source(spec), n)
        agree = report.result == expected
        if args.inject_fault:
            agree = not agree
        if not agree:
            print(
                f"FAIL trial {t}: family={spec.label} seed={spec.seed} n={n} "
                f"select={report.result} oracle={expected}"
            )
            return 1
    print(f"PASS {args.trials} instances (max n {args.max_n}, seed {args.seed})")
    return 0


def cmd_bench(args) -> int:
    if args.plan_file:
        try:
            text = Path(args.plan_file).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read plan: {exc}") from None
        plan = parse_plan(text)
    else:
        if not args.family or not args.n:
            raise UsageError("give --plan-file or at least --family and --n")
        plan = ExperimentPlan(
            families=tuple(parse_family(f) for f in args.family),
            n_values=tuple(sorted(args.n)),
            trials=args.trials,
            algorithms=tuple(args.algorithm or ["select"]),
            base_seed=args.base_seed,
        )
    reports = run_trials(plan)
    write_csv(args.out, trials_csv(reports))
    write_csv(args.out_aggregate, aggregate_csv(aggregate(reports)))
    return 0


def figure1_path() -> str:
    return str(resources.files("explorable_heap") / "data" / "figure1.tree")


def cmd_roots_demo(args) -> int:
    source = load_tree_file(args.tree_file or figure1_path())
    lower = args.l0 if args.lower is None else args.lower
    upper = POS_INF if args.upper is None else args.upper
    roots = active_roots(source, args.l0, lower, upper)
    print(f"active roots for l0={args.l0} bounds=({lower}, {'inf' if upper == POS_INF else upper}):")
    for path, key in roots:
        print(f"  {str(path):<8} {key}")
    counts: Counter = Counter()
    rng = Rng(args.seed)
    for _ in range(args.trials):
        cursor = ExplorationCursor(source)
        pick = sample_root(cursor, args.l0, Bounds(lower, upper), 1 << 20, rng)
        counts[pick.chosen_key] += 1
    print(f"sampled {args.trials} times:")
    for _, key in roots:
        print(f"  {key:<8} {counts[key] / args.trials:.3f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="explorable-heap",
        description="Selection in explorable heaps: runs, verification and benchmarks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("select", help="run one selection and print its CSV row")
    s.add_argument("--family", required=True, choices=FAMILIES)
    s.add_argument("--seed", type=int, default=0, help="tree and random-stream seed (default 0)")
    s.add_argument("--n", type=int, required=True, help="rank to select (1 = smallest)")
    s.add_argument("--algorithm", choices=ALGORITHMS, default="select", help="default: select")
    s.add_argument("--tree-file", help="tree file for --family from-file")
    s.add_argument("--game-n", type=int, default=8, help="median-game size (default 8)")
    s.add_argument("--header", action="store_true", help="also print the CSV header")
    s.set_defaults(func=cmd_select)

    v = sub.add_parser("verify", help="compare select against the oracle on random instances")
    v.add_argument("--trials", type=int, default=100, help="instances to run (default 100)")
    v.add_argument("--max-n", type=int, default=512, help="largest rank drawn (default 512)")
    v.add_argument("--seed", type=int, default=1, help="instance-stream seed (default 1)")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run an experiment plan and write CSV files")
    b.add_argument("--plan-file", help="key = value plan file (overrides inline flags)")
    b.add_argument("--family", action="append",
                   help="family token, repeatable: random-increment, two-path, "
                        "median-game:N, from-file:PATH")
    b.add_argument("--n", type=int, nargs="+", help="ranks to run")
    b.add_argument("--trials", type=int, default=1, help="trials per (family, n) (default 1)")
    b.add_argument("--algorithm", action="append", choices=ALGORITHMS,
                   help="repeatable; default select")
    b.add_argument("--base-seed", type=int, default=0, help="seed of trial 0 (default 0)")
    b.add_argument("--out", required=True, help="per-trial CSV path")
    b.add_argument("--out-aggregate", required=True, help="aggregate CSV path")
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("roots-demo", help="enumerate and sample active roots on a fixture")
    r.add_argument("--tree-file", help="tree file (default: bundled figure1.tree)")
    r.add_argument("--l0", type=int, default=4, help="region bound (default 4)")
    r.add_argument("--lower", type=int, help="certified lower bound (default l0)")
    r.add_argument("--upper", type=int, help="certified upper bound (default +inf)")
    r.add_argument("--trials", type=int, default=1000, help="sampling rounds (default 1000)")
    r.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    r.set_defaults(func=cmd_roots_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidParam) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except HeapModelError as exc:
        seed = getattr(args, "seed", None)
        print(f"model violation: {exc} [seed={seed}]", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
