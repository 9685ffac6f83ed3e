"""Wall-clock comparison of the compiled kernels and the pure-Python fallback.

Each mode runs in its own interpreter because the fallback is chosen at
import time by EXPLORABLE_HEAP_DISABLE_NUMBA. Compilation is warmed up
before timing. Results go to stdout as CSV.

    python3 benchmarks/bench_kernels.py --n 64 256 1024 --repeat 3
"""
import argparse
import csv
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from explorable_heap import NUMBA_ENABLED, FamilySpec
from explorable_heap.experiments import run_trial

ns, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
run_trial(FamilySpec("random-increment"), 16, "select", 0)
out = []
for n in ns:
    best = None
    for r in range(repeat):
        t = time.perf_counter()
        rep = run_trial(FamilySpec("random-increment"), n, "select", r)
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    out.append({"n": n, "seconds": best, "travel": rep.travel, "result": rep.result})
print(json.dumps({"numba": NUMBA_ENABLED, "rows": out}))
"""


def run_mode(disable: bool, ns, repeat):
    env = dict(os.environ)
    env.pop("EXPLORABLE_HEAP_DISABLE_NUMBA", None)
    if disable:
        env["EXPLORABLE_HEAP_DISABLE_NUMBA"] = "1"
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(ns), str(repeat)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(proc.stdout)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[64, 256, 1024])
    p.add_argument("--repeat", type=int, default=3, help="timed runs per n; the best is kept")
    args = p.parse_args(argv)

    compiled = run_mode(False, args.n, args.repeat)
    fallback = run_mode(True, args.n, args.repeat)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "travel", "numba_seconds", "python_seconds", "speedup", "same_result"])
    for a, b in zip(compiled["rows"], fallback["rows"]):
        w.writerow([
            a["n"], a["travel"], f"{a['seconds']:.4f}", f"{b['seconds']:.4f}",
            f"{b['seconds'] / a['seconds']:.1f}",
            a["result"] == b["result"] and a["travel"] == b["travel"],
        ])
    if not compiled["numba"]:
        print("note: numba unavailable, both columns ran the fallback", file=sys.stderr)


if __name__ == "__main__":
    main()
