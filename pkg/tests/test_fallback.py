"""The pure-Python kernels must agree with the compiled ones bit for bit."""
import json
import os
import subprocess
import sys

import pytest

from explorable_heap import NUMBA_ENABLED

SCRIPT = r"""
import json
from explorable_heap import NUMBA_ENABLED, FamilySpec, Rng
from explorable_heap.experiments import run_trial
rows = []
for fam, n in [("random-increment", 1), ("random-increment", 37), ("two-path", 20),
               ("median-game", 35), ("random-increment", 150)]:
    spec = FamilySpec(fam, n=8 if fam == "median-game" else None)
    for algo in ("select", "best-first"):
        r = run_trial(spec, n, algo, 3)
        rows.append([fam, n, algo, r.result, r.travel, r.peak_workspace, r.outer_iterations])
rng = Rng(5)
rows.append([rng.next_u64(), rng.below(1000), Rng(5).spawn(1, 2).next_u64()])
print(json.dumps({"numba": NUMBA_ENABLED, "rows": rows}))
"""


def _run(disable: bool):
    env = dict(os.environ)
    env.pop("EXPLORABLE_HEAP_DISABLE_NUMBA", None)
    if disable:
        env["EXPLORABLE_HEAP_DISABLE_NUMBA"] = "1"
    proc = subprocess.run(
        [sys.executable, "-W", "error", "-c", SCRIPT],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(proc.stdout)


def test_fallback_flag_disables_numba():
    assert _run(True)["numba"] is False


@pytest.mark.skipif(not NUMBA_ENABLED, reason="numba unavailable or disabled")
def test_fallback_matches_compiled():
    compiled, fallback = _run(False), _run(True)
    assert compiled["numba"] is True
    assert compiled["rows"] == fallback["rows"]
