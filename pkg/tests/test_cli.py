import subprocess
import sys

import pytest

from explorable_heap.cli import main
from explorable_heap.experiments import TRIAL_FIELDS


def _row(out):
    return dict(zip(TRIAL_FIELDS, out.strip().splitlines()[-1].split(",")))


def test_select_two_path(capsys):
    assert main(["select", "--family", "two-path", "--n", "5"]) == 0
    out = capsys.readouterr().out
    assert out.count("\n") == 1
    assert _row(out)["result_key"] == "4"


def test_select_best_first_same_result(capsys):
    main(["select", "--family", "two-path", "--n", "5", "--header"])
    sel = _row(capsys.readouterr().out)
    main(["select", "--family", "two-path", "--n", "5", "--algorithm", "best-first"])
    bf = _row(capsys.readouterr().out)
    assert sel["result_key"] == bf["result_key"] == "4"
    # at this size best-first is the cheaper walk; the crossover is near n = 1000
    assert int(bf["travel"]) < int(sel["travel"])


def test_select_heap_violation_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.tree"
    bad.write_text("- 0\nL -1\n")
    code = main(["select", "--family", "from-file", "--tree-file", str(bad), "--n", "2", "--seed", "3"])
    assert code == 1
    assert "seed=3" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["select", "--family", "from-file", "--n", "2"]) == 2
    assert main(["select", "--family", "two-path", "--n", "0"]) == 2
    assert main(["verify", "--trials", "0"]) == 2
    assert main(["bench", "--out", "a", "--out-aggregate", "b"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["select", "--family", "nope", "--n", "2"])
    assert info.value.code == 2


def test_verify(capsys):
    assert main(["verify", "--trials", "1", "--max-n", "1"]) == 0
    assert main(["verify", "--trials", "60", "--max-n", "200", "--seed", "1"]) == 0
    assert main(["verify", "--trials", "3", "--max-n", "16", "--inject-fault"]) == 1
    assert "FAIL" in capsys.readouterr().out


@pytest.mark.slow
def test_verify_full():
    assert main(["verify", "--trials", "500", "--max-n", "512", "--seed", "1"]) == 0


def test_bench_inline(tmp_path):
    out, agg = tmp_path / "t.csv", tmp_path / "a.csv"
    args = ["bench", "--family", "random-increment", "--family", "two-path", "--n", "16",
            "--trials", "2", "--out", str(out), "--out-aggregate", str(agg)]
    assert main(args) == 0
    first = out.read_bytes(), agg.read_bytes()
    assert main(args) == 0
    assert (out.read_bytes(), agg.read_bytes()) == first


def test_bench_plan_file(tmp_path):
    plan = tmp_path / "plan.txt"
    plan.write_text("families = two-path\nn_values = 256, 4096\n")
    out, agg = tmp_path / "t.csv", tmp_path / "a.csv"
    assert main(["bench", "--plan-file", str(plan), "--out", str(out), "--out-aggregate", str(agg)]) == 0
    lines = agg.read_text().splitlines()
    assert [l.split(",")[1] for l in lines[1:]] == ["256", "4096"]
    assert main(["bench", "--plan-file", str(tmp_path / "missing"), "--out", str(out),
                 "--out-aggregate", str(agg)]) == 2
    plan.write_text("families = two-path\n")
    assert main(["bench", "--plan-file", str(plan), "--out", str(out), "--out-aggregate", str(agg)]) == 2


def test_roots_demo(capsys):
    assert main(["roots-demo", "--trials", "600"]) == 0
    out = capsys.readouterr().out
    freqs = [float(l.split()[1]) for l in out.split("sampled")[1].splitlines()[1:]]
    assert len(freqs) == 6
    assert all(abs(f - 1 / 6) <= 0.05 for f in freqs)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "explorable_heap", "select", "--family", "two-path", "--n", "7"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.strip().split(",")[-1] == "6"
