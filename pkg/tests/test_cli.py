from __future__ import annotations

import json
import subprocess
import sys

import pytest

from incpcst import build_instance, write_instance
from incpcst.cli import EXIT_ERROR, EXIT_OK, EXIT_VIOLATED, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_writes_artifacts(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "--gen", "fig5:eps=1/10", "-a", "tree-greedy",
                       "--out", str(tmp_path))
    assert code == EXIT_OK
    assert json.loads(out)["ordering"] == [1, 0]
    assert json.loads((tmp_path / "ordering.json").read_text()) == [1, 0]
    trace = [json.loads(x) for x in (tmp_path / "trace.jsonl").read_text().splitlines()]
    assert [r["edge"] for r in trace] == [1, 0]
    assert (tmp_path / "profile.csv").read_text().splitlines() == [
        "budget_num,budget_den,prize_num,prize_den", "0,1,0,1", "1,1,2,1", "11,10,21,10"
    ]


def test_solve_without_prizes(capsys, tmp_path):
    path = tmp_path / "bare.inst"
    write_instance(build_instance({0: 0, 1: 0}, [(0, 0, 1, 1)], 0), path)
    code, out, _ = run(capsys, "solve", "--input", str(path))
    assert code == EXIT_OK and json.loads(out)["ordering"] == []


def test_tree_greedy_rejects_cycles(capsys):
    code, _, err = run(capsys, "solve", "--gen", "fig7:eps=1/10", "-a", "tree-greedy")
    assert code == EXIT_ERROR
    assert json.loads(err)["error"] == "NotATree"


@pytest.mark.parametrize(
    "argv",
    [
        ("--gen", "fig6b:k=5", "-a", "tree-greedy", "--alpha", "chi", "--mu", "1"),
        ("--gen", "fig7:eps=1/10", "-a", "graph-greedy", "--alpha", "gamma", "--mu", "2"),
        ("--gen", "fig8:n=1", "-a", "capacity-scaling"),
        ("--gen", "random-graph:n=6,m=8", "--seed", "4", "-a", "capacity-scaling",
         "--alpha", "7chi", "--mu", "16/3"),
    ],
)
def test_verify_holds(capsys, argv):
    code, out, _ = run(capsys, "verify", *argv)
    assert code == EXIT_OK
    assert json.loads(out)["verdict"] == "holds"


def test_verify_violation_and_report(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--gen", "fig7:eps=1/10", "-a", "graph-greedy",
                       "--alpha", "chi", "--mu", "1000", "--out", str(tmp_path))
    assert code == EXIT_VIOLATED
    body = json.loads((tmp_path / "report.json").read_text())
    assert body["verdict"] == "violated" and body["min_mu"] == "inf"
    assert body["alpha"] == "31/10"
    assert (tmp_path / "profile.csv").read_text().startswith("B_num,B_den,opt_prize,alg_prize\n")


def test_frontier(capsys, tmp_path):
    code, out, _ = run(capsys, "frontier", "--gen", "fig1:chi=1,delta=1/100")
    assert code == EXIT_OK
    assert out.splitlines() == [
        "cost_num,cost_den,prize_num,prize_den", "0,1,0,1", "1,2,1,100", "1,1,1,1", "3,2,101,100"
    ]
    path = tmp_path / "lone.inst"
    write_instance(build_instance({0: 0}, [], 0), path)
    code, out, _ = run(capsys, "frontier", "--input", str(path), "--out", str(tmp_path / "o"))
    assert (tmp_path / "o" / "frontier.csv").read_text().splitlines()[1:] == ["0,1,0,1"]


def test_generate_round_trips(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "random-tree:n=6", "--seed", "3")
    assert code == EXIT_OK
    path = tmp_path / "t.inst"
    path.write_text(out)
    code, solved, _ = run(capsys, "solve", "--input", str(path), "-a", "tree-greedy")
    assert code == EXIT_OK and json.loads(solved)["ordering"]
    code, _, _ = run(capsys, "generate", "fig8:n=2", "--out", str(tmp_path) + "/")
    assert code == EXIT_OK and list(tmp_path.glob("fig8*.inst"))


def test_sweep(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--gen", "random-graph:n=5,m=7", "--seeds", "1-4",
                       "-a", "capacity-scaling", "--alpha", "3chi", "--mu", "8,1",
                       "--out", str(tmp_path))
    lines = out.splitlines()
    assert lines[0] == "seed,algorithm,alpha,mu,alpha_value,mu_value,verdict,min_mu"
    assert len(lines) == 1 + 8 + 1
    assert lines[-1].startswith("# ") and lines[-1].endswith(" hold")
    rows = [ln.split(",") for ln in lines[1:-1]]
    assert all(r[6] == "holds" for r in rows if r[3] == "8")
    assert all(r[6] in ("holds", "violated") for r in rows)
    assert code == (EXIT_OK if all(r[6] == "holds" for r in rows) else EXIT_VIOLATED)
    assert (tmp_path / "sweep.csv").exists()


@pytest.mark.parametrize(
    "argv, error",
    [
        (("solve",), "UsageError"),
        (("solve", "--gen", "nope"), "BadParameter"),
        (("solve", "--gen", "random-tree:n=5"), "BadParameter"),
        (("verify", "--gen", "fig5", "--alpha", "x"), "UsageError"),
        (("solve", "--gen", "random-graph:n=8,m=25", "--seed", "1"), "InstanceTooLarge"),
        (("bogus",), "UsageError"),
    ],
)
def test_errors_exit_two_with_json(capsys, argv, error):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_ERROR
    assert json.loads(err)["error"] == error


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "incpcst", "solve", "--gen", "fig8:n=1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ordering"] == [0, 1, 2]
