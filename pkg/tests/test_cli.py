import re

import pytest

from budgeted_shapley.cli import main
from budgeted_shapley.formats import parse_result

KNAPSACK = "version 1\nkind knapsack\nbin 1\nagent 1 2\nagent 1 1\n"
WMG = "version 1\nkind wmg\nquota 3\nagent 2\nagent 1\nagent 1\nlabel 1 big\n"


@pytest.fixture
def write(tmp_path):
    def _write(text, name="inst.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def strip_time(text):
    return re.sub(r"wall-time \S+", "wall-time -", text)


def test_value(write, capsys):
    path = write(KNAPSACK)
    assert main(["value", "--instance", path, "--agents", "2"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["value", "--instance", path, "--agents", ""]) == 0
    assert capsys.readouterr().out.strip() == "0"
    greedy = write("version 1\nkind greedy-knapsack\nbin 2\nagent 1 3\nagent 2 4\n", "greedy.txt")
    assert main(["value", "--instance", greedy, "--agents", "1,2"]) == 0
    assert capsys.readouterr().out.strip() == "4"
    assert main(["value", "--instance", greedy, "--agents", "3"]) == 2


def test_shapley_writes_result(write, tmp_path):
    out = tmp_path / "res.txt"
    assert main(["shapley", "--instance", write(KNAPSACK), "--algorithm", "vector-dp",
                 "--jobs", "1", "--out", str(out)]) == 0
    res = parse_result(out.read_text())
    assert [str(v) for v in res.values] == ["3/2", "1/2"]
    assert res.total == 2


def test_jobs_do_not_change_output(write, capsys):
    path = write("version 1\nkind knapsack\nbin 3\n" + "".join(f"agent {1 + j % 3} {j % 5}\n" for j in range(9)))
    outputs = []
    for jobs in ("1", "2", "1"):
        for algorithm in ("vector-dp", "monte-carlo"):
            assert main(["shapley", "--instance", path, "--algorithm", algorithm,
                         "--jobs", jobs, "--samples", "3000", "--seed", "7"]) == 0
            outputs.append(strip_time(capsys.readouterr().out))
    assert outputs[0] == outputs[2] == outputs[4]
    assert outputs[1] == outputs[3] == outputs[5]


def test_compare_passes(write, capsys):
    code = main(["compare", "--instance", write(WMG), "--algorithms", "engine,brute-subset,monte-carlo",
                 "--samples", "200", "--jobs", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "engine vs brute-subset" in out and "PASS" in out
    assert "big" in out


def test_compare_rounding_tolerance(write, capsys):
    path = write("version 1\nkind knapsack\nbin 2\nagent 1 40\nagent 2 33\nagent 1 17\n")
    assert main(["compare", "--instance", path, "--algorithms", "vector-dp,rounding",
                 "--epsilon", "1/2", "--jobs", "1"]) == 0
    assert "PASS" in capsys.readouterr().out


@pytest.mark.parametrize("algorithm", ["engine", "brute-permutation", "monte-carlo"])
def test_axioms(write, capsys, algorithm):
    code = main(["axioms", "--instance", write(WMG), "--algorithm", algorithm,
                 "--samples", "500", "--jobs", "1"])
    out = capsys.readouterr().out
    assert "efficiency" in out and "linearity" in out
    if algorithm == "monte-carlo":
        assert "estimate" in out
    else:
        assert code == 0 and "FAIL" not in out


def test_axioms_rounding(write, capsys):
    path = write("version 1\nkind knapsack\nbin 2\nagent 1 40\nagent 2 33\nagent 1 17\n")
    assert main(["axioms", "--instance", path, "--algorithm", "rounding", "--epsilon", "1", "--jobs", "1"]) == 0
    assert "rounded game" in capsys.readouterr().out


def test_input_errors(write, capsys):
    bad = write("version 1\nkind knapsack\nbin 2\nagent 3 1\n")
    assert main(["value", "--instance", bad]) == 2
    assert "agent 1: length 3 exceeds bin size 2" in capsys.readouterr().err
    assert main(["shapley", "--instance", write(WMG), "--algorithm", "vector-dp"]) == 2
    assert main(["shapley", "--instance", write(KNAPSACK), "--algorithm", "rounding"]) == 2
    assert main(["value", "--instance", "/nonexistent/file"]) == 2


def test_capacity_error(write, capsys):
    path = write("version 1\nkind knapsack\nbin 4\n" + "".join(f"agent 1 {j}\n" for j in range(1, 10)))
    assert main(["shapley", "--instance", path, "--algorithm", "vector-dp",
                 "--state-budget", "2", "--jobs", "1"]) == 3
    assert "state budget" in capsys.readouterr().err


def test_compare_failure_exit_code(write, capsys, monkeypatch):
    import budgeted_shapley.cli as cli

    real = cli.solve

    def skewed(kind, payload, algorithm, **kw):
        res = real(kind, payload, algorithm, **kw)
        if algorithm == "brute-subset":
            return type(res)(tuple(v + 1 for v in res.values), res.algorithm, res.parameters)
        return res

    monkeypatch.setattr(cli, "solve", skewed)
    assert main(["compare", "--instance", write(WMG), "--algorithms", "engine,brute-subset", "--jobs", "1"]) == 4
    assert "FAIL" in capsys.readouterr().out
