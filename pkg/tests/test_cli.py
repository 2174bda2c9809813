import json

import pytest

from krsp_solver.cli import EXIT_ERROR, EXIT_INFEASIBLE, EXIT_SOLVED, build_parser, main, options_from_args
from krsp_solver.graph import parse_instance


@pytest.fixture
def fig1_file(tmp_path, fig1_text):
    path = tmp_path / "fig1.txt"
    path.write_text(fig1_text)
    return path


def test_solve_file(fig1_file, capsys):
    assert main(["--input", str(fig1_file)]) == EXIT_SOLVED
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "solved"
    assert payload["paths"] == [[0, 1, 4], [6]]
    assert (payload["totalCost"], payload["totalDelay"]) == (2, 4)
    assert payload["costEstimateUsed"] == 2
    assert payload["iterations"] == 1
    assert payload["wallTimeMs"] >= 0


def test_solve_with_trace(fig1_file, capsys):
    assert main(["--input", str(fig1_file), "--trace"]) == EXIT_SOLVED
    iterations = json.loads(capsys.readouterr().out)["iterations"]
    assert len(iterations) == 1
    assert iterations[0]["cycle"] == [2, 4, 3]
    assert iterations[0]["r"] == "-1/2"


def test_solve_infeasible(tmp_path, capsys):
    path = tmp_path / "single.txt"
    path.write_text("3 2 2 10\n0 1 1 1\n1 2 1 1\n")
    assert main(["--input", str(path)]) == EXIT_INFEASIBLE
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "infeasible"
    assert payload["paths"] == []
    assert payload["totalCost"] is None


def test_delay_bound_override(fig1_file, capsys):
    assert main(["--input", str(fig1_file), "--delay-bound", "5"]) == EXIT_SOLVED
    payload = json.loads(capsys.readouterr().out)
    assert payload["paths"] == [[0, 1, 2, 3], [6]]
    assert payload["iterations"] == 0


def test_scaled_mode(fig1_file, capsys):
    assert main(["--input", str(fig1_file), "--mode", "scaled", "--eps", "0.5"]) == EXIT_SOLVED
    payload = json.loads(capsys.readouterr().out)
    assert payload["totalDelay"] <= 6
    assert payload["totalCost"] <= 5


def test_missing_file(tmp_path, capsys):
    assert main(["--input", str(tmp_path / "nope.txt")]) == EXIT_ERROR
    assert "krsp: error:" in capsys.readouterr().err


def test_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("3 1 1 0\n0 1 -1 0\n")
    assert main(["--input", str(path)]) == EXIT_ERROR
    assert "line 2" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["--input"],
        ["--input", "x", "--gen", "4,5,5,5,2,1"],
        ["--input", "x", "--mode", "fast"],
    ],
)
def test_bad_flags_exit_with_error_code(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    assert excinfo.value.code == EXIT_ERROR


def test_scaled_mode_rejects_zero_epsilon(fig1_file, capsys):
    assert main(["--input", str(fig1_file), "--mode", "scaled", "--eps", "0"]) == EXIT_ERROR
    assert "epsilon" in capsys.readouterr().err


def test_gen_emit_instance(capsys):
    assert main(["--gen", "5,8,5,5,2,3", "--delay-bound", "7", "--emit-instance"]) == EXIT_SOLVED
    inst = parse_instance(capsys.readouterr().out)
    assert (inst.n, inst.m, inst.k, inst.D) == (5, 8, 2, 7)


def test_gen_bad_spec(capsys):
    assert main(["--gen", "5,8"]) == EXIT_ERROR
    assert "--gen needs" in capsys.readouterr().err


def test_options_from_args():
    args = build_parser().parse_args(
        ["--input", "x", "--eps", "1/4", "--eps2", "1/3", "--no-refine", "--max-iterations", "9"]
    )
    opts = options_from_args(args)
    assert str(opts.epsilon1) == "1/4"
    assert str(opts.epsilon2) == "1/3"
    assert opts.refine_estimate is False
    assert opts.max_iterations == 9


def test_bench_empty_directory(tmp_path, capsys):
    assert main(["--bench", str(tmp_path)]) == EXIT_SOLVED
    assert "solved 0/0" in capsys.readouterr().out


def test_bench_json(tmp_path, fig1_text, capsys):
    (tmp_path / "fig1.txt").write_text(fig1_text)
    assert main(["--bench", str(tmp_path), "--json"]) == EXIT_SOLVED
    report = json.loads(capsys.readouterr().out)
    (row,) = report["rows"]
    assert row["name"] == "fig1.txt"
    assert (row["c_opt"], row["cost"]) == (2, 2)
    assert report["summary"]["auditFailures"] == 0


def test_bench_measure_lp(tmp_path, fig1_text, capsys):
    cases = tmp_path / "cases"
    cases.mkdir()
    (cases / "fig1.txt").write_text(fig1_text)
    archive = tmp_path / "misses"
    assert main(["--bench", str(cases), "--json", "--measure-lp", str(archive)]) == EXIT_SOLVED
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["lpMisses"] == 0
