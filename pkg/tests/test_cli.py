"""The stvm command: run, check, bench."""

import json

import pytest

from spacetime_vm import assets, cli

GOOD = "proc main = LMax x world_line = 0; x <- 2; probe(read x)"
BAD = "proc main = probe(read ghost)"
STOPPING = "proc main = space nothing end; stop"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# --- check --------------------------------------------------------------------

def test_check_accepts_a_clean_program(tmp_path, capsys):
    path = write(tmp_path, "good.st", GOOD)
    assert cli.main(["check", path]) == 0
    assert "ok" in capsys.readouterr().out


def test_check_reports_diagnostics_and_fails(tmp_path, capsys):
    path = write(tmp_path, "bad.st", BAD)
    assert cli.main(["check", path]) == 1
    err = capsys.readouterr().err
    assert "E-UNBOUND" in err and "ghost" in err


def test_check_every_bundled_program(tmp_path):
    for name in assets.ASSETS:
        path = write(tmp_path, f"{name}.st", assets.asset_source(name))
        assert cli.main(["check", path]) == 0


# --- run ----------------------------------------------------------------------

def test_run_prints_a_summary_and_exits_zero(tmp_path, capsys):
    path = write(tmp_path, "good.st", GOOD)
    assert cli.main(["run", path, "--watch", "x"]) == 0
    out = capsys.readouterr().out
    assert "completion=terminated" in out
    assert "x=2" in out


def test_run_rejects_bad_programs(tmp_path, capsys):
    path = write(tmp_path, "bad.st", BAD)
    assert cli.main(["run", path]) == 1
    assert "E-UNBOUND" in capsys.readouterr().err


def test_run_exit_code_two_on_stop(tmp_path):
    path = write(tmp_path, "stopping.st", STOPPING)
    assert cli.main(["run", path]) == 2


def test_run_json_shape(tmp_path, capsys):
    path = write(tmp_path, "good.st", GOOD)
    assert cli.main(["run", path, "--json", "--watch", "x", "--trace"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["completion"] == "terminated"
    assert payload["instants"] == 1
    assert payload["watch"] == {"x": "2"}
    assert payload["trace"][0]["node"] == 0


def test_run_accepts_inputs(tmp_path, capsys):
    src = "proc main = LMax x world_line = 0; probe(read x)"
    path = write(tmp_path, "inp.st", src)
    assert cli.main(["run", path, "--input", "x=41", "--watch", "x"]) == 0
    assert "x=41" in capsys.readouterr().out


def test_run_rejects_unknown_input_name(tmp_path, capsys):
    path = write(tmp_path, "good.st", GOOD)
    assert cli.main(["run", path, "--input", "zzz=1"]) == 1
    assert "zzz" in capsys.readouterr().err


def test_run_trace_lists_every_instant(tmp_path, capsys):
    src = ("proc main = LMax x world_line = 0; run binary(x)\n"
           "proc binary(x) = loop space x <- 1 end; space x <- 2 end; pause end")
    path = write(tmp_path, "tree.st", src)
    assert cli.main(["run", path, "--max-instants", "3", "--trace"]) == 0
    out = capsys.readouterr().out
    assert out.count("instant=") == 3
    assert "exhausted=yes" in out


def test_missing_file_is_a_clean_error(capsys):
    assert cli.main(["run", "/no/such/file.st"]) == 1
    assert "error" in capsys.readouterr().err


# --- bench ----------------------------------------------------------------------

def test_bench_reports_a_match(capsys):
    assert cli.main(["bench", "queens", "4"]) == 0
    out = capsys.readouterr().out
    assert "match=yes" in out
    assert "nodes=11" in out and "ref_nodes=11" in out
    assert "solutions=2" in out


def test_bench_json(capsys):
    assert cli.main(["bench", "queens", "5", "--strategy", "first",
                     "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["match"] is True
    assert payload["solutions"] == 1
    assert payload["nodes"] == payload["ref_nodes"]


def test_bench_minimize(capsys):
    assert cli.main(["bench", "golomb", "5", "--strategy", "minimize",
                     "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["best_objective"] == 11
    assert payload["match"] is True


def test_bench_minimize_needs_an_objective(capsys):
    assert cli.main(["bench", "queens", "4", "--strategy", "minimize"]) == 1
    assert "objective" in capsys.readouterr().err


def test_bench_unknown_problem(capsys):
    assert cli.main(["bench", "knapsack", "3"]) == 1
    assert "unknown problem" in capsys.readouterr().err


def test_bench_reads_problem_files(tmp_path, capsys):
    text = "var 0 1..3\nvar 1 1..3\nne 0 1 0\n"
    path = write(tmp_path, "toy.csp", text)
    assert cli.main(["bench", path, "0", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["problem"] == "toy"
    assert payload["solutions"] == 6
    assert payload["match"] is True


def test_bench_plot_writes_figures_and_trace(tmp_path, capsys):
    plots = tmp_path / "figs"
    assert cli.main(["bench", "queens", "4", "--plot", str(plots)]) == 0
    out = capsys.readouterr().out
    names = {p.name for p in plots.iterdir()}
    assert names == {"queens-4_all_profile.png", "queens-4_all_depth.png",
                     "queens-4_all_trace.csv"}
    assert out.count("wrote ") == 3
    trace = (plots / "queens-4_all_trace.csv").read_text().splitlines()
    assert trace[0] == "instant,node,parent,depth,code,children,pruned"
    assert len(trace) == 12  # header + one row per node
