import json
import os
import subprocess
import sys

import pytest

from ddcircuits import Digraph, build_reduction, format_instance, parse_instance_text
from ddcircuits.cli import main

SQUARE_TEXT = """2 0 4
1 0
0 1
-1 0
0 -1
1 1 0 0
-1 -2
"""

EDGE_OBJECTIVE_TEXT = SQUARE_TEXT.replace("-1 -2", "-1 0")

INFEASIBLE_TEXT = """1 0 2
1
-1
0 -1
-1
"""

TRIANGLE_GRAPH_TEXT = "3 3\n1 2\n2 3\n3 1\n"


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.lp"
    path.write_text(SQUARE_TEXT)
    return str(path)


@pytest.fixture
def triangle_graph_file(tmp_path):
    path = tmp_path / "triangle.graph"
    path.write_text(TRIANGLE_GRAPH_TEXT)
    return str(path)


class TestSolve:
    def test_optimal(self, square_file, capsys):
        assert main(["solve", square_file]) == 0
        out = capsys.readouterr().out
        assert "status: optimal" in out
        assert "x: 1 1" in out
        assert "value: -3" in out
        assert "unique: yes" in out

    def test_not_unique_reports_witness(self, tmp_path, capsys):
        path = tmp_path / "edge.lp"
        path.write_text(EDGE_OBJECTIVE_TEXT)
        assert main(["solve", str(path)]) == 0
        out = capsys.readouterr().out
        assert "unique: no" in out
        assert "witness:" in out

    def test_infeasible_exit_code(self, tmp_path, capsys):
        path = tmp_path / "empty.lp"
        path.write_text(INFEASIBLE_TEXT)
        assert main(["solve", str(path)]) == 4
        assert "infeasible" in capsys.readouterr().out

    def test_unbounded_exit_code(self, tmp_path, capsys):
        path = tmp_path / "ray.lp"
        path.write_text("1 0 1\n-1\n0\n-1\n")
        assert main(["solve", str(path)]) == 5
        assert "unbounded" in capsys.readouterr().out

    def test_json_mirror(self, square_file, capsys):
        assert main(["solve", square_file, "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc == {"status": "optimal", "unique": True, "value": "-3", "x": "1 1"}


class TestCircuits:
    def test_listing(self, square_file, capsys):
        assert main(["circuits", square_file]) == 0
        assert capsys.readouterr().out == "0 1\n1 0\n"


class TestDdStep:
    def test_reduce_then_exact_step(self, triangle_graph_file, tmp_path, capsys):
        lp_path = str(tmp_path / "triangle.lp")
        assert main(["reduce", triangle_graph_file, "-o", lp_path]) == 0
        assert main(["ddstep", lp_path, "--from", "zeros", "--mode", "exact"]) == 0
        out = capsys.readouterr().out
        assert "circuit: 1 1 1" in out
        assert "alpha: 1" in out
        assert "improvement: 31/8" in out

    def test_approx_mode(self, square_file, capsys):
        assert main(["ddstep", square_file, "--from", "0 0", "--mode", "approx"]) == 0
        assert "status: step" in capsys.readouterr().out

    def test_optimal_point(self, square_file, capsys):
        assert main(["ddstep", square_file, "--from", "1 1"]) == 0
        assert "status: optimal" in capsys.readouterr().out

    def test_from_file(self, square_file, tmp_path, capsys):
        pt = tmp_path / "start.pt"
        pt.write_text("0 1\n")
        assert main(["ddstep", square_file, "--from", str(pt)]) == 0
        assert "status: step" in capsys.readouterr().out


class TestOcnp:
    def test_exit_codes(self, square_file, tmp_path, capsys):
        assert main(["ocnp", square_file, "--from", "0 1"]) == 0
        assert main(["ocnp", square_file, "--from", "0 0"]) == 1
        assert main(["ocnp", square_file, "--from", "1 1"]) == 2
        edge = tmp_path / "edge.lp"
        edge.write_text(EDGE_OBJECTIVE_TEXT)
        assert main(["ocnp", str(edge), "--from", "0 0"]) == 3
        capsys.readouterr()


class TestDecompose:
    def test_square_diagonal(self, square_file, capsys):
        assert main(["decompose", square_file, "--from", "0 0", "--to", "1 1"]) == 0
        assert capsys.readouterr().out == "1 | 0 1\n1 | 1 0\n"


class TestAugment:
    def test_trace_csv(self, square_file, tmp_path, capsys):
        trace = tmp_path / "trace.csv"
        assert (
            main(
                [
                    "augment",
                    square_file,
                    "--from",
                    "0 0",
                    "--mode",
                    "exact",
                    "--trace",
                    str(trace),
                ]
            )
            == 0
        )
        out = capsys.readouterr().out
        assert "steps: 2" in out
        assert "final: 1 1" in out
        assert "objective: -3" in out
        body = trace.read_text()
        assert body.splitlines()[0] == "iteration,circuit,alpha,improvement,objective_after"
        assert body.splitlines()[1] == "1,0 1,1,2,-2"

    def test_json_mirror_includes_trace(self, square_file, capsys):
        assert main(["augment", square_file, "--from", "zeros", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["steps"] == 2
        assert doc["trace"][0] == {
            "iteration": 1,
            "circuit": [0, 1],
            "alpha": "1",
            "improvement": "2",
            "objective_after": "-2",
        }


class TestReduce:
    def test_output_matches_builder(self, triangle_graph_file, capsys):
        assert main(["reduce", triangle_graph_file]) == 0
        text = capsys.readouterr().out
        built = build_reduction(Digraph(3, ((1, 2), (2, 3), (3, 1)))).instance
        assert parse_instance_text(text) == built
        assert format_instance(built) == text

    def test_json_mirror(self, triangle_graph_file, capsys):
        assert main(["reduce", triangle_graph_file, "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)["instance"]
        assert doc["n"] == 3 and doc["m_A"] == 3 and doc["m_B"] == 6
        assert doc["c"] == ["-3/2", "-5/4", "-9/8"]
        assert doc["A"][0] == ["1", "0", "-1"]


class TestGraphCommands:
    def test_longest_cycle(self, triangle_graph_file, capsys):
        assert main(["longest-cycle", triangle_graph_file]) == 0
        out = capsys.readouterr().out
        assert "arcs: 1 2 3" in out
        assert "cost: 3" in out

    def test_longest_cycle_weighted(self, tmp_path, capsys):
        path = tmp_path / "w.graph"
        path.write_text("3 3\n1 2 3/2\n2 3 5/4\n3 1 9/8\n")
        assert main(["longest-cycle", str(path)]) == 0
        assert "cost: 31/8" in capsys.readouterr().out

    def test_no_cycle(self, tmp_path, capsys):
        path = tmp_path / "dag.graph"
        path.write_text("2 1\n1 2\n")
        assert main(["longest-cycle", str(path)]) == 0
        assert "no-cycle" in capsys.readouterr().out

    def test_verify(self, triangle_graph_file, capsys):
        assert main(["verify", triangle_graph_file]) == 0
        assert "correspondence: ok" in capsys.readouterr().out


class TestErrors:
    def test_parse_error_exit(self, tmp_path, capsys):
        path = tmp_path / "bad.lp"
        path.write_text("2 0 4\n1 x\n")
        assert main(["solve", str(path)]) == 64
        err = capsys.readouterr().err
        assert "line 2" in err

    def test_size_guard_exit(self, square_file, capsys):
        assert main(["circuits", square_file, "--work-budget", "0"]) == 66
        assert "work budget" in capsys.readouterr().err

    def test_bad_point_dimension(self, square_file, capsys):
        assert main(["ddstep", square_file, "--from", "1 2 3"]) == 64
        capsys.readouterr()


def _run_cli(args, hashseed):
    env = dict(os.environ)
    env["PYTHONHASHSEED"] = hashseed
    return subprocess.run(
        [sys.executable, "-m", "ddcircuits", *args],
        capture_output=True,
        env=env,
        check=True,
    ).stdout


class TestBench:
    def test_reproducible_bytes(self, tmp_path):
        first = _run_cli(["bench", "--nodes", "4", "--trials", "4", "--seed", "7"], "0")
        second = _run_cli(["bench", "--nodes", "4", "--trials", "4", "--seed", "7"], "1")
        assert first == second
        header = first.decode().splitlines()[0]
        assert header == (
            "graph_id,|V|,m,exact_improvement,approx_improvement,"
            "ratio,n_minus_rankA,exact_iters,approx_iters"
        )
        assert len(first.decode().splitlines()) == 5

    def test_no_floats_in_output(self):
        out = _run_cli(
            ["bench", "--nodes", "3", "--trials", "3", "--seed", "3"], "0"
        ).decode()
        assert "." not in out.replace("graph_id", "")

    def test_json_mirror(self, capsys):
        assert (
            main(["bench", "--nodes", "3", "--trials", "2", "--seed", "5", "--format", "json"])
            == 0
        )
        rows = json.loads(capsys.readouterr().out)["rows"]
        assert len(rows) == 2
        assert set(rows[0]) == {
            "graph_id",
            "|V|",
            "m",
            "exact_improvement",
            "approx_improvement",
            "ratio",
            "n_minus_rankA",
            "exact_iters",
            "approx_iters",
        }
