from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from binomial_betti.cli import cmd_verify, main, render_table
from binomial_betti.graph import Graph
from binomial_betti.koszul import BettiTable
from binomial_betti.reference import DOUBLE_FORK_TABLE
from conftest import cycle, path, star

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    got = capsys.readouterr()
    return code, got.out, got.err


def line_starting(text: str, head: str) -> list[str]:
    return next(line.split() for line in text.splitlines() if line.split()[:1] == [head])


# rendering ---------------------------------------------------------------------------


def test_render_table_layout():
    text = render_table(DOUBLE_FORK_TABLE)
    lines = text.splitlines()
    assert lines[0].split() == ["0", "1", "2", "3", "4", "5"]
    assert lines[1].split() == ["total:", "6", "20", "41", "43", "21", "4"]
    assert lines[2].split() == ["2:", "6", ".", ".", ".", ".", "."]
    assert lines[3].split() == ["3:", ".", "20", "12", "3", ".", "."]
    assert lines[4].split() == ["4:", ".", ".", "29", "40", "21", "4"]
    assert len({len(line) for line in lines}) == 1  # right-aligned columns
    assert render_table(BettiTable()).strip() == "(zero ideal)"


# betti -------------------------------------------------------------------------------


def test_betti_double_fork_tree(capsys):
    code, out, _ = run(capsys, "betti", "--graph", str(GRAPHS / "double_fork_tree.txt"))
    assert code == 0
    assert line_starting(out, "total:") == ["total:", "6", "20", "41", "43", "21", "4"]
    assert "# source:" in out and "oracle" not in out.split("# source:")[1].splitlines()[0]


def test_betti_oracle_and_verify(tmp_graph, capsys):
    g = tmp_graph(path(4))
    code, out, _ = run(capsys, "betti", "--graph", g, "--method", "oracle")
    assert code == 0 and "Koszul oracle" in out
    assert line_starting(out, "total:") == ["total:", "3", "3", "1"]
    code, out, _ = run(capsys, "betti", "--graph", g, "--verify", "--second-prime")
    assert code == 0
    assert "formula and oracle agree" in out and "same table over GF(32749)" in out


def test_betti_edgeless(capsys):
    code, out, _ = run(capsys, "betti", "--graph", str(GRAPHS / "edgeless3.txt"))
    assert code == 0 and "(zero ideal)" in out


def test_betti_formula_needs_a_family(capsys):
    code, _, err = run(capsys, "betti", "--graph", str(GRAPHS / "cycle4.txt"), "--method", "formula")
    assert code == 2 and "no formula" in err
    code, out, _ = run(capsys, "betti", "--graph", str(GRAPHS / "cycle4.txt"))
    assert code == 0 and "Koszul oracle" in out


def test_betti_json(tmp_graph, capsys):
    g = tmp_graph(star(4))
    code, out, _ = run(capsys, "betti", "--graph", g, "--format", "json", "--method", "oracle")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) >= {"n", "field", "window", "truncated", "entries", "reg", "pd"}
    assert doc["n"] == 4 and doc["field"] == 32003 and doc["truncated"] is False
    assert doc["entries"] == [{"i": 0, "j": 2, "beta": 3}, {"i": 1, "j": 4, "beta": 4}, {"i": 2, "j": 5, "beta": 2}]
    assert (doc["reg"], doc["pd"]) == (3, 2)
    assert doc["window"] == {"i_max": 8, "j_max": 10}
    _, again, _ = run(capsys, "betti", "--graph", g, "--format", "json", "--method", "oracle")
    assert again == out


def test_betti_window_and_strict(tmp_graph, capsys):
    g = tmp_graph(cycle(4))
    code, out, _ = run(capsys, "betti", "--graph", g, "--max-i", "1", "--max-j", "4")
    assert code == 0 and "window may cut off" in out
    code, _, _ = run(capsys, "betti", "--graph", g, "--max-i", "1", "--max-j", "4", "--strict")
    assert code == 1


def test_betti_field_from_environment(tmp_graph, capsys, monkeypatch):
    g = tmp_graph(path(3))
    monkeypatch.setenv("BINOMIAL_BETTI_PRIME", "101")
    code, out, _ = run(capsys, "betti", "--graph", g, "--format", "json")
    assert code == 0 and json.loads(out)["field"] == 101
    code, out, _ = run(capsys, "betti", "--graph", g, "--format", "json", "--field", "7")
    assert json.loads(out)["field"] == 7


@pytest.mark.parametrize(
    "argv",
    [
        ["betti"],
        ["betti", "--graph", "/nonexistent/graph.txt"],
        ["betti", "--graph", "GRAPH", "--field", "9"],
        ["betti", "--graph", "GRAPH", "--field", "2"],
        ["betti", "--graph", "GRAPH", "--max-i", "3"],
        ["betti", "--graph", "GRAPH", "--max-i", "0", "--max-j", "3"],
        ["betti", "--graph", "GRAPH", "--method", "magic"],
        ["split", "edge", "--graph", "GRAPH"],
        ["split", "edge", "--graph", "GRAPH", "--edge", "1-3"],
        ["split", "edge", "--graph", "GRAPH", "--edge", "1,3"],
        ["split", "vertex", "--graph", "GRAPH"],
        ["split", "vertex", "--graph", "GRAPH", "--vertex", "9"],
        ["split", "custom", "--graph", "GRAPH"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, tmp_graph, capsys):
    g = tmp_graph(path(3))
    code, _, _ = run(capsys, *[g if a == "GRAPH" else a for a in argv])
    assert code == 2


def test_malformed_graph_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n1 4\n")
    code, _, err = run(capsys, "betti", "--graph", str(bad))
    assert code == 2 and "error" in err


# split -------------------------------------------------------------------------------


def test_split_cycle_vertex(capsys):
    code, out, _ = run(capsys, "split", "vertex", "--vertex", "1", "--graph", str(GRAPHS / "cycle4.txt"))
    assert code == 0
    assert "complete; guaranteed (0,0)" in out
    assert "Betti table of J ∩ K" in out and "residual delta: zero" in out


def test_split_pendant_edge(capsys):
    code, out, _ = run(capsys, "split", "edge", "--edge", "3,4", "--graph", str(GRAPHS / "path4.txt"))
    assert code == 0
    assert "complete; guaranteed (0,0)" in out and "pendant edge" in out


def test_split_triangle_vertex_json(tmp_graph, capsys):
    G = Graph.from_edges(4, [(1, 2), (1, 3), (2, 3), (3, 4)])
    code, out, _ = run(capsys, "split", "vertex", "--vertex", "3", "--graph", tmp_graph(G), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["partition"]["kind"] == "vertex" and doc["partition"]["pivot"] == 3
    assert doc["guarantee"] == [3, 4] and doc["guarantee_holds"] is True
    assert set(doc["tables"]) == {"I", "J", "K", "JK"}
    assert all(d["delta"] > 0 for d in doc["delta"])


def test_split_custom(tmp_graph, tmp_path, capsys):
    g = tmp_graph(cycle(4))
    part = tmp_path / "J.txt"
    part.write_text("# J side\n1 2\n3 4\n")
    code, out, _ = run(capsys, "split", "custom", "--graph", g, "--partition", str(part))
    assert code == 0
    assert "custom partition: |G(J)| = 2, |G(K)| = 2" in out
    assert "guarantee: none" in out


def test_split_strict_with_small_window(capsys):
    argv = ["split", "edge", "--edge", "3,4", "--graph", str(GRAPHS / "path4.txt"), "--max-i", "2", "--max-j", "4"]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and "within the window" in out
    code, _, _ = run(capsys, *argv, "--strict")
    assert code == 1


# verify ------------------------------------------------------------------------------


def test_verify_trees(capsys):
    code, out, err = run(capsys, "verify", "--suite", "trees", "--max-n", "4")
    assert code == 0
    summary = json.loads(out.strip().splitlines()[-1])
    assert summary == {"suite": "trees", "cases": 4, "failures": 0, "failed": []}
    assert "total:" in err


def test_verify_random_is_reproducible(capsys):
    argv = ["verify", "--suite", "random", "--count", "5", "--max-n", "4", "--seed", "7"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert json.loads(out.strip().splitlines()[-1])["cases"] == 5
    _, again, _ = run(capsys, *argv)
    assert again == out


def test_verify_failure_exit_code():
    class Args:
        suite, max_n, count = "trees", 2, 0

    from binomial_betti.cli import RunConfig, Suite

    cfg = RunConfig(None, 32003, None, "auto", "table", 0, False, False, False)
    out, err = io.StringIO(), io.StringIO()
    assert cmd_verify(cfg, Args, out, err) == 0
    s = Suite("x", out, err)
    s.check("broken", False, 0.0)
    assert s.finish() == 1


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "binomial_betti", "betti", "--graph", str(GRAPHS / "path4.txt")],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert line_starting(res.stdout, "total:") == ["total:", "3", "3", "1"]
