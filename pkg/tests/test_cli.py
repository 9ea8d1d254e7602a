import csv
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import complete, petersen
from majedge import formats
from majedge.cli import main
from majedge.colouring import ListAssignment, ToleranceFn, verify_majority
from majedge.graph import Graph
from majedge.oracle import build_counterexample


@pytest.fixture
def k5(tmp_path):
    g = complete(5)
    (tmp_path / "k5.graph").write_text(formats.format_graph(g))
    (tmp_path / "k5.lists").write_text(formats.format_lists(ListAssignment.uniform(g, "123"), g))
    return tmp_path


def run(*args):
    return main([str(a) for a in args])


class TestColor:
    def test_1k_k5(self, k5, capsys):
        out = k5 / "k5.col"
        assert run("color", "--mode", "1k", "--k", 2, "--graph", k5 / "k5.graph", "--lists", k5 / "k5.lists", "--out", out) == 0
        assert len(out.read_text().splitlines()) == 10
        assert capsys.readouterr().out.strip().endswith("ok")
        g = complete(5)
        w = formats.parse_colouring(out.read_text(), g)
        assert verify_majority(g, w, ToleranceFn.uniform(Fraction(1, 2))).ok

    def test_petersen_enforced(self, tmp_path):
        g = petersen()
        (tmp_path / "p.graph").write_text(formats.format_graph(g))
        (tmp_path / "p.lists").write_text(formats.format_lists(ListAssignment.uniform(g, "123"), g))
        assert run("color", "--mode", "1k", "--k", 2, "--graph", tmp_path / "p.graph", "--lists", tmp_path / "p.lists") == 2

    def test_malformed(self, tmp_path, k5):
        bad = tmp_path / "bad.graph"
        bad.write_text("graph 3 1\ne 0 zero\n")
        assert run("color", "--mode", "1k", "--k", 2, "--graph", bad, "--lists", k5 / "k5.lists") == 3

    def test_missing_file(self, tmp_path, k5):
        assert run("color", "--mode", "1k", "--k", 2, "--graph", tmp_path / "nope", "--lists", k5 / "k5.lists") == 3

    def test_other_modes(self, tmp_path, capsys):
        g = complete(10)
        (tmp_path / "g").write_text(formats.format_graph(g))
        assert run("color", "--mode", "frugal", "--k", 3, "--graph", tmp_path / "g") == 0
        assert run("color", "--mode", "disc", "--k", 3, "--graph", tmp_path / "g") == 0
        assert "discrepancy" in capsys.readouterr().out
        assert run("color", "--mode", "frugal", "--k", 4, "--graph", tmp_path / "g") == 2

    def test_alpha_and_discretize(self, tmp_path):
        g = complete(13)
        (tmp_path / "g").write_text(formats.format_graph(g))
        (tmp_path / "l").write_text(formats.format_lists(ListAssignment.uniform(g, "ab"), g))
        (tmp_path / "t").write_text("t a 9/10\nt b 9/10\n")
        assert run("color", "--mode", "alpha", "--alpha", "3/4", "--ell", 2, "--graph", tmp_path / "g", "--lists", tmp_path / "l") == 0
        args = ["--graph", tmp_path / "g", "--lists", tmp_path / "l", "--tol", tmp_path / "t"]
        assert run("color", "--mode", "discretize", "--eps", "4/5", "--ell", 2, *args) == 0
        assert run("color", "--mode", "alpha", "--alpha", "1/2", "--ell", 2, "--graph", tmp_path / "g", "--lists", tmp_path / "l") == 2


class TestVerify:
    def setup_files(self, tmp_path, colours):
        g = Graph(4, [(0, 1), (0, 2), (0, 3)]) if len(colours) == 3 else Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        (tmp_path / "g").write_text(formats.format_graph(g))
        (tmp_path / "c").write_text("".join(f"c {u} {v} {c}\n" for (u, v), c in zip(g.edges, colours)))
        return ["--graph", tmp_path / "g", "--colouring", tmp_path / "c"]

    def test_ok(self, tmp_path, capsys):
        assert run("verify", *self.setup_files(tmp_path, "abab"), "--alpha", "1/2") == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_star_violation(self, tmp_path, capsys):
        assert run("verify", *self.setup_files(tmp_path, "xxx"), "--alpha", "1/2") == 1
        assert "violation 0 x 3 3/2" in capsys.readouterr().out

    def test_missing_tolerance(self, tmp_path):
        (tmp_path / "t").write_text("t a 1/2\n")
        assert run("verify", *self.setup_files(tmp_path, "abab"), "--tol", tmp_path / "t") == 2


class TestGenBruteMt:
    def test_gen_regular(self, tmp_path):
        assert run("gen", "regular", "--n", 10, "--d", 4, "--seed", 7, "--out", tmp_path / "r") == 0
        g = formats.parse_graph((tmp_path / "r.graph").read_text())
        assert g.is_regular() and g.max_degree == 4

    def test_gen_odd(self, tmp_path):
        assert run("gen", "regular", "--n", 5, "--d", 3, "--out", tmp_path / "r") == 2

    def test_counterexample_files(self, tmp_path, capsys):
        prefix = tmp_path / "cx"
        assert run("gen", "counterexample", "--n", 3, "--r", 2, "--beta", "1/5", "--out", prefix) == 0
        inst = build_counterexample(3, 2, Fraction(1, 5))
        g = formats.parse_graph((tmp_path / "cx.graph").read_text())
        assert g == inst.graph
        assert formats.parse_lists((tmp_path / "cx.lists").read_text(), g) == inst.lists
        assert dict(formats.parse_vertex_tolerance((tmp_path / "cx.vtol").read_text())) == dict(inst.tolerance)
        args = ["--graph", tmp_path / "cx.graph", "--lists", tmp_path / "cx.lists", "--vtol", tmp_path / "cx.vtol"]
        assert run("brute", *args) == 1
        assert run("brute", *args, "--budget", 1000) == 2

    def test_gen_is_seeded(self, tmp_path):
        run("gen", "er", "--n", 20, "--d", 5, "--seed", 3, "--out", tmp_path / "a")
        run("gen", "er", "--n", 20, "--d", 5, "--seed", 3, "--out", tmp_path / "b")
        assert (tmp_path / "a.graph").read_text() == (tmp_path / "b.graph").read_text()

    def test_seed_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MAJEDGE_SEED", "3")
        run("gen", "er", "--n", 20, "--d", 5, "--out", tmp_path / "a")
        monkeypatch.delenv("MAJEDGE_SEED")
        run("gen", "er", "--n", 20, "--d", 5, "--seed", 3, "--out", tmp_path / "b")
        assert (tmp_path / "a.graph").read_text() == (tmp_path / "b.graph").read_text()

    def test_mt_params(self, capsys):
        assert run("mt", "params", "--a", "1/5", "--eps", "1/2") == 0
        out = capsys.readouterr().out
        assert "threshold_general 28829" in out
        assert run("mt", "params", "--vector", "1/2,1/2,1/2", "--eps", "1/2") == 0
        assert "ell_prime 3" in capsys.readouterr().out

    def test_mt_run_and_limit(self, tmp_path, capsys):
        g = complete(9)
        (tmp_path / "g").write_text(formats.format_graph(g))
        (tmp_path / "l").write_text(formats.format_lists(ListAssignment.uniform(g, "abcd"), g))
        args = ["--graph", tmp_path / "g", "--lists", tmp_path / "l", "--alpha", "1/2", "--seed", 4]
        assert run("mt", "run", *args, "--out", tmp_path / "w", "--log", tmp_path / "log") == 0
        assert capsys.readouterr().out.strip().endswith("ok")
        w = formats.parse_colouring((tmp_path / "w").read_text(), g)
        assert verify_majority(g, w, ToleranceFn.uniform(Fraction(1, 2))).ok
        (tmp_path / "l1").write_text(formats.format_lists(ListAssignment.uniform(g, "a"), g))
        args[3] = tmp_path / "l1"
        assert run("mt", "run", *args, "--max-rounds", 0) == 5


class TestBench:
    def test_rows_and_figure(self, tmp_path):
        out = tmp_path / "b.csv"
        assert run("bench", "--mode", "1k", "--k", 2, "--deltas", "4..8", "--count", 50, "--relax", "--no-timing", "--out", out) == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 250
        assert list(rows[0]) == ["instance", "n", "m", "delta", "mode", "params", "verified", "rounds", "millis"]
        assert (tmp_path / "b.png").stat().st_size > 0

    def test_empty_grid(self, tmp_path):
        out = tmp_path / "e.csv"
        assert run("bench", "--mode", "1k", "--k", 2, "--deltas", "", "--out", out) == 0
        assert out.read_text() == "instance,n,m,delta,mode,params,verified,rounds,millis\n"

    def test_reproducible_bytes(self, tmp_path):
        args = ["bench", "--mode", "mt", "--a", "1/5", "--eps", "1/2", "--deltas", "20,30", "--count", 3, "--seed", 5, "--no-timing", "--no-figure"]
        run(*args, "--out", tmp_path / "a.csv")
        run(*args, "--out", tmp_path / "b.csv", "--workers", 2)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_console_script(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "majedge.cli", "mt", "params", "--ell", "2", "--eps", "9/10"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0
    assert "threshold_uniform 215" in res.stdout
