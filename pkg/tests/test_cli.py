"""Command-line interface: output formats, exit codes, determinism."""

import json

import pytest

from mnov.cli import main

HOPF_RATIO = "z*w/(4*z-1)"
QUADRATIC = "4*w+3*(w^2+z^2)"
TREFOIL = "2: 1 1 1"


@pytest.fixture
def run(capsys):
    def invoke(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


class TestHumanOutput:
    def test_radii(self, run):
        code, out, err = run("milnor", "radii", "-f", HOPF_RATIO)
        assert code == 0
        assert err == ""
        assert "m(F) = 0.000000" in out
        assert "X(F) = { 0.250000 }" in out

    def test_crit_two_points(self, run):
        code, out, _ = run("milnor", "crit", "-f", QUADRATIC, "-r", "1")
        assert code == 0
        assert "critical points: 2" in out
        assert (
            "w = -0.944444+0.328671i, index = 2,"
            " theta = 3.508371, t = 3.944053" in out
        )
        assert (
            "w = -0.944444-0.328671i, index = 1,"
            " theta = 2.774815, t = -3.944053" in out
        )

    def test_crit_oracle_line(self, run):
        code, out, _ = run(
            "milnor", "crit", "-f", QUADRATIC, "-r", "1", "--oracle"
        )
        assert code == 0
        assert "oracle clusters: 2" in out

    def test_trace(self, run):
        code, out, _ = run("milnor", "trace", "-f", HOPF_RATIO, "-r", "1")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "components: 3"
        loop_lines = [l for l in lines if l.startswith("loop ")]
        assert len(loop_lines) == 3
        for line in loop_lines:
            assert line.endswith("samples")

    def test_report_fibration(self, run):
        code, out, _ = run(
            "milnor", "report", "-f", HOPF_RATIO, "-r", "1", "--seeds", "200"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "verdict: fibration"
        assert "X(F) = { 0.250000 }" in out
        assert "critical points: 0 (index 1: 0, index 2: 0, degenerate: 0)" in out
        assert "balance: ok" in out

    def test_braid_block(self, run):
        code, out, _ = run("braid", "-b", TREFOIL)
        assert code == 0
        assert out == (
            "word: 2: 1 1 1\n"
            "reduced: 2: 1 1 1\n"
            "strands: 2\n"
            "crossings: 3\n"
            "components: 1\n"
            "chi: -1\n"
            "free_rank_upper: 2\n"
            "connected: yes\n"
            "assumptions:\n"
            "- the Seifert surface of the braid diagram is free\n"
        )

    def test_calc_block(self, run):
        code, out, _ = run("calc", "msum(u,u,2)")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "word: +-+-"
        assert "mn_upper: 4" in lines
        assert "pages: { -1, -1, 1, 1 }" in lines
        assert "chi_small: 1" in lines
        assert "chi_large: -3" in lines
        assert "binding: msum(u,u,2)" in lines

    def test_bounds_free_rank(self, run):
        code, out, _ = run("bounds", "--braid", TREFOIL)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "MN(K) ≤ 4 [free_rank]"
        assert lines[1].startswith("  tree: msum(")
        assert "- the Seifert surface of the braid diagram is free" in lines

    def test_bounds_double_table(self, run):
        code, out, _ = run(
            "bounds", "--braid", TREFOIL, "--double", "0:+"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "MN(D(K, 0, +)) ≤ 6 [braid_index_double]"
        assert "braid_index_double: 6" in lines
        assert "crossing_double: 10" in lines
        assert "wrapping_double: 10" in lines
        assert "  tree: msum(cut(cut(cut(splice(o,2,0)))),hopf(-),2)" in lines

    def test_squarefree_warning_proceeds(self, run):
        code, out, _ = run("milnor", "radii", "-f", "(z-w)^2")
        assert code == 0
        assert "m(F) = 0.000000" in out
        assert "warning: the squarefree heuristic failed" in out


class TestJsonOutput:
    def test_shape_and_roundtrip(self, run):
        code, out, _ = run("milnor", "radii", "-f", HOPF_RATIO, "--json")
        assert code == 0
        payload = json.loads(out)
        assert set(payload) == {
            "command", "config", "result", "assumptions", "warnings"
        }
        assert payload["command"] == "milnor radii"
        assert payload["result"]["critical_radii"] == [0.25]
        assert payload["result"]["m_of_F"] == 0.0
        assert payload["warnings"] == []

    def test_config_echo(self, run):
        code, out, _ = run(
            "milnor", "crit", "-f", QUADRATIC, "-r", "1",
            "--seeds", "123", "--rng", "7", "--json",
        )
        assert code == 0
        config = json.loads(out)["config"]
        assert config["seed_count"] == 123
        assert config["rng_seed"] == 7
        assert config["oracle"] is False
        assert config["threads"] is None
        for key in ("newton_tol", "max_newton_iters", "dedup_dist",
                    "degeneracy_rel_tol", "grid_resolution"):
            assert key in config

    def test_byte_determinism(self, run):
        argv = ("milnor", "crit", "-f", QUADRATIC, "-r", "1", "--json")
        _, first, _ = run(*argv)
        _, second, _ = run(*argv)
        assert first == second
        assert first.endswith("\n")

    def test_calc_json(self, run):
        code, out, _ = run("calc", "basket(0,3)", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["result"]["mn_upper"] == 4

    def test_braid_json(self, run):
        code, out, _ = run("braid", "-b", TREFOIL, "--json")
        assert code == 0
        invariants = json.loads(out)["result"]["invariants"]
        assert invariants["crossing_count"] == 3
        assert invariants["bennequin_chi"] == -1
        assert invariants["free_rank_upper"] == 2

    def test_bounds_json(self, run):
        code, out, _ = run(
            "bounds", "--braid", TREFOIL, "--double", "0:-", "--json"
        )
        assert code == 0
        result = json.loads(out)["result"]
        assert result["best"]["value"] == 6
        assert len(result["table"]) == 3


class TestGridDump:
    def test_dump_grid_rows(self, run, tmp_path):
        target = tmp_path / "grid.csv"
        code, _, _ = run(
            "milnor", "report", "-f", HOPF_RATIO, "-r", "1",
            "--seeds", "60", "--grid", "8", "--dump-grid", str(target),
        )
        assert code == 0
        lines = target.read_text().splitlines()
        assert lines[0] == "eta,xi1,xi2,residual"
        assert len(lines) == 1 + 8 ** 3


class TestExitCodes:
    def test_syntax_error(self, run):
        code, _, err = run("milnor", "radii", "-f", "z+*2")
        assert code == 2
        assert err.startswith("error:")

    def test_disconnected_surface(self, run):
        code, _, err = run("bounds", "--braid", "2:")
        assert code == 2
        assert err.startswith("error:")

    def test_invalid_radius(self, run):
        code, _, err = run("milnor", "crit", "-f", HOPF_RATIO, "-r", "0.25")
        assert code == 3
        assert err.startswith("error:")

    def test_multi_component_double(self, run):
        code, _, err = run(
            "bounds", "--braid", "3: 1 1 2 2 1", "--double", "0:+"
        )
        assert code == 5
        assert err.startswith("error:")

    def test_bad_double_argument(self, run):
        code, _, err = run(
            "bounds", "--braid", TREFOIL, "--double", "x:+"
        )
        assert code == 2
        assert "twist count" in err

    def test_strict_incomplete(self, run):
        code, out, _ = run("milnor", "radii", "-f", "z+1e10", "--strict")
        assert code == 4
        assert "warning: incomplete divisor-distance search" in out

    def test_incomplete_without_strict(self, run):
        code, out, _ = run("milnor", "radii", "-f", "z+1e10")
        assert code == 0
        assert "warning: incomplete" in out

    def test_squarefree_warning_is_not_strict(self, run):
        code, out, _ = run("milnor", "radii", "-f", "(z-w)^2", "--strict")
        assert code == 0
        assert "warning: the squarefree heuristic failed" in out
