"""Command-line interface: exit codes, CSV schemas, SVG embedding, config."""

import csv
import io

import pytest

from fracproj.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBoundsEval:
    def test_estimate1_example(self, capsys):
        code, out, _ = run(capsys, "bounds", "eval", "--formula", "estimate1",
                           "--gamma", "1", "--sigma", "0.5")
        assert code == 0
        assert out.splitlines()[0] == "formula,params,value"
        assert out.splitlines()[1] == "estimate1,gamma=1.0;sigma=0.5,0.5"

    def test_unknown_formula_is_config_error(self, capsys):
        code, _, err = run(capsys, "bounds", "eval", "--formula", "nope")
        assert code == 2
        assert "configuration error" in err

    def test_domain_error_is_config_error(self, capsys):
        code, _, err = run(capsys, "bounds", "eval", "--formula", "kaufman",
                           "--sigma", "1.5")
        assert code == 2

    def test_missing_parameter(self, capsys):
        code, _, err = run(capsys, "bounds", "eval", "--formula", "category",
                           "--sigma", "0.3")
        assert code == 2


class TestVerify:
    def test_grid_small(self, capsys):
        code, out, _ = run(capsys, "verify", "grid",
                           "--pmax", "2", "--qmax", "2", "--nmax", "6")
        assert code == 0
        assert "0 violations" in out

    def test_line_intersect_small(self, capsys):
        code, out, _ = run(capsys, "verify", "line-intersect",
                           "--n", "3", "--d", "3")
        assert code == 0
        assert "exactly 6 points" in out

    def test_incidence_small(self, capsys):
        code, out, _ = run(capsys, "verify", "incidence", "--nmax", "5")
        assert code == 0
        assert "0 violations" in out

    def test_product_small(self, capsys):
        code, out, _ = run(capsys, "verify", "product", "--trials", "5")
        assert code == 0

    def test_marstrand_small(self, capsys):
        code, out, _ = run(capsys, "verify", "marstrand",
                           "--n", "256", "--k", "6")
        assert code == 0
        assert "exceptional count" in out

    def test_setE_small(self, capsys):
        code, out, _ = run(capsys, "verify", "setE", "--depth", "2")
        assert code == 0

    def test_main2_depth1(self, capsys):
        code, out, _ = run(capsys, "verify", "main2", "--depth", "1")
        assert code == 0
        assert "all invariants hold" in out


class TestConstructAndSweep:
    def test_construct_cascade_csv(self, capsys, tmp_path):
        out_file = tmp_path / "cascade.csv"
        code, _, _ = run(capsys, "construct", "--name", "cascade",
                         "--steps", "4", "--out", str(out_file))
        assert code == 0
        rows = list(csv.reader(io.StringIO(out_file.read_text())))
        assert rows[0] == ["level", "radius", "cx", "cy"]
        assert len(rows) > 2

    def test_construct_setE_stdout(self, capsys):
        code, out, _ = run(capsys, "construct", "--name", "setE", "--depth", "1")
        assert code == 0
        assert out.startswith("level,r,midpoint")

    def test_sweep_csv_schema(self, capsys):
        code, out, _ = run(capsys, "sweep", "--name", "cascade", "--steps", "3",
                           "--directions", "3", "--kmin", "2", "--kmax", "4")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "direction_index,delta_index,N,P"
        assert len(lines) == 1 + 3 * 3

    def test_sweep_rejects_symbolic_tree(self, capsys):
        code, _, err = run(capsys, "sweep", "--name", "bigex")
        assert code == 2

    def test_sweep_deterministic(self, capsys):
        argv = ("sweep", "--name", "cascade", "--steps", "3",
                "--directions", "2", "--kmin", "2", "--kmax", "3")
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_dimest_reports_slope(self, capsys, tmp_path):
        out_file = tmp_path / "prof.csv"
        code, out, _ = run(capsys, "dimest", "--name", "cascade", "--steps", "3",
                           "--kmin", "2", "--kmax", "6", "--e", "1,0",
                           "--out", str(out_file))
        assert code == 0
        assert "slope" in out
        assert out_file.read_text().startswith("delta,N,P")

    def test_energy_grid(self, capsys):
        code, out, _ = run(capsys, "energy", "--grid", "4",
                           "--directions", "4", "--k", "2")
        assert code == 0
        assert out.startswith("direction_index,ex,ey,occupied_tubes")
        assert "total energy" in out


class TestSvg:
    def test_svg_embeds_raw_csv(self, capsys, tmp_path):
        svg = tmp_path / "plot.svg"
        code, _, _ = run(capsys, "construct", "--name", "cascade",
                         "--steps", "3", "--out", str(tmp_path / "c.csv"),
                         "--svg", str(svg))
        assert code == 0
        body = svg.read_text()
        assert body.lstrip().startswith("<?xml")
        assert "raw data:" in body
        assert "level,radius,cx,cy" in body


class TestConfigFile:
    def test_config_supplies_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "fp.ini"
        cfg.write_text("[verify.grid]\npmax = 1\nqmax = 1\nnmax = 4\n")
        code, out, _ = run(capsys, "--config", str(cfg), "verify", "grid")
        assert code == 0
        assert "n <= 4" in out

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "fp.ini"
        cfg.write_text("[verify.grid]\nnmax = 64\n")
        code, out, _ = run(capsys, "--config", str(cfg), "verify", "grid",
                           "--pmax", "1", "--qmax", "1", "--nmax", "3")
        assert code == 0
        assert "n <= 3" in out

    def test_missing_config_is_config_error(self, capsys):
        code, _, err = run(capsys, "--config", "/nonexistent.ini",
                           "verify", "grid")
        assert code == 2
