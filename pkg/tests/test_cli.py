import json
import os

import pytest

from homspec.cli import main


def run_cli(args, tmp_path, monkeypatch=None):
    return main(args + ["--out", str(tmp_path), "--no-figures"])


class TestDims:
    def test_sphere_table(self, tmp_path):
        assert run_cli(["dims", "--space", "sphere", "--m", "2", "--n-max", "10"],
                       tmp_path) == 0
        lines = (tmp_path / "dims_sphere_m2.csv").read_text().splitlines()
        assert lines[0] == "space,m,n,d_n,tau_n,lambda_n"
        assert len(lines) == 12  # header + 11 rows
        last = lines[-1].split(",")
        assert last[2] == "10" and last[4] == "121"

    def test_real_projective_blanks_odd_tau(self, tmp_path):
        assert run_cli(
            ["dims", "--space", "real-projective", "--m", "2", "--n-max", "4"],
            tmp_path,
        ) == 0
        rows = (tmp_path / "dims_real-projective_m2.csv").read_text().splitlines()[1:]
        cells = [r.split(",") for r in rows]
        assert cells[1][3] == "0" and cells[1][4] == ""  # d_1 = 0, tau blank
        assert cells[2][4] == "6"

    def test_figures_rendered_by_default(self, tmp_path):
        assert main(["dims", "--space", "sphere", "--m", "2", "--n-max", "5",
                     "--out", str(tmp_path)]) == 0
        assert (tmp_path / "dims_sphere_m2.png").exists()


class TestQuad:
    def test_csv_layout(self, tmp_path):
        assert run_cli(["quad", "--space", "sphere", "--m", "2", "--nodes", "4"],
                       tmp_path) == 0
        lines = (tmp_path / "quad_sphere_m2_n4.csv").read_text().splitlines()
        assert lines[0] == "index,node,weight"
        assert len(lines) == 5

    def test_generic_exponents(self, tmp_path):
        assert run_cli(["quad", "--alpha", "1.0", "--beta", "0.0", "--nodes", "3"],
                       tmp_path) == 0
        files = list(tmp_path.glob("quad_a1.0_b0.0_n3.csv"))
        assert len(files) == 1

    def test_missing_parameters_is_config_error(self, tmp_path):
        assert run_cli(["quad", "--nodes", "4"], tmp_path) == 2


class TestSpectrum:
    def test_csv(self, tmp_path):
        assert run_cli(
            ["spectrum", "--space", "sphere", "--m", "2", "--coeff-family",
             "geometric", "--q", "0.5", "--count", "9"],
            tmp_path,
        ) == 0
        path = tmp_path / "spectrum_sphere_m2_geometric0.5_c9_r0.csv"
        lines = path.read_text().splitlines()
        assert lines[0] == "index,degree,value"
        assert lines[1] == "1,0,1.0"
        assert lines[2] == "2,1,0.5"
        assert len(lines) == 10

    def test_derivative_weighting(self, tmp_path):
        assert run_cli(
            ["spectrum", "--space", "sphere", "--m", "2", "--coeff-family",
             "algebraic", "--gamma", "6", "--count", "4", "--r", "1"],
            tmp_path,
        ) == 0
        path = tmp_path / "spectrum_sphere_m2_algebraic6.0_c4_r1.csv"
        rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
        # degree-1 block: lambda_1^1 * 2^{-6} = 2/64
        assert float(rows[1][2]) == pytest.approx(2.0 / 64.0)


class TestNystromCheck:
    def test_json_report_passes(self, tmp_path):
        assert run_cli(
            ["nystrom-check", "--family", "geometric", "--param", "0.5",
             "--grid", "12x24", "--top-k", "9"],
            tmp_path,
        ) == 0
        obj = json.loads((tmp_path / "nystrom_geometric0.5_12x24.json").read_text())
        assert obj["grid"] == "12x24" and obj["top_k"] == 9
        assert obj["pass"] is True
        assert obj["max_rel_error"] <= 1e-5

    def test_fail_verdict_gives_exit_one(self, tmp_path):
        assert run_cli(
            ["nystrom-check", "--family", "geometric", "--param", "0.5",
             "--grid", "6x12", "--top-k", "4", "--tol", "1e-18"],
            tmp_path,
        ) == 1

    def test_bad_grid_is_config_error(self, tmp_path):
        assert run_cli(
            ["nystrom-check", "--family", "geometric", "--param", "0.5",
             "--grid", "12by24", "--top-k", "4"],
            tmp_path,
        ) == 2


class TestVerify:
    def test_json_pass(self, tmp_path):
        assert run_cli(
            ["verify", "--theorem", "2.2", "--space", "sphere", "--m", "2",
             "--r", "1", "--gamma", "3.5", "--count", "10000"],
            tmp_path,
        ) == 0
        obj = json.loads(
            (tmp_path / "verify_t22_sphere_m2_r1_g3.5_c10000.json").read_text()
        )
        assert obj["verdict"] == "pass"
        assert obj["theorem_exponent"] == -1.5
        summary = (tmp_path / "verify_summary.csv").read_text().splitlines()
        assert summary[0] == (
            "theorem,space,m,r,p,gamma,fitted_slope,theorem_exponent,verdict"
        )
        assert summary[1].startswith("2.2,sphere,2,1,,3.5,")

    def test_hypothesis_violation_is_config_error(self, tmp_path, capsys):
        code = run_cli(
            ["verify", "--theorem", "2.1", "--space", "sphere", "--m", "2",
             "--r", "1", "--p", "3.5", "--gamma", "4", "--count", "1000"],
            tmp_path,
        )
        assert code == 2
        err = capsys.readouterr().err
        assert "r >= (m+1)/2" in err


class TestLemmas:
    def test_cayley_scan_clean(self, tmp_path):
        assert run_cli(
            ["lemmas", "--space", "cayley", "--m", "16", "--n-max", "1000"],
            tmp_path,
        ) == 0
        obj = json.loads(
            (tmp_path / "lemmas_cayley_m16_counting-A.json").read_text()
        )
        assert obj["violations"] == []
        assert obj["verdict"] == "pass"
        assert obj["minimal_delta"] >= 1
        assert (tmp_path / "lemmas_cayley_m16_counting-C.json").exists()


class TestRunConfig:
    CONFIG = """
[dims:sphere-table]
space = sphere
m = 2
n_max = 8

[verify:t22]
theorem = 2.2
space = sphere
m = 2
r = 1
gamma = 3.5
count = 2500

[verify:t23]
theorem = 2.3
space = sphere
m = 2
r = 1
p = 1.5
gamma = 3.9
count = 2500
"""

    def test_all_cells_and_aggregate(self, tmp_path):
        cfg = tmp_path / "cells.ini"
        cfg.write_text(self.CONFIG)
        assert run_cli(["run", str(cfg)], tmp_path) == 0
        summary = (tmp_path / "verify_summary.csv").read_text().splitlines()
        assert len(summary) == 3  # header + two verify rows, in section order
        assert summary[1].startswith("2.2,") and summary[2].startswith("2.3,")

    def test_parallel_jobs_identical_output(self, tmp_path):
        cfg = tmp_path / "cells.ini"
        cfg.write_text(self.CONFIG)
        seq = tmp_path / "seq"
        par = tmp_path / "par"
        seq.mkdir(), par.mkdir()
        assert main(["run", str(cfg), "--out", str(seq), "--no-figures"]) == 0
        assert main(["run", str(cfg), "--jobs", "3", "--out", str(par),
                     "--no-figures"]) == 0
        for f in sorted(seq.iterdir()):
            assert (par / f.name).read_bytes() == f.read_bytes()

    def test_unknown_section_rejected(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[frobnicate]\nx = 1\n")
        assert run_cli(["run", str(cfg)], tmp_path) == 2

    def test_missing_file_rejected(self, tmp_path):
        assert run_cli(["run", str(tmp_path / "nope.ini")], tmp_path) == 2


class TestDeterminismAndEnv:
    def test_byte_identical_reports(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        a.mkdir(), b.mkdir()
        args = ["verify", "--theorem", "2.2", "--space", "sphere", "--m", "2",
                "--r", "1", "--gamma", "3.5", "--count", "3000", "--no-figures"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        for f in sorted(a.iterdir()):
            assert (b / f.name).read_bytes() == f.read_bytes()

    def test_env_var_overrides_out(self, tmp_path, monkeypatch):
        override = tmp_path / "env_out"
        monkeypatch.setenv("HOMSPEC_OUT", str(override))
        assert main(["dims", "--space", "sphere", "--m", "2", "--n-max", "3",
                     "--out", str(tmp_path / "ignored"), "--no-figures"]) == 0
        assert (override / "dims_sphere_m2.csv").exists()
        assert not (tmp_path / "ignored").exists()

    def test_bad_space_exits_two(self, tmp_path, capsys):
        assert main(["dims", "--space", "torus", "--m", "2", "--n-max", "3",
                     "--out", str(tmp_path)]) == 2

    def test_inadmissible_dimension_exits_two(self, tmp_path, capsys):
        code = main(["dims", "--space", "complex-projective", "--m", "3",
                     "--n-max", "3", "--out", str(tmp_path), "--no-figures"])
        assert code == 2
        assert "not admissible" in capsys.readouterr().err
