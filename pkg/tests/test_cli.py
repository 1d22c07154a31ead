"""Tests of the command line interface"""

import json

import pytest

from ricciode.cli import main, run
from ricciode.const import CATALOG_COLUMNS, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION

from .conftest import get_data_file_path

CASE3_T = "0.05868026116630589"
CASE3_INIT = "2,0.6666666666666666"


def run_json(args, tmp_path):
    out = tmp_path / "out.json"
    code = run(args + ["-o", str(out)])
    return code, json.loads(out.read_text()) if out.exists() else None


class TestParsing:
    def test_no_command(self):
        assert run([]) == EXIT_VALIDATION

    @pytest.mark.parametrize("args", [["--help"], ["--version"], ["integrate", "--help"]])
    def test_help_and_version(self, args):
        assert run(args) == EXIT_OK

    @pytest.mark.parametrize(
        "args",
        [
            ["integrate", "--init", "1,1", "--t-end", "5"],
            ["integrate", "--params", "1,0,0,0,-1,2", "--init", "1,1", "--t-end", "x"],
            ["integrate", "--params", "1,0,0,0,-1,x", "--init", "1,1", "--t-end", "5"],
            ["integrate", "--params", "1,0,0,0,-1,2", "--init", "1,1", "--t-end", "5"]
            + ["--tol", "1e-2"],
            ["integrate", "--params", "1,0,0,0,-1,2", "--init", "0,1", "--t-end", "5"],
            ["verify", "--form", "schwarzschild"],
            ["verify", "--form", "case3", "--param", "-2"],
            ["classify", "--bound", "2"],
            ["ricci", "--a1", "0", "--a1p", "0", "--a1pp", "0"]
            + ["--a2", "1", "--a2p", "0", "--a2pp", "0"],
            ["catalog", "--form", "case3", "-c", "missing.yaml"],
        ],
    )
    def test_invalid_input(self, args):
        assert run(args) == EXIT_VALIDATION

    def test_main_exits_with_code(self):
        with pytest.raises(SystemExit) as e:
            main(test_args=["verify"])
        assert e.value.code == EXIT_VALIDATION


class TestCommands:
    def test_ricci(self, tmp_path):
        args = ["ricci", "--a1", "1", "--a1p", "0", "--a1pp", "0"]
        args += ["--a2", "1", "--a2p", "0", "--a2pp", "0"]
        code, result = run_json(args, tmp_path)
        assert code == EXIT_OK
        assert result["ricci"] == {"ric00": 0.0, "ric11": 4.0, "ric22": 4.0, "scalar": 12.0}
        assert result["config"]["command"] == "ricci"

    @pytest.mark.parametrize("form", ["taub-nut", "fubini-study", "flat-cone"])
    def test_verify(self, tmp_path, form):
        code, result = run_json(["verify", "--form", form, "--points", "20"], tmp_path)
        assert code == EXIT_OK
        assert result["passed"] is True
        assert result["form"] == form

    def test_catalog_csv(self, tmp_path):
        out = tmp_path / "table.csv"
        args = ["catalog", "--form", "case3", "--points", "5", "--format", "csv", "-o", str(out)]
        assert run(args) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].split(",") == CATALOG_COLUMNS
        assert len(lines) == 6

    def test_catalog_to_stdout(self, capsys):
        assert run(["catalog", "--form", "flat-cone", "--points", "3", "--format", "csv"]) == 0
        assert ",".join(CATALOG_COLUMNS) in capsys.readouterr().out.splitlines()

    def test_classify_from_config(self, tmp_path):
        out = tmp_path / "families.txt"
        config = get_data_file_path("configs/classify.cfg")
        assert run(["classify", "-c", config, "-o", str(out)]) == EXIT_OK
        text = out.read_text()
        assert "ricci-flat" in text and "einstein" in text

    def test_integrate_cone(self, tmp_path):
        args = ["integrate", "--params", "1,0,0,0,-1,2", "--init", "1,1"]
        code, result = run_json(args + ["--t0", "1", "--t-end", "5"], tmp_path)
        assert code == EXIT_OK
        assert result["termination"] == "t_end"
        assert result["final"]["a1"] == pytest.approx(5.0)
        assert result["params"] == ["1/1", "0/1", "0/1", "0/1", "-1/1", "2/1"]

    def test_integrate_from_config(self, tmp_path):
        config = get_data_file_path("configs/integrate_case1.yaml")
        out = tmp_path / "traj.csv"
        assert run(["integrate", "-c", config, "-o", str(out)]) == EXIT_OK
        header, *rows = out.read_text().splitlines()
        assert header.startswith("t,A1,A2,x")
        assert float(rows[-1].split(",")[0]) == 5.0

    def test_integrate_stops_short(self, tmp_path):
        """A = 1 + t reaches A2 = 0 at t = -1, before t_end"""
        args = ["integrate", "--params", "1,0,0,0,-1,2", "--init", "1,1"]
        code, result = run_json(args + ["--t-end", "-5", "--tol", "1e-10"], tmp_path)
        assert code == EXIT_NUMERICAL
        assert result["termination"] == "singular_event"
        assert result["final"]["t"] == pytest.approx(-1.0, abs=1e-6)
        assert result["event"]["t0_estimate"] == pytest.approx(-1.0, abs=1e-6)

    def test_asymptote_singular(self, tmp_path):
        args = ["asymptote", "--mode", "singular", "--params=-1,0,0,0,1,2"]
        args += ["--init", CASE3_INIT, "--t0", CASE3_T, "--t-end", "-1", "--tol", "1e-12"]
        code, result = run_json(args, tmp_path)
        assert code == EXIT_OK
        assert result["termination"] == "singular_event"
        assert result["event"]["side"] == "both"
        assert result["two_term"] is True
        assert result["fits"]["A2"]["exponent"] == pytest.approx(1 / 3, abs=1e-2)
        assert result["fits"]["A1"]["exponent"] == pytest.approx(-1 / 3, abs=1e-2)
        assert result["gamma"] == pytest.approx(3 ** (1 / 3), rel=2e-2)
        assert result["fits"]["A1"]["coefficient"] == pytest.approx(
            result["predicted_a1_coefficient"], rel=2e-2
        )

    def test_asymptote_singular_leading_only(self, tmp_path):
        args = ["asymptote", "--mode", "singular", "--params=-1,0,0,0,1,2"]
        args += ["--init", CASE3_INIT, "--t0", CASE3_T, "--t-end", "-1", "--tol", "1e-12"]
        code, full = run_json(args, tmp_path)
        assert code == EXIT_OK
        code, leading = run_json(args + ["--leading-only"], tmp_path)
        assert code == EXIT_OK
        assert leading["two_term"] is False
        assert leading["fits"]["A2"]["exponent"] == pytest.approx(1 / 3, abs=5e-2)
        gamma = 3 ** (1 / 3)
        assert abs(full["gamma"] - gamma) < abs(leading["gamma"] - gamma)

    def test_asymptote_infinity(self, tmp_path):
        config = get_data_file_path("configs/asymptote_infinity.cfg")
        code, result = run_json(["asymptote", "-c", config], tmp_path)
        assert code == EXIT_OK
        assert result["fit"]["beta"] == pytest.approx(0.5, rel=2e-2)
        assert result["slopes"]["label"] == "ALC"
        assert result["slopes"]["collapsed_circle"] is True

    def test_asymptote_without_singularity(self):
        args = ["asymptote", "--mode", "singular", "--params", "1,0,0,0,-1,2"]
        args += ["--init", "1,1", "--t0", "1", "--t-end", "5"]
        assert run(args) == EXIT_NUMERICAL
