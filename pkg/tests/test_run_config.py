"""Tests of run configuration loading and precedence"""

import pytest

from ricciode.const import DEFAULTS
from ricciode.exceptions import ConfigValidationError
from ricciode.run_config import COMMAND_KEYS, RunConfig, read_key_value_file

from .conftest import get_data_file_path


class TestKeyValueFile:
    def test_read(self):
        entries = read_key_value_file(get_data_file_path("configs/classify.cfg"))
        assert entries == {"bound": 3, "workers": 2, "format": "table"}

    def test_dashes_and_types(self):
        entries = read_key_value_file(get_data_file_path("configs/asymptote_infinity.cfg"))
        assert entries["params"] == "-1,0,0,0,1,2"
        assert entries["t_end"] == 2000
        assert entries["tol"] == pytest.approx(1e-12)
        assert isinstance(entries["t0"], float)

    def test_malformed(self):
        with pytest.raises(ConfigValidationError):
            read_key_value_file(get_data_file_path("configs/malformed.cfg"))


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig("classify")
        for key in COMMAND_KEYS["classify"]:
            assert cfg[key] == DEFAULTS[key]

    def test_yaml_file(self):
        path = get_data_file_path("configs/integrate_case1.yaml")
        cfg = RunConfig("integrate", config_file=path)
        assert cfg["params"] == "1,0,0,0,-1,2"
        assert cfg["tol"] == pytest.approx(1e-11)
        assert cfg["t0"] == 1.0
        assert cfg["format"] == "csv"

    def test_command_line_wins(self):
        cfg = RunConfig(
            "integrate",
            {"t_end": 3.0, "tol": None, "format": "json"},
            get_data_file_path("configs/integrate_case1.yaml"),
        )
        assert cfg["t_end"] == 3.0
        assert cfg["format"] == "json"
        assert cfg["tol"] == pytest.approx(1e-11)

    def test_key_value_file(self):
        cfg = RunConfig("classify", {"bound": None}, get_data_file_path("configs/classify.cfg"))
        assert (cfg["bound"], cfg["workers"], cfg["format"]) == (3, 2, "table")

    def test_leading_only_switch(self, tmp_path):
        path = tmp_path / "asymptote.cfg"
        path.write_text("mode = singular\nparams = -1,0,0,0,1,2\ninit = 1,1\nt-end = -1\n")
        options = {"leading_only": None}
        assert RunConfig("asymptote", options, str(path))["leading_only"] is False
        path.write_text(path.read_text() + "leading-only = true\n")
        assert RunConfig("asymptote", options, str(path))["leading_only"] is True
        assert RunConfig("asymptote", {"leading_only": True}, str(path))["leading_only"] is True

    def test_keys_of_other_commands_are_ignored(self):
        path = get_data_file_path("configs/integrate_case1.yaml")
        cfg = RunConfig("verify", {"form": "case3"}, path)
        assert "params" not in cfg.to_dict()
        assert cfg.to_dict()["command"] == "verify"

    @pytest.mark.parametrize(
        ["command", "options"],
        [
            ("integrate", {"params": "1,0,0,0,-1,2", "init": "1,1"}),
            ("verify", {}),
            ("ricci", {"a1": 1.0}),
            ("asymptote", {"params": "1,0,0,0,-1,2", "init": "1,1", "t_end": 2.0}),
        ],
    )
    def test_missing_required(self, command, options):
        with pytest.raises(ConfigValidationError):
            RunConfig(command, options)

    @pytest.mark.parametrize(
        ["command", "options"],
        [
            ("classify", {"bound": 2}),
            ("classify", {"workers": 0}),
            ("integrate", {"params": "1,0,0", "init": "1,1", "t_end": 1.0}),
            ("integrate", {"params": "1,0,0,0,-1,2", "init": "1", "t_end": 1.0}),
            ("integrate", {"params": "1,0,0,0,-1,2", "init": "1,1", "t_end": 1.0, "tol": 1e-2}),
            ("verify", {"form": "case3", "param": -1.0}),
            ("catalog", {"form": "schwarzschild"}),
        ],
    )
    def test_invalid_values(self, command, options):
        with pytest.raises(ConfigValidationError):
            RunConfig(command, options)

    @pytest.mark.parametrize("filename", ["configs/invalid_tol.yaml", "configs/unknown_key.yaml"])
    def test_invalid_file(self, filename):
        with pytest.raises(ConfigValidationError):
            RunConfig("integrate", config_file=get_data_file_path(filename))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigValidationError):
            RunConfig("classify", config_file=str(tmp_path / "nope.yaml"))

    def test_unknown_command(self):
        with pytest.raises(ConfigValidationError):
            RunConfig("plot")

    def test_get_falls_back(self):
        cfg = RunConfig("classify")
        assert cfg.get("output", "-") == "-"
