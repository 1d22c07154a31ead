"""Run configuration assembled from command-line flags, a config file and defaults"""

import logging
import os
from typing import Any, Dict, Mapping, Optional

from jsonschema import ValidationError, validate
from yacman import FutureYAMLConfigManager as YAMLConfigManager
from yacman import load_yaml

from .const import DEFAULTS, RUN_CONFIG_SCHEMA
from .exceptions import ConfigValidationError

__all__ = ["RunConfig", "COMMAND_KEYS", "REQUIRED_KEYS", "read_key_value_file"]

_LOGGER = logging.getLogger(__name__)

_OUTPUT_KEYS = ["format", "output"]
_RUN_KEYS = ["params", "init", "t0", "t_end", "tol"]
_WINDOW_KEYS = ["window_decades", "window_upper", "leading_only"]
COMMAND_KEYS = {
    "classify": ["bound", "workers"] + _OUTPUT_KEYS,
    "verify": ["form", "param", "points"] + _OUTPUT_KEYS,
    "catalog": ["form", "param", "points"] + _OUTPUT_KEYS,
    "ricci": ["a1", "a1p", "a1pp", "a2", "a2p", "a2pp"] + _OUTPUT_KEYS,
    "integrate": _RUN_KEYS + _OUTPUT_KEYS,
    "asymptote": ["mode"] + _RUN_KEYS + _WINDOW_KEYS + _OUTPUT_KEYS,
}
REQUIRED_KEYS = {
    "classify": [],
    "verify": ["form"],
    "catalog": ["form"],
    "ricci": ["a1", "a1p", "a1pp", "a2", "a2p", "a2pp"],
    "integrate": ["params", "init", "t_end"],
    "asymptote": ["mode", "params", "init", "t_end"],
}
_YAML_EXTENSIONS = (".yaml", ".yml")


def _scalar(text: str) -> Any:
    """Type a value from a key = value file: bool, int, then float, then string"""
    text = text.strip().strip('"').strip("'")
    if text.lower() in ("", "null", "none"):
        return None
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def read_key_value_file(path: str) -> Dict[str, Any]:
    """
    Read a flat "key = value" file; blank lines and lines starting with # are
    skipped, dashes in keys read as underscores.

    :param str path: file to read
    :return dict: the entries
    :raise ConfigValidationError: a line without "="
    """
    entries = {}
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigValidationError(
                    f"{path}:{lineno}: expected 'key = value', got '{line}'"
                )
            key, value = line.split("=", 1)
            entries[key.strip().lstrip("-").replace("-", "_")] = _scalar(value)
    return entries


class RunConfig:
    """
    Options of one subcommand. The command line wins over the config file,
    which wins over the built-in defaults.

    :param str command: the subcommand
    :param Mapping cli_options: values given on the command line, None when absent
    :param str config_file: optional YAML or key = value file
    """

    def __init__(
        self,
        command: str,
        cli_options: Optional[Mapping[str, Any]] = None,
        config_file: Optional[str] = None,
    ):
        if command not in COMMAND_KEYS:
            raise ConfigValidationError(f"Unknown command '{command}'")
        self.command = command
        self.config_path = config_file
        cli_options = dict(cli_options or {})
        if config_file is None:
            self._cfg = YAMLConfigManager()
        elif not os.path.isfile(config_file):
            raise ConfigValidationError(f"Config file not found: {config_file}")
        elif config_file.endswith(_YAML_EXTENSIONS):
            self._cfg = YAMLConfigManager.from_yaml_file(filepath=config_file)
        else:
            self._cfg = YAMLConfigManager.from_obj(entries=read_key_value_file(config_file))
        schema = load_yaml(RUN_CONFIG_SCHEMA)
        self._validate(dict(self._cfg.exp), schema, "config file")

        self.values: Dict[str, Any] = {}
        for key in COMMAND_KEYS[command]:
            value = self._cfg.priority_get(key, override=cli_options.get(key), default=None)
            self.values[key] = DEFAULTS.get(key) if value is None else value
        missing = [k for k in REQUIRED_KEYS[command] if self.values.get(k) is None]
        if missing:
            flags = ", ".join("--" + k.replace("_", "-") for k in missing)
            raise ConfigValidationError(f"'{command}' requires {flags}")
        self._validate({k: v for k, v in self.values.items() if v is not None}, schema, command)
        _LOGGER.debug(f"Run configuration for '{command}': {self.values}")

    @staticmethod
    def _validate(entries: Dict[str, Any], schema: Dict, source: str) -> None:
        try:
            validate(entries, schema)
        except ValidationError as e:
            where = ".".join(str(p) for p in e.absolute_path) or "config"
            raise ConfigValidationError(f"Invalid {source} option '{where}': {e.message}")

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def get(self, key: str, default: Any = None) -> Any:
        value = self.values.get(key)
        return default if value is None else value

    def to_dict(self) -> Dict[str, Any]:
        """The resolved options, for echoing into the output envelope"""
        return {"command": self.command, **self.values}
