"""
Settings for the EqM action decoder.

Defaults come from settings.yaml (or the file named by EQM_DECODER_SETTINGS).
Environment variables EQM_DECODER_<SECTION>__<KEY> override single values;
their text is parsed as YAML so numbers and lists keep their types.
"""
import copy
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv

# Load environment variables from .env file if it exists
load_dotenv()

CONFIG_DIR = Path(__file__).parent
DEFAULT_CONFIG_PATH = CONFIG_DIR / "settings.yaml"
ENV_CONFIG_PREFIX = "EQM_DECODER_"
ENV_NESTING_SEPARATOR = "__"
SETTINGS_PATH_VARIABLE = ENV_CONFIG_PREFIX + "SETTINGS"


def _descend(tree: Dict[str, Any], keys: List[str]) -> Dict[str, Any]:
    for key in keys:
        if not isinstance(tree.get(key), dict):
            tree[key] = {}
        tree = tree[key]
    return tree


class Config:
    """Nested settings with dot-separated key access."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Args:
            config_path: Settings file. Defaults to $EQM_DECODER_SETTINGS, then the bundled settings.yaml.
        """
        chosen = config_path or os.environ.get(SETTINGS_PATH_VARIABLE)
        self.config_path = Path(chosen) if chosen else DEFAULT_CONFIG_PATH
        self.config: Dict[str, Any] = {}
        self.overridden_keys: List[str] = []
        self.load_config()

    def load_config(self) -> None:
        """Read the settings file, then apply environment overrides."""
        self.config = {}
        if self.config_path.exists():
            self.config = yaml.safe_load(self.config_path.read_text()) or {}

        self.overridden_keys = []
        for name, text in sorted(os.environ.items()):
            if not name.startswith(ENV_CONFIG_PREFIX) or name == SETTINGS_PATH_VARIABLE:
                continue
            # EQM_DECODER_SOLVER__STEP_SIZE -> solver.step_size
            key_path = name[len(ENV_CONFIG_PREFIX):].lower().replace(ENV_NESTING_SEPARATOR, ".")
            self.set(key_path, yaml.safe_load(text))
            self.overridden_keys.append(key_path)

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get a value by dot-separated path (e.g. 'solver.step_size').

        Returns:
            The value, or default when any part of the path is missing
        """
        value: Any = self.config
        for key in key_path.split("."):
            if not isinstance(value, dict) or key not in value:
                return default
            value = value[key]
        return value

    def section(self, name: str) -> Dict[str, Any]:
        """A copy of one top-level section; empty when absent."""
        value = self.config.get(name)
        return copy.deepcopy(value) if isinstance(value, dict) else {}

    def set(self, key_path: str, value: Any) -> None:
        *parents, leaf = key_path.split(".")
        _descend(self.config, parents)[leaf] = value

    def save(self, config_path: Optional[str] = None) -> None:
        """Write the current settings as YAML, to config_path or back to the loaded file."""
        save_path = Path(config_path) if config_path else self.config_path
        save_path.parent.mkdir(parents=True, exist_ok=True)
        save_path.write_text(yaml.safe_dump(self.config, default_flow_style=False, sort_keys=True))


config = Config()
