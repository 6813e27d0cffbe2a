"""
Per-command run configuration: settings defaults < key=value file < flags.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional

from dotenv import dotenv_values

from ..config import config
from ..errors import ConfigurationError

RESOLVED_CONFIG_NAME = "resolved_config.txt"
ENV_KINDS = ("reach", "two_waypoint", "press")


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _split(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


PARSERS: Dict[str, Callable[[str], Any]] = {
    "int": int,
    "float": float,
    "str": str,
    "bool": _parse_bool,
    "ints": lambda text: [int(part) for part in _split(text)],
    "floats": lambda text: [float(part) for part in _split(text)],
    "strs": _split,
}


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(format_value(v) for v in value)
    if value is None:
        return ""
    return str(value)


@dataclass(frozen=True)
class KeySpec:
    kind: str
    default: Any = None
    help: str = ""
    required: bool = False


def _common_keys() -> Dict[str, KeySpec]:
    return {
        "seed": KeySpec("int", int(config.get("cli.seed", 0)), "global seed"),
        "output_dir": KeySpec("str", str(config.get("cli.output_dir", "runs")), "artifact directory"),
        "force": KeySpec("bool", False, "overwrite existing artifacts"),
    }


def _eval_keys() -> Dict[str, KeySpec]:
    return {
        "episodes": KeySpec("int", int(config.get("cli.episodes", 200)), "closed-loop episodes"),
        "warm_start": KeySpec("bool", False, "warm-start each solve from the previous output"),
        "warm_start_mode": KeySpec("str", config.get("solver.warm_start_mode", "shifted"), "shifted or leading"),
        "step_size": KeySpec("float", float(config.get("solver.step_size", 0.1)), "solver step size"),
        "momentum": KeySpec("float", float(config.get("solver.momentum", 0.9)), "solver momentum"),
    }


def command_keys(command: str) -> Dict[str, KeySpec]:
    """The recognized keys of a command with their settings-backed defaults."""
    keys = _common_keys()
    if command == "gen-data":
        keys.update({
            "env": KeySpec("str", config.get("envs.kind", "reach"), "reach, two_waypoint or press"),
            "episodes": KeySpec("int", int(config.get("envs.episodes", 500)), "expert episodes"),
            "clean_fraction": KeySpec("float", float(config.get("envs.clean_fraction", 0.2)),
                                      "share of episodes starting at the centre"),
            "out": KeySpec("str", None, "dataset file (default <output_dir>/<env>.eqmd)"),
        })
    elif command == "train":
        keys.update({
            "dataset": KeySpec("str", None, "dataset file", required=True),
            "objective": KeySpec("str", config.get("training.objective", "eqm"), "eqm or flow"),
            "time_conditioned": KeySpec("bool", None, "field takes a time input (default: objective == flow)"),
            "steps": KeySpec("int", int(config.get("training.steps", 20000)), "training steps"),
            "batch_size": KeySpec("int", int(config.get("training.batch_size", 64)), "minibatch size"),
            "learning_rate": KeySpec("float", float(config.get("training.learning_rate", 1e-3)), "learning rate"),
            "optimizer": KeySpec("str", config.get("training.optimizer", "adam"), "adam or sgd"),
            "schedule": KeySpec("str", config.get("training.schedule.kind", "linear"), "linear or truncated_linear"),
            "slope": KeySpec("float", float(config.get("training.schedule.slope", 4.0)), "truncated-linear slope"),
            "hidden_widths": KeySpec("ints", list(config.get("field.hidden_widths", [128, 128])), "hidden widths"),
            "activation": KeySpec("str", config.get("field.activation", "tanh"), "tanh or linear"),
            "holdout_fraction": KeySpec("float", float(config.get("training.holdout_fraction", 0.1)),
                                        "share of episodes held out for the equilibrium diagnostics"),
            "out": KeySpec("str", None, "checkpoint file (default <output_dir>/<objective>.eqmf)"),
        })
    elif command == "compare-budget":
        keys.update(_eval_keys())
        keys.update({
            "envs": KeySpec("strs", ["reach"], "comma-separated env kinds"),
            "eqm_checkpoint": KeySpec("strs", None, "EqM checkpoints, one per env", required=True),
            "flow_checkpoint": KeySpec("strs", None, "flow checkpoints, one per env", required=True),
            "budget": KeySpec("int", int(config.get("cli.budget", 64)), "field evaluations per cycle"),
        })
    elif command == "scan-threshold":
        keys.update(_eval_keys())
        keys.update({
            "checkpoint": KeySpec("str", None, "EqM checkpoint", required=True),
            "env": KeySpec("str", config.get("envs.kind", "reach"), "env kind"),
            "thresholds": KeySpec("floats", list(config.get("cli.scan_thresholds", [])), "ascending threshold grid"),
            "max_iterations": KeySpec("int", int(config.get("cli.scan_max_iterations", 256)), "iteration cap"),
        })
    elif command == "warm-start-study":
        keys.update(_eval_keys())
        keys.update({
            "checkpoint": KeySpec("str", None, "EqM checkpoint", required=True),
            "env": KeySpec("str", config.get("envs.kind", "reach"), "env kind"),
            "threshold": KeySpec("float", float(config.get("solver.threshold", 1e-3)), "residual threshold"),
            "max_iterations": KeySpec("int", int(config.get("cli.eval_max_iterations", 64)), "iteration cap"),
        })
    elif command == "verify-convergence":
        keys.update({
            "checkpoint": KeySpec("str", None, "optional EqM checkpoint for the learned-field probe"),
            "env": KeySpec("str", config.get("envs.kind", "reach"), "env of the probed data chunk"),
        })
    elif command == "solve":
        keys.update({
            "checkpoint": KeySpec("str", None, "EqM checkpoint", required=True),
            "cond": KeySpec("floats", None, "condition vector", required=True),
            "init": KeySpec("str", "cold", "cold or zeros"),
            "threshold": KeySpec("float", float(config.get("solver.threshold", 1e-3)), "residual threshold"),
            "max_iterations": KeySpec("int", int(config.get("solver.max_iterations", 300)), "iteration cap"),
            "step_size": KeySpec("float", float(config.get("solver.step_size", 0.1)), "solver step size"),
            "momentum": KeySpec("float", float(config.get("solver.momentum", 0.9)), "solver momentum"),
        })
    else:
        raise ConfigurationError(f"unknown command '{command}'", config_key="command")
    return keys


@dataclass
class RunConfig:
    """Resolved key values of one command invocation."""

    command: str
    values: Dict[str, Any]

    @classmethod
    def resolve(
        cls,
        command: str,
        config_file: Optional[str] = None,
        overrides: Optional[Mapping[str, Optional[str]]] = None,
    ) -> "RunConfig":
        """
        Merge settings defaults, an optional key=value file and flag overrides.

        Args:
            command: Subcommand name
            config_file: Flat key=value file with '#' comments
            overrides: Flag values as strings; None means not given

        Returns:
            The resolved configuration
        """
        keys = command_keys(command)
        raw: Dict[str, str] = {}
        if config_file:
            path = Path(config_file)
            if not path.is_file():
                raise ConfigurationError(f"config file {path} does not exist", config_key="config")
            for key, value in dotenv_values(path, interpolate=False).items():
                if key not in keys:
                    raise ConfigurationError(f"unknown key '{key}' for {command}", config_key=key)
                raw[key] = "" if value is None else value
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key not in keys:
                raise ConfigurationError(f"unknown key '{key}' for {command}", config_key=key)
            raw[key] = value

        values: Dict[str, Any] = {}
        for key, spec in keys.items():
            if key in raw:
                try:
                    values[key] = PARSERS[spec.kind](raw[key])
                except ValueError as e:
                    raise ConfigurationError(f"invalid value for '{key}': {raw[key]!r}", config_key=key) from e
            elif spec.required:
                raise ConfigurationError(f"'{key}' is required for {command}", config_key=key)
            else:
                values[key] = spec.default
        return cls(command=command, values=values)

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    @property
    def seed(self) -> int:
        return int(self.values["seed"])

    @property
    def force(self) -> bool:
        return bool(self.values["force"])

    @property
    def output_dir(self) -> Path:
        return Path(self.values["output_dir"])

    @property
    def artifact_dir(self) -> Path:
        """Directory of the command's artifacts: the parent of --out when given, else the output directory."""
        out = self.values.get("out")
        return Path(out).parent if out else self.output_dir

    def render(self) -> str:
        lines = [f"# command: {self.command}"]
        lines += [f"{key}={format_value(self.values[key])}" for key in sorted(self.values)]
        return "\n".join(lines) + "\n"

    def write_resolved(self) -> Path:
        """Write resolved_config.txt next to the command's artifacts (always replaced)."""
        self.artifact_dir.mkdir(parents=True, exist_ok=True)
        target = self.artifact_dir / RESOLVED_CONFIG_NAME
        target.write_text(self.render())
        return target
