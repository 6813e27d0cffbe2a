"""
Command-line entry point for the EqM action decoder harness.

Usage:
    python -m eqm_decoder.cli <command> [--config FILE] [--key value ...]

Exit codes: 0 success, 1 usage or configuration error, 2 numeric failure,
3 verification failure.
"""
import argparse
import sys
from typing import List, NoReturn, Optional

from ..config import config
from ..errors import EXIT_OK, ConfigurationError, exit_code_for, log_error
from ..logging import get_logger, run_context
from .commands import COMMANDS
from .run_config import RunConfig, command_keys

logger = get_logger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises ConfigurationError instead of exiting with status 2."""

    def error(self, message: str) -> NoReturn:
        raise ConfigurationError(message, config_key="argv")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="eqm-decoder", description="EqM action decoder experiments")
    subparsers = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    for command in COMMANDS:
        sub = subparsers.add_parser(command)
        sub.add_argument("--config", help="key=value run configuration file")
        for key, spec in command_keys(command).items():
            flag = f"--{key.replace('_', '-')}"
            if spec.kind == "bool":
                # Bare flag means true
                sub.add_argument(flag, dest=key, nargs="?", const="true", default=None, help=spec.help)
            else:
                sub.add_argument(flag, dest=key, default=None, help=spec.help)
    return parser


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    """
    Parse command line arguments into a resolved run configuration.

    Returns:
        RunConfig for the selected command
    """
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    if command is None:
        raise ConfigurationError("no command given", config_key="command")
    config_file = args.pop("config")
    return RunConfig.resolve(command, config_file, args)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    try:
        rc = parse_args(argv)
        with run_context(command=rc.command, seed=rc.seed):
            logger.info("Starting command", output_dir=str(rc.artifact_dir), settings=str(config.config_path),
                        env_overrides=config.overridden_keys)
            resolved = rc.write_resolved()
            outputs = COMMANDS[rc.command](rc)
            logger.info("Finished command", outputs=[str(p) for p in outputs], resolved_config=str(resolved))
        return EXIT_OK
    except Exception as e:
        log_error(e, include_traceback=False)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
