"""
Acceptance pipeline for local development.

Generates demonstration data, trains the EqM and flow decoders with the
default settings, runs every experiment command through the CLI in
subprocesses and validates the result tables.
"""
import argparse
import os
import subprocess
import sys
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

# Add the src directory to the path to import the package
SRC_DIR = Path(__file__).resolve().parent.parent / "src"
sys.path.append(str(SRC_DIR))
from eqm_decoder.logging import get_logger  # noqa: E402
from eqm_decoder.utils import read_csv  # noqa: E402

logger = get_logger(__name__)

ENVS = ("reach", "two_waypoint", "press")
BUDGET = 64
EQM_SUCCESS_TARGET = 0.9
FLOW_SUCCESS_TARGET = 0.8
WARM_LE_COLD_TARGET = 0.8


def parse_args() -> Dict[str, Any]:
    """
    Parse command line arguments.

    Returns:
        Dictionary of arguments
    """
    parser = argparse.ArgumentParser(description="Run the decoder acceptance pipeline locally")
    parser.add_argument(
        "--output-dir",
        default="local_dev/output",
        help="Directory to store datasets, checkpoints and result tables",
    )
    parser.add_argument(
        "--episodes",
        type=int,
        default=200,
        help="Closed-loop episodes per evaluation",
    )
    parser.add_argument(
        "--steps",
        type=int,
        default=20000,
        help="Training steps per decoder",
    )
    parser.add_argument(
        "--envs",
        default=",".join(ENVS),
        help="Comma-separated environments to run",
    )

    args = parser.parse_args()

    return {
        "output_dir": Path(args.output_dir),
        "episodes": args.episodes,
        "steps": args.steps,
        "envs": [e.strip() for e in args.envs.split(",") if e.strip()],
    }


def run_cli(command: str, output_dir: Path, *options: str) -> None:
    """
    Run one CLI command in a subprocess.

    Args:
        command: Subcommand name
        output_dir: Artifact directory passed as --output-dir
        options: Further flags and values
    """
    argv = [sys.executable, "-m", "eqm_decoder.cli", command, "--output-dir", str(output_dir), "--force", *options]
    env = dict(os.environ, PYTHONPATH=str(SRC_DIR))

    logger.info("Running command", command=" ".join(argv[2:]))
    result = subprocess.run(argv, capture_output=True, text=True, env=env)

    if result.returncode != 0:
        logger.error(
            "Command failed",
            command=command,
            returncode=result.returncode,
            stderr=result.stderr,
        )
        raise RuntimeError(f"{command} failed with exit code {result.returncode}: {result.stderr}")

    logger.info("Command completed successfully", command=command)


def prepare_models(output_dir: Path, env: str, steps: int) -> Dict[str, Path]:
    """
    Generate the expert dataset of one environment and train both decoders on it.

    Returns:
        Paths of the dataset, the two checkpoints and the EqM diagnostics table
    """
    env_dir = output_dir / env
    dataset = env_dir / f"{env}.eqmd"
    run_cli("gen-data", env_dir, "--env", env)
    common = ["--dataset", str(dataset), "--steps", str(steps)]
    run_cli("train", env_dir, *common, "--objective", "eqm")
    run_cli("train", env_dir, *common, "--objective", "flow")
    return {
        "dataset": dataset,
        "eqm": env_dir / "eqm.eqmf",
        "flow": env_dir / "flow.eqmf",
        "diagnostics": env_dir / "eqm_diagnostics.csv",
    }


def check_diagnostics_table(table: pd.DataFrame, env: str, failures: List[str]) -> None:
    """The trained EqM field must hold its equilibria on held-out episodes."""
    row = table.iloc[0]
    if row["split"] != "held_out":
        failures.append(f"{env} equilibrium diagnostics ran on the {row['split']} split, expected held_out")
    if not bool(row["passed"]):
        failures.append(
            f"{env} equilibrium diagnostics missed: mean residual {row['mean_residual']:.4f}, "
            f"median ratio {row['median_ratio']:.4f}"
        )


def check_budget_table(table: pd.DataFrame, failures: List[str]) -> None:
    for row in table.itertuples():
        if row.decoder != "expert" and abs(row.mean_evals - BUDGET) > 1e-9:
            failures.append(f"{row.env}/{row.decoder} used {row.mean_evals} evaluations per cycle, expected {BUDGET}")
        if row.decoder == "expert" and row.success_rate < 1.0:
            failures.append(f"{row.env} expert success {row.success_rate} < 1")
        if row.env == "reach" and row.decoder == "flow" and row.success_rate < FLOW_SUCCESS_TARGET:
            failures.append(f"reach flow success {row.success_rate} < {FLOW_SUCCESS_TARGET}")


def check_scan_table(table: pd.DataFrame, env: str, failures: List[str]) -> None:
    means = table["mean_iterations"].tolist()
    if any(later > earlier for earlier, later in zip(means, means[1:])):
        failures.append(f"{env} mean iterations are not non-increasing in tau: {means}")
    success = table["success_rate"].tolist()
    non_monotone = any(later > earlier for earlier, later in zip(success, success[1:]))
    logger.info("Threshold scan", env=env, success=success, success_non_monotone=non_monotone)


def check_warm_start_tables(warm: pd.DataFrame, pairs: pd.DataFrame, failures: List[str]) -> None:
    cold_success = float(warm.loc[warm["mode"] == "cold", "success_rate"].iloc[0])
    if cold_success < EQM_SUCCESS_TARGET:
        failures.append(f"reach EqM success {cold_success} < {EQM_SUCCESS_TARGET}")
    fraction = float(pairs["fraction_warm_le_cold"].iloc[0])
    if fraction < WARM_LE_COLD_TARGET:
        failures.append(f"warm <= cold in {fraction:.3f} of paired cycles, expected >= {WARM_LE_COLD_TARGET}")
    logger.info("Warm-start pairs", median_ratio=float(pairs["median_ratio"].iloc[0]), fraction=fraction)


def check_determinism(output_dir: Path, checkpoint: Path, failures: List[str]) -> None:
    """Repeat a solve and a verification run and compare the files byte for byte."""
    solve = ["--checkpoint", str(checkpoint), "--cond", "0.2,0.3,0,0.7,0.6"]
    for name in ("first", "second"):
        run_cli("solve", output_dir / "determinism" / name, *solve)
        run_cli("verify-convergence", output_dir / "determinism" / name, "--checkpoint", str(checkpoint))
    for table in ("chunk.csv", "trace.csv", "verification.csv", "descent_steps.csv"):
        first = (output_dir / "determinism" / "first" / table).read_bytes()
        second = (output_dir / "determinism" / "second" / table).read_bytes()
        if first != second:
            failures.append(f"{table} differs between identical runs")


def main() -> None:
    """
    Main entry point for the acceptance pipeline.
    """
    args = parse_args()
    output_dir = args["output_dir"]
    output_dir.mkdir(parents=True, exist_ok=True)
    episodes = str(args["episodes"])
    failures: List[str] = []

    models = {env: prepare_models(output_dir, env, args["steps"]) for env in args["envs"]}
    for env, paths in models.items():
        check_diagnostics_table(read_csv(paths["diagnostics"]), env, failures)

    run_cli(
        "compare-budget",
        output_dir,
        "--envs", ",".join(models),
        "--eqm-checkpoint", ",".join(str(m["eqm"]) for m in models.values()),
        "--flow-checkpoint", ",".join(str(m["flow"]) for m in models.values()),
        "--budget", str(BUDGET),
        "--episodes", episodes,
    )
    check_budget_table(read_csv(output_dir / "compare_budget.csv"), failures)

    for env, paths in models.items():
        run_cli("scan-threshold", output_dir, "--env", env, "--checkpoint", str(paths["eqm"]), "--episodes", episodes)
        check_scan_table(read_csv(output_dir / f"scan_threshold_{env}.csv"), env, failures)

    if "reach" in models:
        reach = models["reach"]
        run_cli("warm-start-study", output_dir, "--env", "reach", "--checkpoint", str(reach["eqm"]),
                "--episodes", episodes)
        check_warm_start_tables(
            read_csv(output_dir / "warm_start_reach.csv"),
            read_csv(output_dir / "warm_start_pairs_reach.csv"),
            failures,
        )
        check_determinism(output_dir, reach["eqm"], failures)

    if failures:
        for failure in failures:
            logger.error("Acceptance check failed", failure=failure)
        sys.exit(1)

    logger.info("Acceptance pipeline passed", output_dir=str(output_dir), envs=args["envs"])


if __name__ == "__main__":
    main()
