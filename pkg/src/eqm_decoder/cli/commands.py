"""
Command implementations. Each takes a resolved RunConfig and returns the written artifact paths.
"""
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..analysis import failed_checks, results_frame, run_verification_suite
from ..config import config
from ..core import ActionChunk, Condition
from ..envs import (
    Budget,
    EnvSpec,
    EpisodeResult,
    EqmPolicy,
    ExpertPolicy,
    FlowPolicy,
    encode_condition,
    episode_ids,
    generate_dataset,
    initial_state,
    run_closed_loop,
    scripted_expert,
    summarize,
)
from ..errors import AcceptanceError, ConfigurationError
from ..field import FieldConfig, FieldParams, init_params
from ..logging import get_logger
from ..solver import SolverConfig, WarmStartMode, cold_start_init, network_evaluator, solve_equilibrium
from ..training import (
    MAX_MEAN_RESIDUAL,
    MAX_MEDIAN_RATIO,
    Dataset,
    NormalizationStats,
    ScheduleSpec,
    TrainConfig,
    equilibrium_diagnostics,
    holdout_split,
    train,
)
from ..utils import load_checkpoint, load_dataset, save_checkpoint, save_dataset, write_csv
from .run_config import ENV_KINDS, RunConfig

logger = get_logger(__name__)

COMPARE_COLUMNS = ["env", "decoder", "success_rate", "mean_evals"]
SCAN_COLUMNS = ["tau", "success_rate", "mean_iterations", "median_iterations"]
WARM_COLUMNS = ["mode", "median_iters_to_tau", "success_rate"]
PAIR_COLUMNS = ["paired_cycles", "fraction_warm_le_cold", "median_ratio"]
DIAGNOSTIC_COLUMNS = ["split", "records", "mean_residual", "median_ratio", "passed"]


def episode_seeds(seed: int, episodes: int) -> List[int]:
    """Per-episode seeds derived from the global seed, shared by every decoder."""
    if episodes < 1:
        raise ConfigurationError(f"episodes must be at least 1, got {episodes}", config_key="episodes")
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(episodes)]


def _env_spec(kind: str) -> EnvSpec:
    if kind not in ENV_KINDS:
        raise ConfigurationError(f"unknown env '{kind}', expected one of {ENV_KINDS}", config_key="env")
    return EnvSpec.from_settings(kind=kind)


def _load_field(path: str, spec: EnvSpec, time_conditioned: bool) -> Tuple[FieldParams, NormalizationStats]:
    params, stats = load_checkpoint(path)
    cfg = params.config
    if cfg.time_conditioned != time_conditioned:
        kind = "time-conditioned" if time_conditioned else "time-free"
        raise ConfigurationError(f"{path} is not a {kind} field", config_key="checkpoint")
    if (cfg.horizon, cfg.action_dim, cfg.cond_width) != (spec.horizon, spec.action_dim, spec.cond_width):
        raise ConfigurationError(f"{path} does not match the {spec.kind.value} env shapes", config_key="checkpoint")
    return params, stats if stats is not None else NormalizationStats.identity(cfg.action_dim)


def _solver_config(rc: RunConfig, threshold: float, max_iterations: int) -> SolverConfig:
    return SolverConfig(
        step_size=rc["step_size"],
        momentum=rc["momentum"],
        threshold=threshold,
        max_iterations=max_iterations,
    )


def _warm_mode(rc: RunConfig) -> WarmStartMode:
    try:
        return WarmStartMode(rc["warm_start_mode"])
    except ValueError as e:
        raise ConfigurationError(f"unknown warm start mode '{rc['warm_start_mode']}'",
                                 config_key="warm_start_mode") from e


def cmd_gen_data(rc: RunConfig) -> List[Path]:
    spec = _env_spec(rc["env"])
    dataset = generate_dataset(spec, rc["episodes"], np.random.default_rng(rc.seed), rc["clean_fraction"])
    out = Path(rc["out"]) if rc["out"] else rc.output_dir / f"{spec.kind.value}.eqmd"
    save_dataset(out, dataset, force=rc.force)
    return [out]


def cmd_train(rc: RunConfig) -> List[Path]:
    dataset = load_dataset(rc["dataset"])
    objective = rc["objective"]
    time_conditioned = rc["time_conditioned"]
    if time_conditioned is None:
        time_conditioned = objective == "flow"
    field_config = FieldConfig(
        horizon=dataset.horizon,
        action_dim=dataset.action_dim,
        cond_width=dataset.cond_width,
        hidden_widths=tuple(rc["hidden_widths"]),
        activation=rc["activation"],
        time_conditioned=time_conditioned,
    )
    train_config = TrainConfig.from_settings(
        steps=rc["steps"],
        batch_size=rc["batch_size"],
        learning_rate=rc["learning_rate"],
        optimizer=rc["optimizer"],
        seed=rc.seed,
        schedule=ScheduleSpec(kind=rc["schedule"], slope=rc["slope"]),
        objective=objective,
    )
    train_set, held_out = _split_dataset(dataset, rc["holdout_fraction"], rc.seed)
    params, losses = train(train_set, train_config, init_params(field_config, rc.seed))

    out = Path(rc["out"]) if rc["out"] else rc.output_dir / f"{objective}.eqmf"
    loss_path = out.with_name(out.stem + "_loss.csv")
    save_checkpoint(out, params, dataset.stats, force=rc.force)
    write_csv(loss_path, pd.DataFrame({"step": np.arange(losses.size), "loss": losses}), force=rc.force)
    outputs = [out, loss_path]
    if objective == "eqm":
        diagnostics_path = out.with_name(out.stem + "_diagnostics.csv")
        evaluated = train_set if held_out is None else held_out
        frame = _diagnostics_frame(params, evaluated, held_out is not None, rc.seed)
        write_csv(diagnostics_path, frame, force=rc.force)
        outputs.append(diagnostics_path)
    return outputs


def _split_dataset(dataset: Dataset, fraction: float, seed: int) -> Tuple[Dataset, Optional[Dataset]]:
    if not 0.0 <= fraction < 1.0:
        raise ConfigurationError(f"holdout_fraction must lie in [0, 1), got {fraction}",
                                 config_key="holdout_fraction")
    if fraction == 0.0:
        return dataset, None
    train_set, held_out = holdout_split(dataset, episode_ids(dataset), fraction, seed)
    logger.info("Held out episodes", train_records=train_set.size,
                held_out_records=0 if held_out is None else held_out.size)
    return train_set, held_out


def _diagnostics_frame(params: FieldParams, dataset: Dataset, held_out: bool, seed: int) -> pd.DataFrame:
    """Equilibrium diagnostics of a trained field against the configured thresholds."""
    diagnostics = equilibrium_diagnostics(params, dataset, seed=seed)
    failed = diagnostics.failed_checks(
        max_mean_residual=float(config.get("training.diagnostics.max_mean_residual", MAX_MEAN_RESIDUAL)),
        max_median_ratio=float(config.get("training.diagnostics.max_median_ratio", MAX_MEDIAN_RATIO)),
    )
    if failed:
        logger.warning("Equilibrium thresholds missed", failed=failed, **diagnostics.to_dict())
    else:
        logger.info("Equilibrium diagnostics", **diagnostics.to_dict())
    row = {"split": "held_out" if held_out else "train", **diagnostics.to_dict(), "passed": not failed}
    return pd.DataFrame([row], columns=DIAGNOSTIC_COLUMNS)


def _check_budget(results: Sequence[EpisodeResult], budget: int, env: str, decoder: str) -> None:
    """Every decoded cycle must have spent exactly the matched number of field evaluations."""
    mismatched = sum(1 for r in results for e in r.cycle_evaluations if e != budget)
    if mismatched:
        raise AcceptanceError(
            f"{env}/{decoder}: {mismatched} cycles did not use {budget} field evaluations",
            failed_checks=[f"budget_{env}_{decoder}"],
            details={"budget": budget, "mismatched_cycles": mismatched},
        )
    logger.info("Budget verified", env=env, decoder=decoder, budget=budget)


def cmd_compare_budget(rc: RunConfig) -> List[Path]:
    """
    Expert, EqM and flow decoders at a matched number of field evaluations per cycle.

    EqM runs with τ = 0 and K_max = B − 1 (T + 1 = B evaluations); flow uses K = B Euler steps.
    """
    envs, eqm_paths, flow_paths = rc["envs"], rc["eqm_checkpoint"], rc["flow_checkpoint"]
    if not (len(envs) == len(eqm_paths) == len(flow_paths)):
        raise ConfigurationError("need one EqM and one flow checkpoint per env", config_key="envs")
    budget = rc["budget"]
    if budget < 2:
        raise ConfigurationError(f"budget must be at least 2, got {budget}", config_key="budget")
    seeds = episode_seeds(rc.seed, rc["episodes"])

    rows = []
    for kind, eqm_path, flow_path in zip(envs, eqm_paths, flow_paths):
        spec = _env_spec(kind)
        eqm_params, eqm_stats = _load_field(eqm_path, spec, time_conditioned=False)
        flow_params, flow_stats = _load_field(flow_path, spec, time_conditioned=True)
        decoders = [
            (ExpertPolicy(spec), None),
            (EqmPolicy(eqm_params, eqm_stats, _solver_config(rc, 0.0, budget - 1), _warm_mode(rc)),
             Budget(max_iterations=budget - 1, threshold=0.0)),
            (FlowPolicy(flow_params, flow_stats, budget), Budget(max_iterations=budget)),
        ]
        for policy, decoder_budget in decoders:
            results = run_closed_loop(policy, spec, seeds, decoder_budget, warm_start=rc["warm_start"])
            if decoder_budget is not None:
                _check_budget(results, budget, kind, policy.name)
            summary = summarize(results)
            rows.append({"env": kind, "decoder": policy.name, "success_rate": summary["success_rate"],
                         "mean_evals": summary["mean_evals"]})

    out = rc.output_dir / "compare_budget.csv"
    write_csv(out, pd.DataFrame(rows, columns=COMPARE_COLUMNS), force=rc.force)
    return [out]


def cmd_scan_threshold(rc: RunConfig) -> List[Path]:
    """
    Closed-loop success and iterations-to-τ across a threshold grid.

    Every run solves each cycle to the tightest τ and executes the chunk
    certified at its own τ; iteration statistics pool T(τ) over all runs.
    """
    grid = list(rc["thresholds"])
    if not grid:
        raise ConfigurationError("threshold grid is empty", config_key="thresholds")
    if any(b < a for a, b in zip(grid, grid[1:])) or grid[0] < 0:
        raise ConfigurationError("threshold grid must be non-negative and ascending", config_key="thresholds")
    spec = _env_spec(rc["env"])
    params, stats = _load_field(rc["checkpoint"], spec, time_conditioned=False)
    seeds = episode_seeds(rc.seed, rc["episodes"])

    success: Dict[float, float] = {}
    pooled: Dict[float, List[int]] = {tau: [] for tau in grid}
    for tau in grid:
        policy = EqmPolicy(params, stats, _solver_config(rc, tau, rc["max_iterations"]), _warm_mode(rc),
                           scan_thresholds=grid)
        results = run_closed_loop(policy, spec, seeds, warm_start=rc["warm_start"])
        success[tau] = summarize(results)["success_rate"]
        for result in results:
            for cycle in result.threshold_iterations:
                for scanned, iterations in cycle.items():
                    pooled[scanned].append(iterations)

    rows = []
    for tau in grid:
        counts = np.array(pooled[tau], dtype=np.float64)
        rows.append({
            "tau": tau,
            "success_rate": success[tau],
            "mean_iterations": float(counts.mean()) if counts.size else 0.0,
            "median_iterations": float(np.median(counts)) if counts.size else 0.0,
        })
    out = rc.output_dir / f"scan_threshold_{spec.kind.value}.csv"
    write_csv(out, pd.DataFrame(rows, columns=SCAN_COLUMNS), force=rc.force)
    return [out]


def pair_statistics(results: Sequence[EpisodeResult]) -> Dict[str, float]:
    """Paired warm/cold iteration counts; ratios divide by max(cold, 1)."""
    pairs = np.array([p for r in results for p in r.paired_iterations], dtype=np.float64).reshape(-1, 2)
    if not pairs.size:
        return {"paired_cycles": 0, "fraction_warm_le_cold": float("nan"), "median_ratio": float("nan")}
    warm, cold = pairs[:, 0], pairs[:, 1]
    return {
        "paired_cycles": int(pairs.shape[0]),
        "fraction_warm_le_cold": float(np.mean(warm <= cold)),
        "median_ratio": float(np.median(warm / np.maximum(cold, 1.0))),
    }


def cmd_warm_start_study(rc: RunConfig) -> List[Path]:
    spec = _env_spec(rc["env"])
    params, stats = _load_field(rc["checkpoint"], spec, time_conditioned=False)
    policy = EqmPolicy(params, stats, _solver_config(rc, rc["threshold"], rc["max_iterations"]), _warm_mode(rc))
    seeds = episode_seeds(rc.seed, rc["episodes"])

    rows = []
    warm_results: List[EpisodeResult] = []
    for mode, warm in (("cold", False), ("warm", True)):
        results = run_closed_loop(policy, spec, seeds, warm_start=warm, shadow_cold=warm)
        if warm:
            warm_results = results
        summary = summarize(results)
        rows.append({"mode": mode, "median_iters_to_tau": summary["median_iterations"],
                     "success_rate": summary["success_rate"]})

    pairs = pair_statistics(warm_results)
    logger.info("Warm start pairs", **pairs)
    out = rc.output_dir / f"warm_start_{spec.kind.value}.csv"
    pairs_out = rc.output_dir / f"warm_start_pairs_{spec.kind.value}.csv"
    write_csv(out, pd.DataFrame(rows, columns=WARM_COLUMNS), force=rc.force)
    write_csv(pairs_out, pd.DataFrame([pairs], columns=PAIR_COLUMNS), force=rc.force)
    return [out, pairs_out]


def _learned_probe(rc: RunConfig) -> Optional[Tuple]:
    if not rc["checkpoint"]:
        return None
    spec = _env_spec(rc["env"])
    params, stats = _load_field(rc["checkpoint"], spec, time_conditioned=False)
    state = initial_state(spec, np.random.default_rng(rc.seed))
    chunk = ActionChunk(stats.normalize(scripted_expert(state, spec).values))
    return network_evaluator(params), encode_condition(state, spec), chunk


def cmd_verify_convergence(rc: RunConfig) -> List[Path]:
    """Run the verification suite; any failed check raises AcceptanceError after the reports are written."""
    results, descent = run_verification_suite(rc.seed, _learned_probe(rc))
    report = rc.output_dir / "verification.csv"
    steps = rc.output_dir / "descent_steps.csv"
    write_csv(report, results_frame(results), force=rc.force)
    write_csv(steps, descent.to_frame(), force=rc.force)
    failed = failed_checks(results)
    if failed:
        raise AcceptanceError(f"{len(failed)} verification checks failed", failed_checks=failed)
    return [report, steps]


def cmd_solve(rc: RunConfig) -> List[Path]:
    params, stats = load_checkpoint(rc["checkpoint"])
    cfg = params.config
    if cfg.time_conditioned:
        raise ConfigurationError("solve needs a time-free field", config_key="checkpoint")
    stats = stats if stats is not None else NormalizationStats.identity(cfg.action_dim)
    vector = np.asarray(rc["cond"], dtype=np.float64)
    if vector.size != cfg.cond_width:
        raise ConfigurationError(f"condition must have {cfg.cond_width} entries, got {vector.size}",
                                 config_key="cond")
    cond = Condition.from_vector(vector, max(0, cfg.cond_width - cfg.action_dim))

    if rc["init"] == "cold":
        init = cold_start_init(cfg.horizon, cfg.action_dim, np.random.default_rng(rc.seed))
    elif rc["init"] == "zeros":
        init = ActionChunk(np.zeros((cfg.horizon, cfg.action_dim)))
    else:
        raise ConfigurationError(f"unknown init '{rc['init']}', expected cold or zeros", config_key="init")

    chunk, trace = solve_equilibrium(network_evaluator(params), cond, init,
                                     _solver_config(rc, rc["threshold"], rc["max_iterations"]))
    logger.info("Solved", iterations=trace.iterations, stop_reason=trace.stop_reason.value,
                residual=trace.final_residual)

    raw = stats.denormalize(chunk.values)
    chunk_frame = pd.DataFrame(raw, columns=[f"a{j}" for j in range(cfg.action_dim)])
    chunk_frame.insert(0, "h", np.arange(cfg.horizon))
    chunk_out = rc.output_dir / "chunk.csv"
    trace_out = rc.output_dir / "trace.csv"
    write_csv(chunk_out, chunk_frame, force=rc.force)
    write_csv(trace_out, trace.to_frame(), force=rc.force)
    return [chunk_out, trace_out]


COMMANDS = {
    "gen-data": cmd_gen_data,
    "train": cmd_train,
    "compare-budget": cmd_compare_budget,
    "scan-threshold": cmd_scan_threshold,
    "warm-start-study": cmd_warm_start_study,
    "verify-convergence": cmd_verify_convergence,
    "solve": cmd_solve,
}
