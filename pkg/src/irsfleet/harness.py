"""Monte Carlo experiment runner, metrics aggregation and CSV emission.

Every trial is a pure function of (master seed, sigma, trial index,
strategy): substreams come from a counter-based generator keyed on those
values, never on execution order, so trials can run in any order (or
concurrently) and reproduce bit-identically. All strategies at the same
(sigma, trial) share one channel and traffic realization, which makes the
strategy comparison paired.
"""

import csv
import dataclasses
import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .geometry import DistanceTables, ScenarioLayout, compute_distances
from .planner import (
    GainTensor,
    PlacementPlan,
    STRATEGY_RANDOM,
    STRATEGY_ROBOTIC,
    STRATEGY_TERRESTRIAL,
    build_gain_tensor,
    evaluate_plan,
    solve_adaptive_plan,
    solve_fixed_plan,
    solve_random_plan,
    validate_plan,
)
from .routing import TrajectoryPlan, plan_trajectories, validate_trajectory
from .scenario import Scenario
from .traffic import sample_traffic
from .channel import realize_channel

__all__ = [
    "ExperimentConfig",
    "TrialMetrics",
    "TrialResult",
    "ExperimentResult",
    "TrialError",
    "KNOWN_STRATEGIES",
    "RNG_NAME",
    "trial_rng",
    "run_trial",
    "run_experiment",
    "summarize",
]

KNOWN_STRATEGIES = (STRATEGY_ROBOTIC, STRATEGY_TERRESTRIAL, STRATEGY_RANDOM)
RNG_NAME = "philox"

# Substream tags within one (seed, sigma, trial) cell.
_STREAM_CHANNEL = 0
_STREAM_TRAFFIC = 1
_STREAM_PLACEMENT = 2


class TrialError(RuntimeError):
    """A module failure, annotated with the trial that triggered it."""


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: Scenario
    strategies: tuple[str, ...] = KNOWN_STRATEGIES
    sigma_list: tuple[float, ...] = (1.8, 2.8, 3.6)
    trials: int = 100
    master_seed: int = 1
    output_dir: Path | None = None
    keep_results: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.sigma_list:
            raise ValueError("sigma_list must not be empty")
        if not self.strategies:
            raise ValueError("strategies must not be empty")
        for strategy in self.strategies:
            if strategy not in KNOWN_STRATEGIES:
                raise ValueError(f"unknown strategy {strategy!r}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class TrialMetrics:
    strategy: str
    sigma: float
    trial: int
    mean_gain: float
    served_traffic: float      # Mbps/km^2 aggregated over epochs
    total_distance_m: float    # 0 for strategies that never relocate
    energy_feasible: bool


@dataclass(frozen=True, eq=False)
class TrialResult:
    metrics: TrialMetrics
    plan: PlacementPlan
    tensor: GainTensor
    trajectory: TrajectoryPlan | None


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    metrics: list[TrialMetrics]
    summaries: list[dict]
    results: list[TrialResult] | None


def trial_rng(
    master_seed: int,
    sigma: float,
    trial_index: int,
    stream: int,
) -> np.random.Generator:
    """Counter-based substream keyed on trial coordinates, not run order.

    Sigma enters through its IEEE-754 bit pattern so equal values key equal
    streams regardless of how they were produced.
    """
    sigma_bits = struct.unpack("<Q", struct.pack("<d", float(sigma)))[0]
    seq = np.random.SeedSequence(
        entropy=(int(master_seed), sigma_bits, int(trial_index), int(stream))
    )
    return np.random.Generator(np.random.Philox(seq))


class _TrialEngine:
    """Precomputes everything trial-independent for one scenario."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.layout: ScenarioLayout = scenario.layout()
        self.distances: DistanceTables = compute_distances(self.layout)

    def run(
        self,
        sigma: float,
        trial_index: int,
        strategy: str,
        master_seed: int,
    ) -> TrialResult:
        scenario = self.scenario
        traffic_model = dataclasses.replace(scenario.traffic, sigma_log=sigma)
        m = scenario.solver.fleet_size

        channel_rng = trial_rng(master_seed, sigma, trial_index, _STREAM_CHANNEL)
        realization = realize_channel(self.distances, scenario.radio, channel_rng)
        traffic_rng = trial_rng(master_seed, sigma, trial_index, _STREAM_TRAFFIC)
        field = sample_traffic(traffic_model, self.layout.n_grids, traffic_rng)
        tensor = build_gain_tensor(realization, self.distances, field, scenario.radio)

        if strategy == STRATEGY_ROBOTIC:
            plan = solve_adaptive_plan(tensor, m)
        elif strategy == STRATEGY_TERRESTRIAL:
            plan = solve_fixed_plan(tensor, m, scenario.solver.terrestrial_mode)
        elif strategy == STRATEGY_RANDOM:
            placement_rng = trial_rng(
                master_seed, sigma, trial_index, _STREAM_PLACEMENT
            )
            plan = solve_random_plan(
                tensor,
                m,
                placement_rng,
                scenario.solver.random_mode,
                scenario.solver.random_max_iterations,
            )
        else:
            raise ValueError(f"unknown strategy {strategy!r}")

        validate_plan(plan, tensor, m)
        evaluation = evaluate_plan(plan, tensor)

        trajectory = None
        total_distance = 0.0
        feasible = True
        if strategy == STRATEGY_ROBOTIC:
            trajectory = plan_trajectories(plan, self.layout, scenario.platform)
            validate_trajectory(trajectory, plan, self.layout)
            total_distance = trajectory.total_distance_m
            feasible = trajectory.feasible

        metrics = TrialMetrics(
            strategy=strategy,
            sigma=float(sigma),
            trial=int(trial_index),
            mean_gain=evaluation.objective,
            served_traffic=float(evaluation.served_traffic.sum()),
            total_distance_m=total_distance,
            energy_feasible=feasible,
        )
        return TrialResult(
            metrics=metrics, plan=plan, tensor=tensor, trajectory=trajectory
        )


def run_trial(
    scenario: Scenario,
    sigma: float,
    trial_index: int,
    strategy: str,
    master_seed: int,
) -> TrialResult:
    """Run one end-to-end trial; identical inputs give bit-identical output."""
    engine = _TrialEngine(scenario)
    try:
        return engine.run(sigma, trial_index, strategy, master_seed)
    except Exception as err:
        raise TrialError(
            f"strategy={strategy} sigma={sigma} trial={trial_index}: {err}"
        ) from err


def summarize(metrics: list[TrialMetrics]) -> list[dict]:
    """Per-(strategy, sigma) mean/std/confidence rows, recomputable from
    the per-trial table."""
    groups: dict[tuple[str, float], list[TrialMetrics]] = {}
    order: list[tuple[str, float]] = []
    for row in metrics:
        key = (row.strategy, row.sigma)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)

    summaries = []
    for strategy, sigma in order:
        rows = groups[(strategy, sigma)]
        n = len(rows)

        def stats(values: list[float]) -> tuple[float, float, float]:
            mean = float(np.mean(values))
            std = float(np.std(values, ddof=1)) if n > 1 else 0.0
            ci95 = 1.96 * std / math.sqrt(n) if n > 1 else 0.0
            return mean, std, ci95

        gain = stats([r.mean_gain for r in rows])
        served = stats([r.served_traffic for r in rows])
        distance = stats([r.total_distance_m for r in rows])
        summaries.append(
            {
                "strategy": strategy,
                "sigma": sigma,
                "trials": n,
                "mean_gain_mean": gain[0],
                "mean_gain_std": gain[1],
                "mean_gain_ci95": gain[2],
                "served_traffic_mean": served[0],
                "served_traffic_std": served[1],
                "served_traffic_ci95": served[2],
                "total_distance_mean": distance[0],
                "total_distance_std": distance[1],
                "all_energy_feasible": all(r.energy_feasible for r in rows),
            }
        )
    return summaries


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


TRIALS_HEADER = [
    "strategy",
    "sigma",
    "trial",
    "mean_gain",
    "served_traffic_mbps_km2",
    "total_distance_m",
    "energy_feasible",
]

SUMMARY_HEADER = [
    "strategy",
    "sigma",
    "trials",
    "mean_gain_mean",
    "mean_gain_std",
    "mean_gain_ci95",
    "served_traffic_mean",
    "served_traffic_std",
    "served_traffic_ci95",
    "total_distance_mean",
    "total_distance_std",
    "all_energy_feasible",
]

TRAJECTORY_HEADER = [
    "trial",
    "uav_id",
    "epoch",
    "site_x",
    "site_y",
    "leg_m",
    "cumulative_m",
    "e_fly_j",
    "feasible_flag",
]

PLACEMENT_HEADER = [
    "strategy",
    "trial",
    "epoch",
    "grid_row",
    "grid_col",
    "site_x",
    "site_y",
    "gain",
    "demand",
]


def write_trials_csv(metrics: list[TrialMetrics], path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIALS_HEADER)
        for row in metrics:
            writer.writerow(
                [
                    row.strategy,
                    _fmt(row.sigma),
                    row.trial,
                    _fmt(row.mean_gain),
                    _fmt(row.served_traffic),
                    _fmt(row.total_distance_m),
                    _fmt(row.energy_feasible),
                ]
            )


def write_summary_csv(summaries: list[dict], path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for row in summaries:
            writer.writerow([_fmt(row[column]) for column in SUMMARY_HEADER])


def trajectory_rows(
    trial_index: int,
    trajectory: TrajectoryPlan,
    layout: ScenarioLayout,
) -> list[list]:
    """Rows for the per-unit travel CSV.

    Epoch 0 is the depot departure point, epochs 1..T the anchored sites,
    epoch T+1 the depot return; cumulative distance and flight energy are
    the totals after arriving at that row's position.
    """
    m, epochs = trajectory.routes.shape
    rows = []
    for k in range(m):
        ledger = trajectory.ledgers[k]
        ratio = ledger.e_fly_j / trajectory.cumulative_m[k, -1] if (
            trajectory.cumulative_m[k, -1] > 0
        ) else 0.0
        positions = [(layout.bs_position, 0.0, 0.0)]
        for t in range(epochs):
            site = layout.candidate_sites[trajectory.routes[k, t]]
            positions.append(
                (site, trajectory.leg_m[k, t], trajectory.cumulative_m[k, t])
            )
        positions.append(
            (
                layout.bs_position,
                trajectory.leg_m[k, epochs],
                trajectory.cumulative_m[k, epochs],
            )
        )
        for epoch, (point, leg, cum) in enumerate(positions):
            rows.append(
                [
                    trial_index,
                    k,
                    epoch,
                    _fmt(float(point[0])),
                    _fmt(float(point[1])),
                    _fmt(float(leg)),
                    _fmt(float(cum)),
                    _fmt(float(cum * ratio)),
                    _fmt(ledger.feasible),
                ]
            )
    return rows


def placement_rows(
    trial_index: int,
    result: TrialResult,
    layout: ScenarioLayout,
) -> list[list]:
    tensor = result.tensor
    grid_pos = {int(g): q for q, g in enumerate(tensor.weak_grids)}
    site_pos = {int(s): j for j, s in enumerate(tensor.sites)}
    rows = []
    for t, epoch_pairs in enumerate(result.plan.assignments):
        for grid, site in epoch_pairs:
            q = grid_pos[grid]
            r, c = layout.grid_row_col(grid)
            point = layout.candidate_sites[site]
            rows.append(
                [
                    result.metrics.strategy,
                    trial_index,
                    t + 1,
                    r,
                    c,
                    _fmt(float(point[0])),
                    _fmt(float(point[1])),
                    _fmt(float(tensor.gains[t, q, site_pos[site]])),
                    _fmt(float(tensor.demand[t, q])),
                ]
            )
    return rows


def _write_rows(path, header: list[str], rows: list[list]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_metadata(config: ExperimentConfig, path) -> None:
    from .scenario import _SCHEMA  # section/key listing for the echo

    scenario_echo = {}
    sections = {
        "geometry": config.scenario.geometry,
        "radio": config.scenario.radio,
        "platform": config.scenario.platform,
        "traffic": config.scenario.traffic,
        "solver": config.scenario.solver,
    }
    for section, obj in sections.items():
        scenario_echo[section] = {}
        for key, (_, target) in _SCHEMA[section].items():
            if target is None:
                scenario_echo[section][key] = "independent"
            else:
                value = getattr(obj, target)
                if isinstance(value, tuple):
                    value = list(value)
                scenario_echo[section][key] = value
    payload = {
        "package": "irsfleet",
        "version": __version__,
        "generator": RNG_NAME,
        "master_seed": config.master_seed,
        "trials": config.trials,
        "sigma_list": list(config.sigma_list),
        "strategies": list(config.strategies),
        "scenario": scenario_echo,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Full (strategy x sigma x trial) cross product with CSV emission.

    Output files, when an output directory is set: trials.csv,
    summary.csv, one trajectories_sigma_<s>.csv per sigma for the
    relocating strategy, and run_metadata.json. Output is a pure function
    of the scenario and the master seed.
    """
    out = None
    if config.output_dir is not None:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        # Fail on an unwritable directory before any compute.
        write_metadata(config, out / "run_metadata.json")

    engine = _TrialEngine(config.scenario)
    metrics: list[TrialMetrics] = []
    kept: list[TrialResult] | None = [] if config.keep_results else None
    trajectory_tables: dict[float, list[list]] = {}

    for strategy in config.strategies:
        for sigma in config.sigma_list:
            for trial in range(config.trials):
                try:
                    result = engine.run(sigma, trial, strategy, config.master_seed)
                except Exception as err:
                    raise TrialError(
                        f"strategy={strategy} sigma={sigma} trial={trial}: {err}"
                    ) from err
                metrics.append(result.metrics)
                if kept is not None:
                    kept.append(result)
                if result.trajectory is not None and out is not None:
                    trajectory_tables.setdefault(float(sigma), []).extend(
                        trajectory_rows(trial, result.trajectory, engine.layout)
                    )

    summaries = summarize(metrics)
    if out is not None:
        write_trials_csv(metrics, out / "trials.csv")
        write_summary_csv(summaries, out / "summary.csv")
        for sigma, rows in trajectory_tables.items():
            _write_rows(
                out / f"trajectories_sigma_{_fmt(sigma)}.csv",
                TRAJECTORY_HEADER,
                rows,
            )
    return ExperimentResult(metrics=metrics, summaries=summaries, results=kept)
