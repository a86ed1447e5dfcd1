"""Reproduction harness: single runs, replicate ensembles, parameter sweeps,
and the bistability (hysteresis) experiment.

Determinism contract: a run is a pure function of (config, replicate index).
Replicate i draws from the numpy stream seeded with (master_seed, i), so
adding replicates never perturbs existing ones.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .config import ExperimentConfig, config_to_mapping, with_nu
from .evolution import (EvolutionParams, ExtinctionError, Trajectory,
                        best_response_field, step)
from .game import COOPERATE, DEFECT, PayoffMatrix
from .io import (write_cluster_report, write_manifest, write_snapshot_csv,
                 write_stats_csv)
from .metrics import cooperation_clusters, summarize
from .world import FamilySpec, GridWorld, init_world, snapshot_codes


def replicate_rng(master_seed: int, replicate: int) -> np.random.Generator:
    return np.random.default_rng([master_seed, replicate])


def run(config: ExperimentConfig, replicate: int = 0) -> Trajectory:
    """Execute one simulation run; returns its full trajectory.

    Stats rows cover t = 0 (initial state, before any step) through
    t = config.steps. Snapshots are recorded at the configured times, where
    time t means the state after t steps.
    """
    rng = replicate_rng(config.master_seed, replicate)
    world = init_world(config.width, config.height, config.occupancy,
                       config.families, rng)
    traj = Trajectory(params=config.params,
                      seed=(config.master_seed, replicate))
    snaps = set(config.snapshot_steps)
    if 0 in snaps:
        traj.snapshots[0] = snapshot_codes(world)
    traj.stats.append(summarize(world, 0))
    for t in range(1, config.steps + 1):
        try:
            traj.stats.append(step(world, config.params, rng, t))
        except ExtinctionError:
            traj.extinct_at = t
            break
        if t in snaps:
            traj.snapshots[t] = snapshot_codes(world)
    traj.final_world = world
    return traj


def final_window(traj: Trajectory, fraction: float = 0.1) -> tuple[float, float]:
    """(mean coop_fraction, mean rho) over the last `fraction` of the run."""
    n = max(1, int(round(len(traj.stats) * fraction)))
    tail = traj.stats[-n:]
    coop = sum(s.coop_fraction for s in tail) / len(tail)
    rho = sum(s.mean_rho for s in tail) / len(tail)
    return coop, rho


def persist_run(traj: Trajectory, config: ExperimentConfig, out_dir,
                replicate: int = 0, wall_time: float | None = None) -> Path:
    """Write stats.csv, snapshots/ and the manifest for one run."""
    run_dir = Path(out_dir) / f"rep{replicate:03d}"
    run_dir.mkdir(parents=True, exist_ok=True)
    fam_ids = [f.family_id for f in config.families]
    write_stats_csv(run_dir / "stats.csv", traj.stats, fam_ids)
    for t, codes in sorted(traj.snapshots.items()):
        write_snapshot_csv(run_dir / "snapshots" / f"step{t:05d}.csv", codes)
    if traj.final_world is not None:
        write_cluster_report(run_dir / "clusters.csv", traj.stats[-1].step,
                             cooperation_clusters(traj.final_world))
    manifest = dict(config_to_mapping(config))
    manifest.update({
        "replicate": replicate,
        "rng_stream": f"({config.master_seed}, {replicate})",
        "build": f"sociolab {__version__}",
        "extinct_at": traj.extinct_at if traj.extinct_at is not None else "none",
        "utility_variant": "neighbor average includes games with third parties",
        "wall_time_s": round(wall_time, 3) if wall_time is not None else "",
    })
    write_manifest(run_dir / "manifest", manifest)
    return run_dir


@dataclass
class EnsembleResult:
    config: ExperimentConfig
    trajectories: list[Trajectory]

    def final_windows(self) -> list[tuple[float, float]]:
        return [final_window(t) for t in self.trajectories]


def run_replicates(config: ExperimentConfig,
                   out_dir=None) -> EnsembleResult:
    """Run the configured replicate ensemble; optionally persist everything.

    Alongside the per-replicate run directories, writes ensemble.csv with
    the per-step mean and 10th/90th percentile of cooperation fraction and
    mean friendliness across replicates.
    """
    trajectories = []
    for rep in range(config.replicates):
        t0 = time.perf_counter()
        traj = run(config, rep)
        wall = time.perf_counter() - t0
        trajectories.append(traj)
        if out_dir is not None:
            persist_run(traj, config, out_dir, rep, wall)
    result = EnsembleResult(config, trajectories)
    if out_dir is not None:
        write_ensemble_summary(Path(out_dir) / "ensemble.csv", result)
    return result


def write_ensemble_summary(path, result: EnsembleResult) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n_steps = min(len(t.stats) for t in result.trajectories)
    coop = np.array([[t.stats[i].coop_fraction for t in result.trajectories]
                     for i in range(n_steps)])
    rho = np.array([[t.stats[i].mean_rho for t in result.trajectories]
                    for i in range(n_steps)])
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["step", "coop_mean", "coop_p10", "coop_p90",
                     "rho_mean", "rho_p10", "rho_p90"])
        for i in range(n_steps):
            step_idx = result.trajectories[0].stats[i].step
            wr.writerow([step_idx,
                         repr(float(coop[i].mean())),
                         repr(float(np.percentile(coop[i], 10))),
                         repr(float(np.percentile(coop[i], 90))),
                         repr(float(rho[i].mean())),
                         repr(float(np.percentile(rho[i], 10))),
                         repr(float(np.percentile(rho[i], 90)))])


@dataclass
class SweepPoint:
    nu: float
    replicate: int
    final_coop: float
    final_rho: float


def sweep_nu(config: ExperimentConfig, values: Sequence[float],
             out_dir=None) -> list[SweepPoint]:
    """Replicate ensembles across offspring-placement localities.

    Replicate i uses the stream (master_seed, i) at every nu, so rows with
    the same replicate index form paired-seed comparisons. Reported values
    are means over the last 10% of steps.
    """
    rows = []
    for nu in values:
        if not 0.0 <= nu <= 1.0:
            raise ValueError(f"nu must lie in [0, 1], got {nu}")
        sub = with_nu(config, nu)
        sub_dir = None if out_dir is None else Path(out_dir) / f"nu{nu:g}"
        result = run_replicates(sub, sub_dir)
        for rep, traj in enumerate(result.trajectories):
            coop, rho = final_window(traj)
            rows.append(SweepPoint(nu, rep, coop, rho))
    if out_dir is not None:
        with open(Path(out_dir) / "sweep.csv", "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["nu", "replicate", "final_coop", "final_rho"])
            for r in rows:
                wr.writerow([repr(r.nu), r.replicate, repr(r.final_coop),
                             repr(r.final_rho)])
    return rows


@dataclass
class HysteresisPoint:
    rho: float
    direction: str          # "ascending" | "descending"
    coop_fraction: float
    status: str             # "fixed_point" | "cycle" | "cap"


def _iterate_to_fixed_point(world: GridWorld, mat: PayoffMatrix,
                            max_iters: int) -> str:
    """Iterate pure synchronous best response until the action field repeats.

    Detects fixed points and 2-cycles (synchronous best response can
    oscillate with period 2); gives up after max_iters sweeps.
    """
    prev = None
    for _ in range(max_iters):
        current = world.action.copy()
        world.action = best_response_field(world, mat)
        if np.array_equal(world.action, current):
            return "fixed_point"
        if prev is not None and np.array_equal(world.action, prev):
            return "cycle"
        prev = current
    return "cap"


def hysteresis_sweep(rho_values: Sequence[float],
                     width: int = 50, height: int = 50,
                     occupancy: float = 1.0,
                     matrix: PayoffMatrix = PayoffMatrix(),
                     seed: int = 0,
                     max_iters: int = 500,
                     out_path=None) -> list[HysteresisPoint]:
    """Quasi-static friendliness sweep on a homogeneous lattice.

    Evolution and deviations are off; every agent shares the externally set
    friendliness. The ascending leg starts from all-defect; the descending
    leg continues from the ascending leg's final state. State carries over
    between consecutive rho values within a leg, which is what exposes the
    bistable band.
    """
    values = sorted(rho_values)
    world = init_world(width, height, occupancy,
                       [FamilySpec("h", 0.0, 1.0)], seed)
    rows = []
    for direction, leg in (("ascending", values),
                           ("descending", list(reversed(values)))):
        for rho in leg:
            world.rho[world.occupied] = rho
            status = _iterate_to_fixed_point(world, matrix, max_iters)
            coop = float((world.occupied & (world.action == COOPERATE)).sum()
                         / world.population)
            rows.append(HysteresisPoint(rho, direction, coop, status))
    if out_path is not None:
        path = Path(out_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["rho", "direction", "coop_fraction", "status"])
            for r in rows:
                wr.writerow([repr(r.rho), r.direction, repr(r.coop_fraction),
                             r.status])
    return rows
