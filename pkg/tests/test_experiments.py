"""Harness tests: determinism, persistence round-trips, sweeps, hysteresis."""
import numpy as np
import pytest

from sociolab.config import (ConfigError, ExperimentConfig, config_to_mapping,
                             load_config, parse_config_text)
from sociolab.experiments import (final_window, hysteresis_sweep, persist_run,
                                  replicate_rng, run, run_replicates, sweep_nu)
from sociolab.io import read_manifest, read_snapshot_csv, read_stats_csv
from sociolab.world import FamilySpec


def tiny_config(**kw):
    base = dict(width=15, height=15, occupancy=0.6,
                families=(FamilySpec("f1", 0.0, 0.5),
                          FamilySpec("f2", 0.2, 0.5)),
                steps=40, snapshot_steps=(0, 40), replicates=2, master_seed=11)
    base.update(kw)
    return ExperimentConfig(**base)


def test_run_is_deterministic():
    cfg = tiny_config()
    a = run(cfg, replicate=0)
    b = run(cfg, replicate=0)
    assert [s.__dict__ for s in a.stats] == [s.__dict__ for s in b.stats]
    for t in a.snapshots:
        assert np.array_equal(a.snapshots[t], b.snapshots[t])


def test_replicates_use_independent_streams():
    cfg = tiny_config()
    a = run(cfg, replicate=0)
    b = run(cfg, replicate=1)
    assert [s.coop_fraction for s in a.stats] != [s.coop_fraction for s in b.stats]
    s0 = replicate_rng(11, 0).random(5)
    s1 = replicate_rng(11, 1).random(5)
    assert not np.allclose(s0, s1)


def test_trajectory_covers_all_steps():
    cfg = tiny_config(steps=40)
    traj = run(cfg)
    assert [s.step for s in traj.stats] == list(range(41))
    assert set(traj.snapshots) == {0, 40}


def test_persist_round_trip(tmp_path):
    cfg = tiny_config()
    traj = run(cfg)
    run_dir = persist_run(traj, cfg, tmp_path, replicate=0)
    stats = read_stats_csv(run_dir / "stats.csv")
    assert [s.__dict__ for s in stats] == [s.__dict__ for s in traj.stats]
    snap = read_snapshot_csv(run_dir / "snapshots" / "step00040.csv")
    assert np.array_equal(snap, traj.snapshots[40])
    manifest = read_manifest(run_dir / "manifest")
    assert manifest["run.seed"] == "11"
    assert manifest["rng_stream"] == "(11, 0)"


def test_persisted_files_are_byte_identical_across_runs(tmp_path):
    cfg = tiny_config()
    paths = []
    for name in ("a", "b"):
        traj = run(cfg)
        d = persist_run(traj, cfg, tmp_path / name, replicate=0)
        paths.append(d)
    assert (paths[0] / "stats.csv").read_bytes() == (paths[1] / "stats.csv").read_bytes()
    assert ((paths[0] / "snapshots" / "step00040.csv").read_bytes()
            == (paths[1] / "snapshots" / "step00040.csv").read_bytes())


def test_manifest_reruns_bit_identically(tmp_path):
    cfg = tiny_config()
    traj = run(cfg)
    run_dir = persist_run(traj, cfg, tmp_path, replicate=0)
    mapping = {k: v for k, v in read_manifest(run_dir / "manifest").items()
               if "." in k}
    text = "\n".join(f"{k} = {v}" for k, v in mapping.items())
    cfg2_path = tmp_path / "rerun.cfg"
    cfg2_path.write_text(text)
    cfg2 = load_config(cfg2_path)
    traj2 = run(cfg2)
    assert [s.__dict__ for s in traj2.stats] == [s.__dict__ for s in traj.stats]


def test_run_replicates_writes_ensemble(tmp_path):
    cfg = tiny_config()
    result = run_replicates(cfg, tmp_path)
    assert len(result.trajectories) == 2
    assert (tmp_path / "ensemble.csv").exists()
    assert (tmp_path / "rep001" / "stats.csv").exists()
    lines = (tmp_path / "ensemble.csv").read_text().splitlines()
    assert lines[0].startswith("step,coop_mean")
    assert len(lines) == 42


def test_final_window_mean():
    cfg = tiny_config()
    traj = run(cfg)
    coop, rho = final_window(traj, fraction=0.1)
    tail = traj.stats[-4:]   # 41 rows -> round(4.1) = 4
    assert coop == pytest.approx(sum(s.coop_fraction for s in tail) / 4)
    assert rho == pytest.approx(sum(s.mean_rho for s in tail) / 4)


def test_sweep_nu_is_seed_paired(tmp_path):
    cfg = tiny_config(replicates=2)
    rows = sweep_nu(cfg, [0.2, 0.8], tmp_path)
    assert len(rows) == 4
    assert {(r.nu, r.replicate) for r in rows} == {(0.2, 0), (0.2, 1),
                                                   (0.8, 0), (0.8, 1)}
    assert (tmp_path / "sweep.csv").exists()
    with pytest.raises(ValueError):
        sweep_nu(cfg, [1.5])


def test_hysteresis_small_lattice_is_bistable():
    values = [round(0.02 * i, 3) for i in range(26)]   # 0 .. 0.50
    rows = hysteresis_sweep(values, width=30, height=30, seed=1)
    asc = {r.rho: r.coop_fraction for r in rows if r.direction == "ascending"}
    desc = {r.rho: r.coop_fraction for r in rows if r.direction == "descending"}
    for rho in values:
        assert desc[rho] >= asc[rho]
    assert any(desc[r] == 1.0 and asc[r] == 0.0 for r in values)


def test_config_parsing_and_validation(tmp_path):
    values = parse_config_text("run.steps = 100\n# comment\npayoff.T=1.2\n")
    assert values == {"run.steps": 100, "payoff.T": 1.2}
    with pytest.raises(ConfigError):
        parse_config_text("no.such.key = 1")
    with pytest.raises(ConfigError):
        parse_config_text("run.steps")
    with pytest.raises(ConfigError):
        parse_config_text("run.steps = many")
    p = tmp_path / "c.cfg"
    p.write_text("run.steps = 10\n")
    cfg = load_config(p, {"run.seed": "5"})
    assert cfg.steps == 10 and cfg.master_seed == 5


def test_config_mapping_round_trip():
    cfg = tiny_config()
    mapping = config_to_mapping(cfg)
    text = "\n".join(f"{k} = {v}" for k, v in mapping.items())
    back = parse_config_text(text)
    from sociolab.config import config_from_mapping
    assert config_from_mapping(back) == cfg
