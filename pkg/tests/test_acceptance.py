"""Acceptance criteria, one test and one printed pass/fail line each.

The heavy 20-replicate ensemble is computed once per session and shared.
Tolerances and thresholds are part of the package's contract; do not relax
them to make a red criterion pass.
"""
import time

import numpy as np
import pytest

from sociolab.config import ExperimentConfig
from sociolab.evolution import EvolutionParams, mutate_friendliness
from sociolab.experiments import (final_window, hysteresis_sweep, persist_run,
                                  run, run_replicates)
from sociolab.game import Action, PayoffMatrix, best_response, pair_payoff
from sociolab.metrics import cooperation_clusters, crossover_step
from sociolab.traffic import Strategy, simulate_traffic
from sociolab.world import FamilySpec
from sociolab.config import with_nu

HEADLINE = ExperimentConfig()            # the fig2.cfg preset values
CROSSOVER_WINDOW = 50


def report(capsys, name: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="session")
def ensemble():
    t0 = time.perf_counter()
    result = run_replicates(HEADLINE)
    elapsed = time.perf_counter() - t0
    finals = result.final_windows()
    transitioned = [i for i, (coop, rho) in enumerate(finals)
                    if coop > 0.5 and rho > 0.25]
    return {"result": result, "elapsed": elapsed, "finals": finals,
            "transitioned": transitioned}


def test_emergence_transition(ensemble, capsys):
    n = HEADLINE.replicates
    k = len(ensemble["transitioned"])
    ok = k >= n / 2 and ensemble["elapsed"] <= 300
    report(capsys, "emergence-transition", ok,
           f"{k}/{n} transitioned, {ensemble['elapsed']:.0f}s")


def test_payoff_crossover(ensemble, capsys):
    bad = []
    for i in ensemble["transitioned"]:
        stats = ensemble["result"].trajectories[i].stats
        cs = crossover_step(stats, CROSSOVER_WINDOW)
        if cs is None:
            bad.append((i, "no crossover"))
            continue
        pre = [(s.mean_payoff_def, s.mean_payoff_coop) for s in stats
               if s.step < cs and s.mean_payoff_def is not None
               and s.mean_payoff_coop is not None]
        if not pre or np.mean([d - c for d, c in pre]) <= 0:
            bad.append((i, "defectors not ahead pre-transition"))
    report(capsys, "payoff-crossover", not bad,
           f"{len(ensemble['transitioned']) - len(bad)}"
           f"/{len(ensemble['transitioned'])} transitioned runs ok"
           + (f"; first failure {bad[0]}" if bad else ""))


def test_mixed_family_clusters(ensemble, capsys):
    trans = ensemble["transitioned"]
    mixed = 0
    for i in trans:
        world = ensemble["result"].trajectories[i].final_world
        if any(c.mixed_family for c in cooperation_clusters(world)):
            mixed += 1
    ok = trans and mixed >= len(trans) / 2
    report(capsys, "mixed-family-clusters", bool(ok),
           f"{mixed}/{len(trans)} transitioned runs have a mixed cluster "
           f"at t={HEADLINE.steps}")


def test_nu_dependence(ensemble, capsys):
    low = run_replicates(with_nu(HEADLINE, 0.05))
    wins = sum(hi[0] > lo[0] for hi, lo in zip(ensemble["finals"],
                                               low.final_windows()))
    n = HEADLINE.replicates
    report(capsys, "nu-dependence", wins >= 0.8 * n,
           f"nu=0.95 beats nu=0.05 in {wins}/{n} paired seeds")


def test_mutation_stationarity(capsys):
    rng = np.random.default_rng(123)
    params = EvolutionParams()
    rho, total, n = 0.5, 0.0, 1_000_000
    for _ in range(n):
        rho = mutate_friendliness(rho, params, rng)
        total += rho
    mean = total / n
    report(capsys, "mutation-stationarity", abs(mean - 0.2) <= 0.01,
           f"chain mean {mean:.4f} vs 0.2 +/- 0.01")


def test_best_response_oracle(capsys):
    mat = PayoffMatrix()
    rhos = [i / 100 for i in range(101)]

    def oracle(m, n, rho):
        totals = {}
        for mine in (Action.C, Action.D):
            tot = 0.0
            for theirs in [Action.C] * m + [Action.D] * (n - m):
                tot += (1 - rho) * pair_payoff(mine, theirs, mat)
                tot += rho * pair_payoff(theirs, mine, mat)
            totals[mine] = tot
        return Action.C if totals[Action.C] > totals[Action.D] else Action.D

    mismatches = sum(best_response(m, n, r, mat) != oracle(m, n, r)
                     for n in range(1, 9) for m in range(n + 1) for r in rhos)
    coop_m1 = min(r for r in rhos if best_response(1, 1, r, mat) == Action.C)
    coop_m0 = min(r for r in rhos if best_response(0, 1, r, mat) == Action.C)
    ok = (mismatches == 0
          and abs(coop_m1 - 0.047619) <= 0.01
          and abs(coop_m0 - 0.476190) <= 0.01)
    report(capsys, "best-response-oracle", ok,
           f"{mismatches} mismatches; switch points {coop_m1:.2f}/{coop_m0:.2f}")


def test_hysteresis_band(capsys):
    values = [round(0.02 * i, 3) for i in range(26)]   # 0 .. 0.50
    rows = hysteresis_sweep(values, width=50, height=50, seed=0)
    asc = {r.rho: r.coop_fraction for r in rows if r.direction == "ascending"}
    desc = {r.rho: r.coop_fraction for r in rows if r.direction == "descending"}
    monotone = all(desc[v] >= asc[v] for v in values)
    band = [v for v in values if asc[v] == 0.0 and desc[v] == 1.0]
    report(capsys, "hysteresis-band", monotone and len(band) > 0,
           f"bistable band {min(band):.2f}..{max(band):.2f}" if band
           else "no bistable band")


def test_conservation_suite(capsys):
    cfg = ExperimentConfig(width=25, height=25, steps=10_000,
                           snapshot_steps=(), replicates=1, master_seed=2)
    traj = run(cfg)
    target = int(25 * 25 * 0.6)
    pop_ok = (traj.extinct_at is None
              and all(s.n_coop + s.n_def == target for s in traj.stats))

    from sociolab.traffic import build_ring_network, traffic_step
    net = build_ring_network(2, 5, Strategy.SELF_REGULATING)
    rng = np.random.default_rng(3)
    veh_ok = True
    for _ in range(10_000):
        traffic_step(net, rng)
        if net.total_queue() != 10:
            veh_ok = False
            break
    report(capsys, "conservation-suite", pop_ok and veh_ok,
           f"population {'held' if pop_ok else 'drifted'} over 10^4 steps; "
           f"ring vehicles {'held' if veh_ok else 'drifted'}")


def test_traffic_ordering(capsys):
    res = {}
    for u in (0.3, 0.85):
        for strat in Strategy:
            res[(u, strat)] = [simulate_traffic(strat, u, seed).avg_total_queue
                               for seed in range(10)]
    a = sum(x < y for x, y in zip(res[(0.3, Strategy.LOCAL_WAIT_MIN)],
                                  res[(0.3, Strategy.FIXED_CYCLE)]))
    b = sum(x > y for x, y in zip(res[(0.85, Strategy.LOCAL_WAIT_MIN)],
                                  res[(0.85, Strategy.FIXED_CYCLE)]))
    c = all(np.median(res[(u, Strategy.SELF_REGULATING)])
            <= np.median(res[(u, s)])
            for u in (0.3, 0.85) for s in Strategy)
    d = (np.median(res[(0.85, Strategy.LONGEST_QUEUE_FIRST)])
         > np.median(res[(0.85, Strategy.FIXED_CYCLE)]))
    ok = a >= 8 and b >= 8 and c and d
    report(capsys, "traffic-ordering", ok,
           f"(a) {a}/10 (b) {b}/10 (c) {'ok' if c else 'violated'} "
           f"(d) {'ok' if d else 'violated'}")


def test_determinism(tmp_path, capsys):
    cfg = ExperimentConfig(width=20, height=20, steps=60,
                           snapshot_steps=(0, 60), replicates=1,
                           master_seed=9)
    dirs = []
    for name in ("a", "b"):
        traj = run(cfg)
        dirs.append(persist_run(traj, cfg, tmp_path / name, 0))
    stats_same = ((dirs[0] / "stats.csv").read_bytes()
                  == (dirs[1] / "stats.csv").read_bytes())
    snaps_same = all(
        (dirs[0] / "snapshots" / f"step{t:05d}.csv").read_bytes()
        == (dirs[1] / "snapshots" / f"step{t:05d}.csv").read_bytes()
        for t in (0, 60))
    report(capsys, "determinism", stats_same and snaps_same,
           "byte-identical stats.csv and snapshots")
