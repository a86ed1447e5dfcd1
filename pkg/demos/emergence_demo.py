"""Narrated single run of the headline lattice experiment.

Two founding families of best-response agents -- one purely self-regarding
(rho = 0), one mildly other-regarding (rho = 0.2) -- start out all
defecting on a half-empty 50x50 grid. Watch friendliness and cooperation
take over, and defection stop paying.

Run:  python demos/emergence_demo.py [replicate]
"""
import sys

from sociolab import ExperimentConfig, run
from sociolab.experiments import final_window
from sociolab.metrics import cooperation_clusters, crossover_step, generations


def main() -> None:
    replicate = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    cfg = ExperimentConfig()
    print(f"running replicate {replicate} "
          f"({cfg.steps} steps = {generations(cfg.steps, cfg.params.beta):.0f} "
          f"generations) ...")
    traj = run(cfg, replicate)

    checkpoints = [0, 250, 500, 1000, 2000, 2500]
    print(f"\n{'step':>6} {'coop':>6} {'rho':>6} {'pay(C)':>7} {'pay(D)':>7}")
    for st in traj.stats:
        if st.step in checkpoints:
            pc = f"{st.mean_payoff_coop:.2f}" if st.mean_payoff_coop is not None else "--"
            pd = f"{st.mean_payoff_def:.2f}" if st.mean_payoff_def is not None else "--"
            print(f"{st.step:>6} {st.coop_fraction:>6.2f} {st.mean_rho:>6.2f} "
                  f"{pc:>7} {pd:>7}")

    coop, rho = final_window(traj)
    print(f"\nfinal window: cooperation {coop:.2f}, mean friendliness {rho:.2f}")
    cs = crossover_step(traj.stats, cfg.crossover_window)
    if cs is None:
        print("defectors stayed ahead for the whole run -- no transition "
              "this time (try another replicate)")
    else:
        print(f"payoff crossover at step {cs}: from here on, cooperators "
              f"persistently out-earn defectors")

    clusters = cooperation_clusters(traj.final_world)
    if clusters:
        big = clusters[0]
        kind = "mixed-family" if big.mixed_family else "single-family"
        print(f"largest cooperation cluster: {big.size} agents, {kind}")
        mixed = sum(c.mixed_family for c in clusters)
        print(f"{len(clusters)} clusters total, {mixed} spanning both families")


if __name__ == "__main__":
    main()
