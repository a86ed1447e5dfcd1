"""sociolab: a simulation laboratory for decentralized self-regulation.

Two testbeds:
  * evolution of other-regarding preferences in a spatial Prisoner's
    Dilemma with best-response agents, inherited friendliness, and
    birth-death dynamics (game, world, evolution, metrics, experiments);
  * comparison of urban traffic-light control regimes, from a fixed-cycle
    central schedule to other-regarding self-regulation (traffic).
"""

__version__ = "0.1.0"

from .game import (Action, AgentClass, PayoffMatrix, best_response, classify,
                   pair_payoff, round_payoff, utility)
from .world import (Agent, FamilySpec, GridWorld, Position, closest_empty_site,
                    init_world, moore_neighbors, snapshot_codes)
from .evolution import (EvolutionParams, ExtinctionError, Trajectory,
                        death_birth, inherit_friendliness, mutate_friendliness, play_round, step,
                        update_actions)
from .metrics import (CoopCluster, StepStats, cooperation_clusters,
                      crossover_step, generations, summarize)
from .config import ExperimentConfig, load_config
from .experiments import (final_window, hysteresis_sweep, run, run_replicates,
                          sweep_nu)

__all__ = [
    "Action", "AgentClass", "PayoffMatrix", "best_response", "classify",
    "pair_payoff", "round_payoff", "utility",
    "Agent", "FamilySpec", "GridWorld", "Position", "closest_empty_site",
    "init_world", "moore_neighbors", "snapshot_codes",
    "EvolutionParams", "ExtinctionError", "Trajectory", "death_birth",
    "inherit_friendliness", "mutate_friendliness", "play_round", "step", "update_actions",
    "CoopCluster", "StepStats", "cooperation_clusters", "crossover_step",
    "generations", "summarize",
    "ExperimentConfig", "load_config",
    "final_window", "hysteresis_sweep", "run", "run_replicates", "sweep_nu",
]
