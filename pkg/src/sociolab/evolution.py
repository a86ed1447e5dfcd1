"""The simulation engine: round play, noisy synchronous best response, birth-death.

One step is play_round -> update_actions -> death_birth, then the step is
summarized. All agents update simultaneously (double-buffered): each new
action depends only on the previous actions of the Moore neighbors.

Random draws are consumed in a fixed, phase-ordered scheme so runs are
reproducible and auditable:
  1. one uniform per grid cell (row-major) for behavioral deviation,
  2. one uniform per grid cell for death,
  3. one permutation of the death list (birth processing order),
  4. per birth, in order: parent draw happens in bulk before the loop;
     then placement-mode uniform, mutation-branch uniform, mutation-value
     uniform, and any placement tie-break / random-site draw.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .game import COOPERATE, DEFECT, PayoffMatrix, decision_margin
from .metrics import StepStats, summarize
from .world import GridWorld, Position, closest_empty_site

_DEF_MATRIX = PayoffMatrix()


class ExtinctionError(RuntimeError):
    """Raised when every agent dies within a single step."""


@dataclass(frozen=True)
class EvolutionParams:
    """Per-step stochastic rates of the evolutionary dynamics.

    beta           death probability per agent per step
    nu             probability the offspring is placed at the closest empty
                   site (otherwise a uniformly random empty site)
    epsilon        probability of deviating from the best response
    p_down         probability of the downward mutation branch (offspring rho
                   uniform on [0, parent rho]; otherwise uniform on
                   [parent rho, 1])
    mutation_rate  probability that a birth mutates at all; otherwise the
                   offspring copies the parent's friendliness exactly.
                   Inheritance must be high-fidelity for selection to beat
                   the mutation kernel's pull toward its stationary mean of
                   0.2: at rate 1.0 lineages regress to the mean within a
                   couple of generations and the cooperative transition
                   never happens.
    """

    beta: float = 0.05
    nu: float = 0.95
    epsilon: float = 0.05
    p_down: float = 0.8
    mutation_rate: float = 0.02
    matrix: PayoffMatrix = _DEF_MATRIX

    def __post_init__(self):
        for name in ("beta", "nu", "epsilon", "p_down", "mutation_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.beta >= 1.0:
            raise ValueError(
                "beta = 1 is rejected: with no survivors the "
                "fitness-proportional parent rule is undefined"
            )


@dataclass
class Trajectory:
    """Per-step statistics of one run, plus any exported snapshots."""

    params: EvolutionParams
    seed: object
    stats: list[StepStats] = field(default_factory=list)
    snapshots: dict[int, np.ndarray] = field(default_factory=dict)
    extinct_at: Optional[int] = None
    final_world: Optional[GridWorld] = None


def _neighbor_sum(mask: np.ndarray) -> np.ndarray:
    """Sum of the 8 Moore neighbors for every cell (hard boundaries)."""
    p = np.pad(mask.astype(np.int32), 1)
    return (
        p[:-2, :-2] + p[:-2, 1:-1] + p[:-2, 2:]
        + p[1:-1, :-2] + p[1:-1, 2:]
        + p[2:, :-2] + p[2:, 1:-1] + p[2:, 2:]
    )


def play_round(w: GridWorld, mat: PayoffMatrix = _DEF_MATRIX) -> None:
    """Every agent plays one PD against each occupied Moore neighbor.

    round payoff = summed pairwise payoffs (0 for isolated agents);
    fitness = max(payoff, 0).
    """
    occ = w.occupied
    coop = occ & (w.action == COOPERATE)
    m = _neighbor_sum(coop)
    n = _neighbor_sum(occ)
    pay_c = m * mat.R + (n - m) * mat.S
    pay_d = m * mat.T + (n - m) * mat.P
    w.payoff = np.where(occ, np.where(coop, pay_c, pay_d), 0.0)
    w.fitness = np.maximum(w.payoff, 0.0)


def best_response_field(w: GridWorld, mat: PayoffMatrix = _DEF_MATRIX) -> np.ndarray:
    """Best-response action per occupied cell, from the current action field.

    Agents with no occupied neighbor have no game; they fall to the defect
    tie-break.
    """
    occ = w.occupied
    coop = occ & (w.action == COOPERATE)
    m = _neighbor_sum(coop)
    n = _neighbor_sum(occ)
    margin = decision_margin(m, n, w.rho, mat)
    return np.where(occ & (margin > 0), COOPERATE, DEFECT).astype(np.int8)


def update_actions(w: GridWorld, params: EvolutionParams,
                   rng: np.random.Generator,
                   deviation_draws: Optional[np.ndarray] = None) -> None:
    """Synchronous best-response update with deviation probability epsilon.

    All new actions are computed from the old action field, then written at
    once. With probability epsilon an agent adopts the opposite of its best
    response. `deviation_draws` can supply the per-cell uniforms explicitly
    (used by tests asserting order-independence).
    """
    best = best_response_field(w, params.matrix)
    if deviation_draws is None:
        deviation_draws = rng.random(size=(w.height, w.width))
    flip = deviation_draws < params.epsilon
    new_action = np.where(flip, 1 - best, best).astype(np.int8)
    w.action = np.where(w.occupied, new_action, DEFECT).astype(np.int8)


def mutate_friendliness(rho_parent: float, params: EvolutionParams,
                        rng: np.random.Generator) -> float:
    """The mutation kernel: with probability p_down uniform on [0, parent],
    otherwise uniform on [parent, 1].

    This is the kernel applied when a mutation occurs; whether a given
    birth mutates at all is governed by params.mutation_rate in
    death_birth. Iterating the kernel alone drives the lineage mean to
    p_down/2 * 0 + ... = 0.2 for the default 0.8/0.2 split.
    """
    if rng.random() < params.p_down:
        return float(rng.uniform(0.0, rho_parent))
    return float(rng.uniform(rho_parent, 1.0))


def inherit_friendliness(rho_parent: float, params: EvolutionParams,
                         rng: np.random.Generator) -> float:
    """Offspring friendliness: faithful copy except with mutation_rate."""
    if rng.random() < params.mutation_rate:
        return mutate_friendliness(rho_parent, params, rng)
    return rho_parent


def death_birth(w: GridWorld, params: EvolutionParams,
                rng: np.random.Generator) -> None:
    """Random deaths at rate beta, each replaced by a newborn.

    Parents are sampled among the survivors proportionally to fitness from
    the last round (uniformly if total fitness is zero). Each offspring
    inherits the parent's family and friendliness (subject to mutation at
    mutation_rate), starts out defecting, and is placed at the closest empty site to the parent with
    probability nu, else at a uniformly random empty site. Births are
    processed sequentially in random order so later placements see earlier
    births. Newborns are exempt from this step's deaths.
    """
    occ = w.occupied
    death_u = rng.random(size=(w.height, w.width))
    deaths = occ & (death_u < params.beta)
    n_deaths = int(deaths.sum())
    if n_deaths == 0:
        return

    survivors = occ & ~deaths
    surv_flat = np.nonzero(survivors.ravel())[0]
    if len(surv_flat) == 0:
        raise ExtinctionError("all agents died in a single step")

    # capture parent attributes before any cell is cleared
    fam_flat = w.family.ravel().copy()
    rho_flat = w.rho.ravel().copy()
    fit_flat = w.fitness.ravel()

    total_fit = float(fit_flat[surv_flat].sum())
    if total_fit > 0:
        probs = fit_flat[surv_flat] / total_fit
        parents = rng.choice(surv_flat, size=n_deaths, p=probs)
    else:
        parents = rng.choice(surv_flat, size=n_deaths)

    death_flat = np.nonzero(deaths.ravel())[0]
    order = rng.permutation(n_deaths)

    for yx in death_flat:
        w.remove_agent(Position(int(yx % w.width), int(yx // w.width)))

    for k in order:
        parent = int(parents[k])
        ppos = Position(parent % w.width, parent // w.width)
        rho_child = inherit_friendliness(float(rho_flat[parent]), params, rng)
        if rng.random() < params.nu:
            site = closest_empty_site(w, ppos, rng)
        else:
            empties = np.nonzero(~w.occupied.ravel())[0]
            site_flat = int(empties[rng.integers(len(empties))])
            site = Position(site_flat % w.width, site_flat // w.width)
        if site is None:
            raise RuntimeError("no empty site for birth despite a death")
        w.place_agent(site, w.family_ids[int(fam_flat[parent])], rho_child,
                      DEFECT)


def step(w: GridWorld, params: EvolutionParams, rng: np.random.Generator,
         step_index: int) -> StepStats:
    """One full simulation step; returns the step's summary statistics."""
    play_round(w, params.matrix)
    update_actions(w, params, rng)
    death_birth(w, params, rng)
    return summarize(w, step_index)
