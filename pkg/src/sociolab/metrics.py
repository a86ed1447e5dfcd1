"""Observables: per-step summaries, payoff-by-behavior series, cooperation clusters.

All functions are pure reads of the world state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from .game import COOPERATE
from .world import GridWorld, Position

# 8-connectivity, matching the Moore interaction neighborhood
_MOORE_STRUCTURE = np.ones((3, 3), dtype=int)


@dataclass
class StepStats:
    """Summary of one simulation step."""

    step: int
    mean_rho: float
    coop_fraction: float
    mean_payoff_coop: Optional[float]
    mean_payoff_def: Optional[float]
    n_coop: int
    n_def: int
    family_counts: dict[str, int] = field(default_factory=dict)


@dataclass
class CoopCluster:
    """One 8-connected component of cooperating agents."""

    positions: list[Position]
    families: set[str]
    size: int

    @property
    def mixed_family(self) -> bool:
        return len(self.families) >= 2


def summarize(w: GridWorld, step: int) -> StepStats:
    """Means over occupied cells; payoff means conditioned on current action.

    A payoff mean is None when its conditioning set is empty (e.g. no
    cooperators yet).
    """
    occ = w.occupied
    coop = occ & (w.action == COOPERATE)
    defect = occ & ~coop
    n_coop = int(coop.sum())
    n_def = int(defect.sum())
    pop = n_coop + n_def
    if pop == 0:
        raise ValueError("cannot summarize an empty world")
    fam_counts = {}
    for i, fid in enumerate(w.family_ids):
        fam_counts[fid] = int((occ & (w.family == i)).sum())
    return StepStats(
        step=step,
        mean_rho=float(w.rho[occ].mean()),
        coop_fraction=n_coop / pop,
        mean_payoff_coop=float(w.payoff[coop].mean()) if n_coop else None,
        mean_payoff_def=float(w.payoff[defect].mean()) if n_def else None,
        n_coop=n_coop,
        n_def=n_def,
        family_counts=fam_counts,
    )


def cooperation_clusters(w: GridWorld) -> list[CoopCluster]:
    """8-connected components of cooperating agents.

    Ordered by (size descending, then smallest (y, x) member) so output is
    deterministic.
    """
    coop = w.occupied & (w.action == COOPERATE)
    labels, n = ndimage.label(coop, structure=_MOORE_STRUCTURE)
    clusters = []
    for lab in range(1, n + 1):
        ys, xs = np.nonzero(labels == lab)
        positions = [Position(int(x), int(y)) for y, x in zip(ys, xs)]
        fams = {w.family_ids[int(w.family[y, x])] for y, x in zip(ys, xs)}
        clusters.append(CoopCluster(positions=positions, families=fams,
                                    size=len(positions)))
    clusters.sort(key=lambda c: (-c.size, min((p.y, p.x) for p in c.positions)))
    return clusters


def generations(step: int, beta: float) -> float:
    """Elapsed generations: one generation is 1/beta steps."""
    if beta <= 0:
        raise ValueError("beta must be positive to define a generation")
    return step * beta


def crossover_step(stats: list["StepStats"], window: int = 50) -> Optional[int]:
    """First step from which cooperators out-earn defectors persistently.

    Returns the first step s such that mean_payoff_coop > mean_payoff_def
    for `window` consecutive recorded steps starting at s; None if that
    never happens. Steps where either mean is undefined break the streak.
    """
    if not stats:
        raise ValueError("empty trajectory")
    streak_start = None
    streak_len = 0
    for st in stats:
        ahead = (st.mean_payoff_coop is not None
                 and st.mean_payoff_def is not None
                 and st.mean_payoff_coop > st.mean_payoff_def)
        if ahead:
            if streak_len == 0:
                streak_start = st.step
            streak_len += 1
            if streak_len >= window:
                return streak_start
        else:
            streak_len = 0
            streak_start = None
    return None
