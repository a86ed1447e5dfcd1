"""Bounded lattice world: partial occupancy, Moore neighborhoods, empty-site search.

State lives in flat numpy arrays indexed [y, x] so the per-step dynamics can
be fully vectorized. `Agent` is a read/write view onto one occupied cell,
convenient for tests and small fixtures; the simulation engine works on the
arrays directly.

The grid has hard boundaries (no wraparound), matching the no-periodic-
boundary setup of the lattice experiments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .game import COOPERATE, DEFECT, Action, check_friendliness


class Position(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class FamilySpec:
    """One founding family: identifier, initial friendliness, population share."""

    family_id: str
    initial_rho: float
    share: float


@dataclass
class Agent:
    """Snapshot view of one grid inhabitant."""

    agent_id: int
    family: str
    rho: float
    action: Action
    round_payoff: float
    fitness: float


class GridWorld:
    """A width x height lattice with partially occupied cells.

    Cell arrays (all shape (height, width)):
      occupied  bool
      rho       friendliness, 0 where empty
      action    0 = defect, 1 = cooperate
      family    index into `family_ids`, -1 where empty
      payoff    last round's summed pairwise payoff
      fitness   max(payoff, 0)
      agent_id  unique id, -1 where empty
    """

    def __init__(self, width: int, height: int, family_ids: Sequence[str]):
        if width < 1 or height < 1:
            raise ValueError("grid dimensions must be positive")
        self.width = width
        self.height = height
        self.family_ids = list(family_ids)
        shape = (height, width)
        self.occupied = np.zeros(shape, dtype=bool)
        self.rho = np.zeros(shape, dtype=np.float64)
        self.action = np.zeros(shape, dtype=np.int8)
        self.family = np.full(shape, -1, dtype=np.int32)
        self.payoff = np.zeros(shape, dtype=np.float64)
        self.fitness = np.zeros(shape, dtype=np.float64)
        self.agent_id = np.full(shape, -1, dtype=np.int64)
        self._next_id = 0

    # -- bookkeeping ---------------------------------------------------

    @property
    def population(self) -> int:
        return int(self.occupied.sum())

    def in_bounds(self, p: Position) -> bool:
        return 0 <= p.x < self.width and 0 <= p.y < self.height

    def _check_bounds(self, p: Position) -> None:
        if not self.in_bounds(p):
            raise IndexError(f"position {p} outside {self.width}x{self.height} grid")

    def place_agent(self, p: Position, family: str, rho: float,
                    action: int = DEFECT) -> int:
        """Put a new agent on an empty cell; returns its id."""
        self._check_bounds(p)
        if self.occupied[p.y, p.x]:
            raise ValueError(f"cell {p} already occupied")
        check_friendliness(rho)
        aid = self._next_id
        self._next_id += 1
        self.occupied[p.y, p.x] = True
        self.rho[p.y, p.x] = rho
        self.action[p.y, p.x] = action
        self.family[p.y, p.x] = self.family_ids.index(family)
        self.payoff[p.y, p.x] = 0.0
        self.fitness[p.y, p.x] = 0.0
        self.agent_id[p.y, p.x] = aid
        return aid

    def remove_agent(self, p: Position) -> None:
        self._check_bounds(p)
        if not self.occupied[p.y, p.x]:
            raise ValueError(f"cell {p} is empty")
        self.occupied[p.y, p.x] = False
        self.rho[p.y, p.x] = 0.0
        self.action[p.y, p.x] = DEFECT
        self.family[p.y, p.x] = -1
        self.payoff[p.y, p.x] = 0.0
        self.fitness[p.y, p.x] = 0.0
        self.agent_id[p.y, p.x] = -1

    def agent_at(self, p: Position) -> Optional[Agent]:
        self._check_bounds(p)
        if not self.occupied[p.y, p.x]:
            return None
        return Agent(
            agent_id=int(self.agent_id[p.y, p.x]),
            family=self.family_ids[int(self.family[p.y, p.x])],
            rho=float(self.rho[p.y, p.x]),
            action=Action(int(self.action[p.y, p.x])),
            round_payoff=float(self.payoff[p.y, p.x]),
            fitness=float(self.fitness[p.y, p.x]),
        )

    def occupied_positions(self) -> list[Position]:
        ys, xs = np.nonzero(self.occupied)
        return [Position(int(x), int(y)) for y, x in zip(ys, xs)]

    def empty_positions(self) -> list[Position]:
        ys, xs = np.nonzero(~self.occupied)
        return [Position(int(x), int(y)) for y, x in zip(ys, xs)]


def moore_neighbors(w: GridWorld, p: Position) -> list[Position]:
    """The up-to-8 surrounding cells, clipped at the boundary, row-major order."""
    w._check_bounds(p)
    out = []
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            nx, ny = p.x + dx, p.y + dy
            if 0 <= nx < w.width and 0 <= ny < w.height:
                out.append(Position(nx, ny))
    return out


def closest_empty_site(w: GridWorld, p: Position,
                       rng: np.random.Generator) -> Optional[Position]:
    """Empty cell at minimal Euclidean distance from p; ties uniform via rng.

    Returns None when the grid is full.
    """
    w._check_bounds(p)
    ys, xs = np.nonzero(~w.occupied)
    if len(ys) == 0:
        return None
    d2 = (xs - p.x) ** 2 + (ys - p.y) ** 2
    best = d2.min()
    cand = np.nonzero(d2 == best)[0]
    k = cand[0] if len(cand) == 1 else cand[rng.integers(len(cand))]
    return Position(int(xs[k]), int(ys[k]))


def init_world(width: int, height: int, occupancy: float,
               families: Sequence[FamilySpec], seed) -> GridWorld:
    """Populate floor(width*height*occupancy) agents uniformly at random.

    Families are assigned by share (largest-remainder rounding, then
    shuffled over cells); every agent starts defecting with its family's
    initial friendliness.
    """
    if not 0.0 < occupancy <= 1.0:
        raise ValueError(f"occupancy must lie in (0, 1], got {occupancy}")
    if not families:
        raise ValueError("at least one family is required")
    shares = [f.share for f in families]
    if abs(sum(shares) - 1.0) > 1e-9:
        raise ValueError(f"family shares must sum to 1, got {sum(shares)}")
    for f in families:
        check_friendliness(f.initial_rho)

    rng = np.random.default_rng(seed)
    n_cells = width * height
    n_agents = math.floor(n_cells * occupancy)
    if n_agents < 1:
        raise ValueError("occupancy too low: zero agents")

    w = GridWorld(width, height, [f.family_id for f in families])
    cells = rng.choice(n_cells, size=n_agents, replace=False)

    # largest-remainder allocation of agents to families
    raw = [s * n_agents for s in shares]
    counts = [math.floor(r) for r in raw]
    remainder = n_agents - sum(counts)
    by_frac = sorted(range(len(families)), key=lambda i: raw[i] - counts[i],
                     reverse=True)
    for i in by_frac[:remainder]:
        counts[i] += 1

    assignment = np.repeat(np.arange(len(families)), counts)
    rng.shuffle(assignment)
    for cell, fam_idx in zip(cells, assignment):
        fam = families[int(fam_idx)]
        w.place_agent(Position(int(cell % width), int(cell // width)),
                      fam.family_id, fam.initial_rho, DEFECT)
    return w


def snapshot_codes(w: GridWorld) -> np.ndarray:
    """Cell-code grid for snapshot export.

    -1 for empty cells, otherwise 2 * family_index + (1 if cooperating).
    With two families this yields the four-color convention:
    family 0 defect/cooperate, family 1 defect/cooperate.
    """
    codes = np.full((w.height, w.width), -1, dtype=np.int64)
    occ = w.occupied
    codes[occ] = 2 * w.family[occ].astype(np.int64) + (w.action[occ] == COOPERATE)
    return codes
