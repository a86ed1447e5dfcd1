"""Signalized-intersection network testbed for comparing control regimes.

Vehicles queue on finite-capacity road sections, each feeding one approach
of a downstream intersection. An intersection serves one approach at a
time; switching costs `switch_time` steps of lost service. Four control
strategies are compared:

  FixedCycle          central regulator: a periodic schedule with green
                      splits proportional to long-run demand, a pure
                      function of the step index
  LongestQueueFirst   always serve the longest queue
  LocalWaitMin        self-regarding: serve the approach minimizing the
                      locally predicted waiting over a short horizon,
                      using smoothed observed inflows as the arrival
                      forecast
  SelfRegulating      other-regarding: LocalWaitMin, overruled whenever a
                      queue reaches a critical fraction of its capacity --
                      such queues are cleared immediately to protect
                      upstream neighbors from spillback

Boundary arrivals are Poisson per step, truncated at the remaining
capacity. A vehicle whose destination section is full blocks its whole
approach for the step (FIFO spillback).
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

EXIT = -1  # routing destination meaning "leave the network"


class Strategy(enum.Enum):
    FIXED_CYCLE = "fixed_cycle"
    LONGEST_QUEUE_FIRST = "longest_queue_first"
    LOCAL_WAIT_MIN = "local_wait_min"
    SELF_REGULATING = "self_regulating"


ALL_STRATEGIES = tuple(Strategy)


@dataclass(frozen=True)
class TrafficParams:
    """Physical and control constants shared by every strategy."""

    capacity: int = 20          # vehicles per road section
    service_rate: int = 2       # vehicles discharged per green step
    switch_time: int = 2        # lost steps when the served approach changes
    critical_fraction: float = 0.8   # override threshold (fraction of capacity)
    horizon: int = 5            # lookahead steps for LocalWaitMin
    smoothing: float = 0.1      # EMA weight for observed inflows
    reference_cycle: int = 32   # cycle length defining theoretical capacity

    def __post_init__(self):
        if self.service_rate < 1:
            raise ValueError("service_rate must be >= 1")
        if not 0.0 < self.critical_fraction <= 1.0:
            raise ValueError("critical_fraction must lie in (0, 1]")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.reference_cycle <= 4 * self.switch_time:
            raise ValueError(
                "reference_cycle must exceed the total lost time of one cycle")


@dataclass
class RoadSection:
    """A one-way road holding a vehicle queue bound for one intersection."""

    section_id: int
    capacity: int
    downstream: int                  # intersection id it feeds
    approach: int                    # approach index at that intersection
    upstream: Optional[int] = None   # intersection id, or None for a boundary
    queue: int = 0


@dataclass
class Intersection:
    """A signal agent serving one of its incoming sections at a time."""

    intersection_id: int
    incoming: list[int] = field(default_factory=list)   # section ids
    served: int = 0                  # approach index currently selected
    switch_timer: int = 0            # remaining lost-time steps
    clearing: bool = False           # mid-clearing of a critical queue


@dataclass
class TrafficNetwork:
    """Sections, intersections, routing, demand and mutable counters.

    routing[section_id] is a list of (destination section id or EXIT,
    fraction) pairs summing to 1. boundary_rates[section_id] is the mean
    Poisson arrival rate of a boundary section.
    """

    sections: list[RoadSection]
    intersections: list[Intersection]
    routing: dict[int, list[tuple[int, float]]]
    boundary_rates: dict[int, float]
    strategy: Strategy
    params: TrafficParams
    # mutable bookkeeping
    step_index: int = 0
    admitted: int = 0
    departed: int = 0
    blocked_count: int = 0           # boundary truncations + spillback blocks
    inflow_ema: dict[int, float] = field(default_factory=dict)
    fixed_schedule: dict[int, list[tuple[Optional[int], int]]] = field(
        default_factory=dict)        # intersection -> [(approach|None, steps)]

    def __post_init__(self):
        for sec_id, branches in self.routing.items():
            total = sum(f for _, f in branches)
            if not math.isclose(total, 1.0, abs_tol=1e-9):
                raise ValueError(
                    f"turn fractions for section {sec_id} sum to {total}")
        for sec in self.sections:
            self.inflow_ema.setdefault(sec.section_id, 0.0)

    def total_queue(self) -> int:
        return sum(sec.queue for sec in self.sections)


# ---------------------------------------------------------------------------
# network construction

_HEADINGS = ("E", "W", "S", "N")
_STRAIGHT, _RIGHT, _LEFT = 0.7, 0.15, 0.15
_TURNS = {
    # heading -> (straight, right, left) new headings
    "E": ("E", "S", "N"),
    "W": ("W", "N", "S"),
    "S": ("S", "W", "E"),
    "N": ("N", "E", "W"),
}
_STEPS = {"E": (0, 1), "W": (0, -1), "S": (1, 0), "N": (-1, 0)}


def build_grid_network(strategy: Strategy,
                       utilization: float,
                       params: TrafficParams = TrafficParams(),
                       rows: int = 4, cols: int = 4,
                       horizontal_weight: float = 1.0,
                       vertical_weight: float = 0.25,
                       demand_decay: float = 0.6) -> TrafficNetwork:
    """Rectangular grid of 4-approach intersections with boundary demand.

    Every intersection has one incoming section per heading; edge sections
    are fed from outside the network. Vehicles go straight with fraction
    0.7 and turn right/left with 0.15 each; moves off the grid are exits.

    Demand models a main arterial corridor: horizontal through-traffic is
    heavier than vertical (weights 1 : 0.25), and both decay geometrically
    (`demand_decay` per row/column) away from the top-left corner, so the
    grid has a busy corridor and a quiet periphery rather than uniform
    load.

    All boundary rates are scaled so that, in the linearized equilibrium,
    the busiest intersection receives `utilization` times its theoretical
    service capacity. That capacity is the saturation rate net of
    switching lost time for a signal cycling through all approaches over
    `params.reference_cycle` steps:

        capacity = s * (C_ref - n_approaches * tau) / C_ref

    (for the defaults: 2 * (32 - 8) / 32 = 1.5 vehicles per step).
    """
    if not 0.0 < utilization < 1.0:
        raise ValueError("utilization must lie in (0, 1)")
    n_inter = rows * cols
    sections: list[RoadSection] = []
    sec_of: dict[tuple[int, str], int] = {}   # (intersection, heading) -> id
    for inter in range(n_inter):
        r, c = divmod(inter, cols)
        for a, heading in enumerate(_HEADINGS):
            dr, dc = _STEPS[heading]
            ur, uc = r - dr, c - dc          # upstream grid position
            upstream = (ur * cols + uc
                        if 0 <= ur < rows and 0 <= uc < cols else None)
            sec = RoadSection(section_id=len(sections),
                              capacity=params.capacity,
                              downstream=inter, approach=a,
                              upstream=upstream)
            sec_of[(inter, heading)] = sec.section_id
            sections.append(sec)

    routing: dict[int, list[tuple[int, float]]] = {}
    for sec in sections:
        heading = _HEADINGS[sec.approach]
        r, c = divmod(sec.downstream, cols)
        branches = []
        for new_heading, frac in zip(_TURNS[heading],
                                     (_STRAIGHT, _RIGHT, _LEFT)):
            dr, dc = _STEPS[new_heading]
            nr, nc = r + dr, c + dc
            if 0 <= nr < rows and 0 <= nc < cols:
                dest = sec_of[(nr * cols + nc, new_heading)]
            else:
                dest = EXIT
            branches.append((dest, frac))
        routing[sec.section_id] = branches

    base_rates = {}
    for sec in sections:
        if sec.upstream is None:
            r, c = divmod(sec.downstream, cols)
            heading = _HEADINGS[sec.approach]
            if heading in ("E", "W"):
                base_rates[sec.section_id] = horizontal_weight * demand_decay ** r
            else:
                base_rates[sec.section_id] = vertical_weight * demand_decay ** c

    intersections = [Intersection(i, [sec_of[(i, h)] for h in _HEADINGS])
                     for i in range(n_inter)]
    net = TrafficNetwork(sections, intersections, routing, base_rates,
                         strategy, params)

    flows = equilibrium_flows(net)
    demand = [sum(flows[s] for s in inter.incoming)
              for inter in intersections]
    c_ref = params.reference_cycle
    service_capacity = (params.service_rate
                        * (c_ref - len(_HEADINGS) * params.switch_time) / c_ref)
    scale = utilization * service_capacity / max(demand)
    net.boundary_rates = {k: v * scale for k, v in base_rates.items()}
    _build_fixed_schedule(net)
    return net


def build_ring_network(n_intersections: int = 2,
                       vehicles_per_section: int = 5,
                       strategy: Strategy = Strategy.LONGEST_QUEUE_FIRST,
                       params: TrafficParams = TrafficParams()) -> TrafficNetwork:
    """Closed single-lane ring with no boundaries and no exits.

    Vehicles circulate forever, which makes total count an invariant --
    the conservation fixture.
    """
    sections = [RoadSection(section_id=i, capacity=params.capacity,
                            downstream=i, approach=0,
                            upstream=(i - 1) % n_intersections,
                            queue=vehicles_per_section)
                for i in range(n_intersections)]
    routing = {i: [((i + 1) % n_intersections, 1.0)]
               for i in range(n_intersections)}
    intersections = [Intersection(i, [i]) for i in range(n_intersections)]
    net = TrafficNetwork(sections, intersections, routing, {},
                         strategy, params)
    _build_fixed_schedule(net)
    return net


def equilibrium_flows(net: TrafficNetwork) -> np.ndarray:
    """Stationary per-section flow implied by boundary rates and routing.

    Solves f = a + Pᵀ f where P holds the turn fractions between sections
    (exits drop out). Capacities and signals are ignored; this is the
    free-flow linear balance used for demand scaling and green splits.
    Uses least squares, so closed networks (no boundaries, no exits, where
    the balance is degenerate) get the minimum-norm solution instead of an
    error.
    """
    n = len(net.sections)
    P = np.zeros((n, n))
    for src, branches in net.routing.items():
        for dest, frac in branches:
            if dest != EXIT:
                P[src, dest] = frac
    a = np.zeros(n)
    for sec_id, rate in net.boundary_rates.items():
        a[sec_id] = rate
    flows, *_ = np.linalg.lstsq(np.eye(n) - P.T, a, rcond=None)
    return flows


def _build_fixed_schedule(net: TrafficNetwork,
                          slack: float = 1.4,
                          min_total_green: int = 16,
                          max_total_green: int = 240) -> None:
    """Precompute the FixedCycle timetable for every intersection.

    Total green is sized so the cycle clears the equilibrium demand with
    `slack` headroom (bounded), and split between approaches proportionally
    to their equilibrium flows. Every block of the cycle starts with
    switch_time lost steps.
    """
    flows = equilibrium_flows(net)
    s, tau = net.params.service_rate, net.params.switch_time
    net.fixed_schedule = {}
    for inter in net.intersections:
        fa = [max(flows[sec_id], 0.0) for sec_id in inter.incoming]
        total = sum(fa)
        n_app = len(inter.incoming)
        if total >= s:
            total_green = max_total_green
        elif total > 0:
            need = n_app * tau * total / (s - total)
            total_green = int(min(max(math.ceil(need * slack),
                                      min_total_green), max_total_green))
        else:
            total_green = min_total_green
        shares = ([f / total for f in fa] if total > 0
                  else [1.0 / n_app] * n_app)
        greens = [max(1, round(total_green * sh)) for sh in shares]
        blocks = []
        for approach, g in enumerate(greens):
            if tau:
                blocks.append((None, tau))
            blocks.append((approach, g))
        net.fixed_schedule[inter.intersection_id] = blocks


def _fixed_cycle_phase(net: TrafficNetwork, inter: Intersection,
                       step_index: int) -> Optional[int]:
    """Approach on green at `step_index`, or None during lost time."""
    blocks = net.fixed_schedule[inter.intersection_id]
    cycle = sum(length for _, length in blocks)
    t = step_index % cycle
    for approach, length in blocks:
        if t < length:
            return approach
        t -= length
    raise AssertionError("unreachable: step inside cycle")


# ---------------------------------------------------------------------------
# per-step dynamics

def arrivals_step(net: TrafficNetwork, rng: np.random.Generator) -> int:
    """Poisson boundary arrivals, truncated at remaining capacity."""
    admitted = 0
    for sec_id in sorted(net.boundary_rates):
        rate = net.boundary_rates[sec_id]
        if rate <= 0:
            continue
        sec = net.sections[sec_id]
        want = int(rng.poisson(rate))
        room = sec.capacity - sec.queue
        take = min(want, room)
        sec.queue += take
        admitted += take
        net.blocked_count += want - take
    net.admitted += admitted
    return admitted


def _waitmin_scores(net: TrafficNetwork, inter: Intersection) -> list[float]:
    """Predicted vehicle-steps of local waiting per candidate approach.

    For each candidate, roll the incoming queues forward `horizon` steps:
    every section gains its smoothed observed inflow per step (clipped at
    capacity) and the candidate discharges service_rate per step once the
    switching lost time (if the candidate differs from the current phase)
    has elapsed.
    """
    p = net.params
    scores = []
    base = [float(net.sections[s].queue) for s in inter.incoming]
    preds = [net.inflow_ema[s] for s in inter.incoming]
    caps = [float(net.sections[s].capacity) for s in inter.incoming]
    # expected dischargeable share per approach: turns whose destination
    # currently has room (exits always do) -- spillback-blocked green is
    # worthless and the controller can see its neighbors' queues
    open_frac = []
    for sec_id in inter.incoming:
        frac = 0.0
        for dest, f in net.routing[sec_id]:
            if dest == EXIT or net.sections[dest].queue < net.sections[dest].capacity:
                frac += f
        open_frac.append(frac)
    for cand in range(len(inter.incoming)):
        lost = p.switch_time if cand != inter.served else 0
        q = list(base)
        total = 0.0
        for t in range(p.horizon):
            for i in range(len(q)):
                q[i] = min(q[i] + preds[i], caps[i])
            if t >= lost:
                q[cand] = max(0.0, q[cand] - p.service_rate * open_frac[cand])
            total += sum(q)
        scores.append(total)
    return scores


# an adaptive controller abandons its current phase only when the lookahead
# predicts at least this relative improvement; mild stickiness avoids
# thrashing, but a too-sticky controller lets queues grow deep between
# switches and its time-averaged queue rises sharply under load
_SWITCH_HYSTERESIS = 0.95


def choose_phase(inter: Intersection, net: TrafficNetwork) -> Optional[int]:
    """Approach the strategy wants served now (None: no preference change).

    FixedCycle answers straight from the timetable (possibly None during
    lost time); the adaptive strategies return a desired approach and the
    caller applies the switching lost time.
    """
    queues = [net.sections[s].queue for s in inter.incoming]
    if net.strategy is Strategy.FIXED_CYCLE:
        return _fixed_cycle_phase(net, inter, net.step_index)
    if net.strategy is Strategy.LONGEST_QUEUE_FIRST:
        return int(np.argmax(queues))
    if net.strategy is Strategy.SELF_REGULATING:
        threshold = net.params.critical_fraction * net.params.capacity
        if queues[inter.served] >= threshold:
            inter.clearing = True
            return inter.served      # stay on the current critical queue
        critical = [(q, -a) for a, q in enumerate(queues) if q >= threshold]
        if critical:
            inter.clearing = True
            return -max(critical)[1]
        if inter.clearing:
            if queues[inter.served] > 0:
                return inter.served  # finish clearing before anything else
            inter.clearing = False
    # LocalWaitMin (also the SelfRegulating fallback)
    scores = _waitmin_scores(net, inter)
    best = int(np.argmin(scores))
    # switch only on a clear improvement; ties and near-ties keep the
    # current phase so the lookahead noise does not cause thrashing
    if scores[best] < _SWITCH_HYSTERESIS * scores[inter.served]:
        return best
    return inter.served


def serve_step(net: TrafficNetwork, rng: np.random.Generator) -> int:
    """Select phases, discharge green approaches, route vehicles.

    Returns the number of vehicles moved (internal moves + exits). A
    vehicle bound for a full section blocks its approach for the rest of
    the step.
    """
    inflow: dict[int, int] = {}
    moved = 0
    for inter in net.intersections:
        if net.strategy is Strategy.FIXED_CYCLE:
            green = choose_phase(inter, net)
            if green is not None:
                inter.served = green
        elif inter.switch_timer > 0:
            inter.switch_timer -= 1   # committed to the pending switch
            green = None
        else:
            desired = choose_phase(inter, net)
            if desired is not None and desired != inter.served:
                inter.served = desired
                inter.switch_timer = net.params.switch_time
                inter.switch_timer -= 1
                green = None
            else:
                green = inter.served
        if green is None:
            continue
        sec = net.sections[inter.incoming[green]]
        branches = net.routing[sec.section_id]
        for _ in range(net.params.service_rate):
            if sec.queue == 0:
                break
            u = rng.random()
            acc = 0.0
            dest = branches[-1][0]
            for d, frac in branches:
                acc += frac
                if u < acc:
                    dest = d
                    break
            if dest == EXIT:
                sec.queue -= 1
                net.departed += 1
                moved += 1
            else:
                dsec = net.sections[dest]
                if dsec.queue >= dsec.capacity:
                    net.blocked_count += 1
                    continue              # this vehicle waits; others may pass
                sec.queue -= 1
                dsec.queue += 1
                inflow[dest] = inflow.get(dest, 0) + 1
                moved += 1
    a = net.params.smoothing
    for sec in net.sections:
        net.inflow_ema[sec.section_id] = (
            (1 - a) * net.inflow_ema[sec.section_id]
            + a * inflow.get(sec.section_id, 0))
    return moved


def traffic_step(net: TrafficNetwork, rng: np.random.Generator) -> None:
    """One full step: boundary arrivals, then service and routing."""
    arrivals_step(net, rng)
    serve_step(net, rng)
    net.step_index += 1


# ---------------------------------------------------------------------------
# simulation harness

@dataclass(frozen=True)
class TrafficResult:
    strategy: str
    utilization: float
    seed: int
    avg_total_queue: float
    avg_wait: float
    blocked_count: int


def simulate_traffic(strategy: Strategy, utilization: float, seed: int,
                     steps: int = 3000,
                     params: TrafficParams = TrafficParams(),
                     warmup_fraction: float = 0.1,
                     rows: int = 4, cols: int = 4) -> TrafficResult:
    """Run one (strategy, utilization, seed) cell on the default grid.

    The first `warmup_fraction` of steps is discarded. avg_total_queue is
    the time-averaged number of queued vehicles in the network; avg_wait
    is queued vehicle-steps divided by vehicles that left the network
    during measurement (a vehicle's expected total waiting time).
    """
    rng = np.random.default_rng([seed])
    net = build_grid_network(strategy, utilization, params, rows, cols)
    warmup = int(steps * warmup_fraction)
    for _ in range(warmup):
        traffic_step(net, rng)
    net.blocked_count = 0
    departed_before = net.departed
    queue_steps = 0
    for _ in range(steps - warmup):
        traffic_step(net, rng)
        queue_steps += net.total_queue()
    measured = steps - warmup
    departures = net.departed - departed_before
    return TrafficResult(
        strategy=strategy.value,
        utilization=utilization,
        seed=seed,
        avg_total_queue=queue_steps / measured,
        avg_wait=queue_steps / departures if departures else float("inf"),
        blocked_count=net.blocked_count,
    )


def run_traffic_grid(strategies: Sequence[Strategy] = ALL_STRATEGIES,
                     utilizations: Sequence[float] = (0.3, 0.85),
                     seeds: Sequence[int] = tuple(range(10)),
                     steps: int = 3000,
                     params: TrafficParams = TrafficParams(),
                     out_path=None) -> list[TrafficResult]:
    """The full comparison grid; optionally written as one CSV."""
    results = [simulate_traffic(strategy, u, seed, steps, params)
               for strategy in strategies
               for u in utilizations
               for seed in seeds]
    if out_path is not None:
        write_traffic_csv(out_path, results)
    return results


def write_traffic_csv(path, results: Sequence[TrafficResult]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["strategy", "utilization", "seed",
                     "avg_total_queue", "avg_wait", "blocked_count"])
        for r in results:
            wr.writerow([r.strategy, repr(r.utilization), r.seed,
                         repr(r.avg_total_queue), repr(r.avg_wait),
                         r.blocked_count])
