"""Lattice world: occupancy, neighborhoods, empty-site search, snapshots."""
import numpy as np
import pytest

from sociolab.game import COOPERATE, DEFECT
from sociolab.world import (FamilySpec, GridWorld, Position, closest_empty_site,
                            init_world, moore_neighbors, snapshot_codes)

FAMS = [FamilySpec("f1", 0.0, 0.5), FamilySpec("f2", 0.2, 0.5)]


def test_init_population_and_shares():
    w = init_world(50, 50, 0.6, FAMS, seed=3)
    assert w.population == int(50 * 50 * 0.6)
    counts = [int((w.occupied & (w.family == i)).sum()) for i in range(2)]
    assert counts[0] == counts[1] == w.population // 2
    # friendliness follows the founding family
    assert np.all(w.rho[w.occupied & (w.family == 0)] == 0.0)
    assert np.all(w.rho[w.occupied & (w.family == 1)] == 0.2)
    # everyone starts defecting
    assert not np.any(w.action[w.occupied] == COOPERATE)


def test_init_rejects_bad_inputs():
    with pytest.raises(ValueError):
        init_world(10, 10, 0.0, FAMS, seed=0)
    with pytest.raises(ValueError):
        init_world(10, 10, 0.5, [FamilySpec("a", 0.0, 0.7)], seed=0)
    with pytest.raises(ValueError):
        init_world(10, 10, 0.5, [], seed=0)


def test_moore_neighbors_interior_and_corner():
    w = GridWorld(5, 5, ["f"])
    assert len(moore_neighbors(w, Position(2, 2))) == 8
    assert len(moore_neighbors(w, Position(0, 0))) == 3
    assert len(moore_neighbors(w, Position(4, 0))) == 3
    assert len(moore_neighbors(w, Position(0, 2))) == 5
    assert Position(2, 2) not in moore_neighbors(w, Position(2, 2))


def test_place_and_remove_agent():
    w = GridWorld(4, 4, ["f"])
    aid = w.place_agent(Position(1, 2), "f", 0.3, COOPERATE)
    agent = w.agent_at(Position(1, 2))
    assert agent.agent_id == aid and agent.rho == 0.3
    with pytest.raises(ValueError):
        w.place_agent(Position(1, 2), "f", 0.1)
    w.remove_agent(Position(1, 2))
    assert w.agent_at(Position(1, 2)) is None
    assert w.population == 0
    with pytest.raises(ValueError):
        w.remove_agent(Position(1, 2))


def test_closest_empty_site_prefers_minimal_distance():
    w = GridWorld(5, 5, ["f"])
    for y in range(5):
        for x in range(5):
            if (x, y) not in ((0, 0), (4, 4)):
                w.place_agent(Position(x, y), "f", 0.0)
    rng = np.random.default_rng(0)
    assert closest_empty_site(w, Position(1, 1), rng) == Position(0, 0)
    assert closest_empty_site(w, Position(3, 3), rng) == Position(4, 4)


def test_closest_empty_site_tie_break_is_random_but_minimal():
    w = GridWorld(3, 3, ["f"])
    w.place_agent(Position(1, 1), "f", 0.0)
    rng = np.random.default_rng(7)
    seen = {closest_empty_site(w, Position(1, 1), rng) for _ in range(200)}
    # all four orthogonal neighbors are at distance 1; diagonals never chosen
    assert seen == {Position(1, 0), Position(0, 1), Position(2, 1), Position(1, 2)}


def test_closest_empty_site_none_when_full():
    w = GridWorld(2, 2, ["f"])
    for y in range(2):
        for x in range(2):
            w.place_agent(Position(x, y), "f", 0.0)
    assert closest_empty_site(w, Position(0, 0), np.random.default_rng(0)) is None


def test_snapshot_codes_four_color_convention():
    w = GridWorld(2, 2, ["f1", "f2"])
    w.place_agent(Position(0, 0), "f1", 0.0, DEFECT)      # code 0
    w.place_agent(Position(1, 0), "f1", 0.0, COOPERATE)   # code 1
    w.place_agent(Position(0, 1), "f2", 0.2, DEFECT)      # code 2
    # (1,1) stays empty -> -1
    codes = snapshot_codes(w)
    assert codes.tolist() == [[0, 1], [2, -1]]
