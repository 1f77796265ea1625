import numpy as np
import pytest
from scipy.stats import chisquare

from searchtrack.actions import ActionGrid
from searchtrack.policies import (
    CoveragePolicy,
    RandomPolicy,
    ReplayPolicy,
    StaticPolicy,
    make_policy,
)

GRID = ActionGrid(19)


class TestStatic:
    def test_holds_action(self):
        pol = StaticPolicy()
        pol.reset(GRID, np.random.default_rng(0))
        actions = {pol.act(step) for step in range(100)}
        assert len(actions) == 1

    def test_same_seed_same_action(self):
        a, b = StaticPolicy(), StaticPolicy()
        a.reset(GRID, np.random.default_rng(5))
        b.reset(GRID, np.random.default_rng(5))
        assert a.act(0) == b.act(0)

    def test_held_action_uniform_over_seeds(self):
        counts = np.zeros((19, 19), dtype=int)
        pol = StaticPolicy()
        for seed in range(10_000):
            pol.reset(GRID, np.random.default_rng(seed))
            i, j = pol.act(0)
            counts[i, j] += 1
        _, p = chisquare(counts.ravel())
        assert p > 0.01


class TestRandom:
    def test_in_range_and_reproducible(self):
        pol = RandomPolicy()
        pol.reset(GRID, np.random.default_rng(3))
        seq = [pol.act(s) for s in range(500)]
        assert all(0 <= i < 19 and 0 <= j < 19 for i, j in seq)
        pol.reset(GRID, np.random.default_rng(3))
        assert seq == [pol.act(s) for s in range(500)]

    def test_marginals_uniform(self):
        pol = RandomPolicy()
        pol.reset(GRID, np.random.default_rng(17))
        draws = np.array([pol.act(s) for s in range(100_000)])
        for axis in range(2):
            counts = np.bincount(draws[:, axis], minlength=19)
            _, p = chisquare(counts)
            assert p > 0.01


class TestCoverage:
    def test_raster_order(self):
        pol = CoveragePolicy()
        pol.reset(GRID, np.random.default_rng(0))
        assert pol.act(0) == (0, 0)
        assert pol.act(1) == (1, 0)
        assert pol.act(19) == (0, 1)
        assert pol.act(19 * 19) == (0, 0)

    def test_visits_every_cell_once_per_cycle(self):
        pol = CoveragePolicy()
        pol.reset(GRID, np.random.default_rng(0))
        cells = {pol.act(s) for s in range(19 * 19)}
        assert len(cells) == 19 * 19


class TestReplay:
    def test_plays_back(self):
        pol = ReplayPolicy([(1, 2), (3, 4)])
        pol.reset(GRID, np.random.default_rng(0))
        assert pol.act(0) == (1, 2) and pol.act(1) == (3, 4)
        with pytest.raises(ValueError):
            pol.act(2)


def test_factory():
    assert make_policy("static").name == "static"
    assert make_policy("random").name == "random"
    assert make_policy("coverage").name == "coverage"
    assert make_policy("external", actions=[(0, 0)]).name == "external"
    with pytest.raises(ValueError):
        make_policy("external")
    with pytest.raises(ValueError):
        make_policy("ppo")
