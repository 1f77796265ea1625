"""Baseline beam-scheduling policies behind a single interface.

A policy is reset once per episode with the grid and a seed stream, then
asked for one grid action per step.  Policies that ignore the observation
declare it so the episode runner can skip building observations.
"""

from __future__ import annotations

import numpy as np

from .actions import ActionGrid
from .observation import Observation


class Policy:
    """Episode-scoped action source."""

    name = "base"
    needs_observation = False

    def reset(self, grid: ActionGrid, rng: np.random.Generator) -> None:
        self.grid = grid
        self.rng = rng

    def act(self, step: int, observation: Observation | None = None) -> tuple[int, int]:
        raise NotImplementedError


class StaticPolicy(Policy):
    """Samples one action uniformly at reset and holds it all episode."""

    name = "static"

    def reset(self, grid: ActionGrid, rng: np.random.Generator) -> None:
        super().reset(grid, rng)
        self._held = tuple(int(v) for v in rng.integers(0, grid.size, size=2))

    def act(self, step: int, observation: Observation | None = None) -> tuple[int, int]:
        return self._held


class RandomPolicy(Policy):
    """Independent uniform action each step."""

    name = "random"

    def act(self, step: int, observation: Observation | None = None) -> tuple[int, int]:
        return tuple(int(v) for v in self.rng.integers(0, self.grid.size, size=2))


class CoveragePolicy(Policy):
    """Raster scan: sweeps each row left to right, rows bottom to top,
    then repeats."""

    name = "coverage"

    def act(self, step: int, observation: Observation | None = None) -> tuple[int, int]:
        n = self.grid.size
        return step % n, (step // n) % n


class ReplayPolicy(Policy):
    """Plays back an externally supplied action sequence."""

    name = "external"

    def __init__(self, actions):
        self._actions = [tuple(int(v) for v in a) for a in actions]

    def act(self, step: int, observation: Observation | None = None) -> tuple[int, int]:
        if step >= len(self._actions):
            raise ValueError(f"action sequence exhausted at step {step}")
        return self._actions[step]


def make_policy(name: str, actions=None) -> Policy:
    """Instantiate a policy by CLI name."""
    if name == "static":
        return StaticPolicy()
    if name == "random":
        return RandomPolicy()
    if name == "coverage":
        return CoveragePolicy()
    if name == "external":
        if actions is None:
            raise ValueError("external policy needs an action sequence")
        return ReplayPolicy(actions)
    raise ValueError(f"unknown policy {name!r}")
