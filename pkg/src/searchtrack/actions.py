"""Discrete beam-pointing action grid over the field of regard.

Actions are integer pairs on an ``size x size`` grid mapped linearly onto
bearings in ``[-half_extent, +half_extent]`` per axis.  The grid size divides
the field of regard by ``sqrt(2)/2`` of the beam width: overlapping
neighbouring dwells, so a circular beam leaves no unreachable points, where
spacing at the full beam width would leave roughly 21% of the area uncovered.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def grid_size(field_of_regard: float, beam_width: float) -> int:
    """Number of grid points per axis for full circular-beam coverage."""
    if field_of_regard <= 0 or beam_width <= 0:
        raise ValueError("field of regard and beam width must be positive")
    n = int(np.ceil(field_of_regard / (np.sqrt(2.0) / 2.0 * beam_width)))
    if n < 2:
        raise ValueError(
            f"beam width {beam_width} too wide for field of regard {field_of_regard}: "
            "grid needs at least 2 points per axis"
        )
    return n


@dataclass(frozen=True)
class ActionGrid:
    """Beam-pointing grid: ``size`` points per axis across the field of regard."""

    size: int
    half_extent: float = np.pi / 3

    @classmethod
    def from_sensor(cls, field_of_regard: float, beam_width: float) -> "ActionGrid":
        return cls(grid_size(field_of_regard, beam_width), field_of_regard / 2.0)

    @property
    def n_actions(self) -> int:
        return self.size * self.size

    def bearings(self, action) -> tuple[float, float]:
        """Map an integer action pair to (azimuth, elevation) radians."""
        a = np.asarray(action)
        if a.shape != (2,) or not np.issubdtype(a.dtype, np.integer):
            a = np.asarray(action, dtype=float)
            if a.shape != (2,) or np.any(a != np.round(a)):
                raise ValueError(f"action must be an integer pair, got {action!r}")
            a = a.astype(int)
        if np.any(a < 0) or np.any(a >= self.size):
            raise ValueError(f"action {tuple(a)} outside grid of size {self.size}")
        b = self.half_extent * (2.0 * a / (self.size - 1) - 1.0)
        return float(b[0]), float(b[1])
