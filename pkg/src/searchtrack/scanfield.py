"""Diffusing scan-history field over the beam-direction plane.

Every executed beam dwell is remembered as a record ``(center, step)`` in a
bounded FIFO.  A record contributes an isotropic bivariate normal in
(azimuth, elevation) whose standard deviation starts at ``sigma`` and is
inflated by ``(1 + rate)`` per elapsed step, so confidence in old scans
decays while total mass is preserved.  Field values are normalized by the
analytic peak a fresh-scan-per-step history can reach within a fixed window,
which makes them comparable across time and geometry.

The inner evaluation loops live in a compiled extension when available; a
NumPy implementation with identical semantics is selected otherwise (or when
``SEARCHTRACK_PURE_FIELD=1`` is set).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

if os.environ.get("SEARCHTRACK_PURE_FIELD") == "1":
    from . import _scanfield_py as _kernel

    FIELD_BACKEND = "numpy"
else:
    try:
        from . import _scanfield as _kernel  # type: ignore[attr-defined]

        FIELD_BACKEND = "compiled"
    except ImportError:
        from . import _scanfield_py as _kernel

        FIELD_BACKEND = "numpy"

TWO_PI = 2.0 * np.pi

# 95% of a normal's mass lies within +-1.96 sigma, so a beam of total width w
# holds the central 95% when sigma = w / (2 * 1.96).
_Z_95_TWO_SIDED = 1.96


def beam_sigma(beam_width: float) -> float:
    """Standard deviation placing 95% of a scan's mass inside the beam width."""
    if beam_width <= 0:
        raise ValueError("beam width must be positive")
    return beam_width / (2.0 * _Z_95_TWO_SIDED)


def diffusion_rate(peak_ratio: float, horizon: int) -> float:
    """Per-step sigma growth rate such that a scan's peak value decays to
    ``peak_ratio`` times its initial value after ``horizon`` steps.

    The peak scales as ``(1 + rate)**(-2 t)``, so
    ``rate = peak_ratio**(-1 / (2 * horizon)) - 1``.
    """
    if not 0.0 < peak_ratio <= 1.0:
        raise ValueError("peak ratio must be in (0, 1]")
    if horizon < 1:
        raise ValueError("horizon must be at least one step")
    return float(peak_ratio ** (-1.0 / (2.0 * horizon)) - 1.0)


def scan_pdf(point, center, sigma: float) -> float:
    """Isotropic bivariate normal density at ``point`` for a scan at ``center``."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    d = np.asarray(point, dtype=float) - np.asarray(center, dtype=float)
    return float(np.exp(-0.5 * (d @ d) / (sigma * sigma)) / (TWO_PI * sigma * sigma))


def peak_field_value(window: int, sigma: float, rate: float) -> float:
    """Largest field value reachable when one scan lands per step.

    Sums the decayed peak of the current scan and the ``window`` scans before
    it, all centered on the same point:
    ``sum_{t=0..window} 1 / (2 pi sigma^2 (1 + rate)^(2 t))``.
    """
    if window < 0:
        raise ValueError("window must be nonnegative")
    terms = 1.0 / (TWO_PI * sigma * sigma * (1.0 + rate) ** (2.0 * np.arange(window + 1)))
    return float(terms.sum())


@dataclass(frozen=True)
class ScanRecord:
    """One remembered dwell: beam center (azimuth, elevation) and its step."""

    center: tuple[float, float]
    step: int


class ScanField:
    """Bounded FIFO of scan records with field evaluation.

    Args:
        capacity: maximum number of remembered scans (oldest evicted first).
        sigma: initial per-scan standard deviation, radians.
        rate: per-step sigma growth rate (>= 0).
        norm_window: window used for the normalization constant.
        cutoff: per-record truncation radius in sigmas for evaluation
            (performance knob; <= 0 evaluates the full Gaussians).
    """

    def __init__(
        self,
        capacity: int,
        sigma: float,
        rate: float,
        norm_window: int = 4,
        cutoff: float = 6.0,
    ):
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        if rate < 0:
            raise ValueError("rate must be nonnegative")
        self.capacity = int(capacity)
        self.sigma = float(sigma)
        self.rate = float(rate)
        self.norm_window = int(norm_window)
        self.norm_value = peak_field_value(norm_window, sigma, rate)
        self.cutoff = float(cutoff)
        self._centers = np.empty((capacity, 2))
        self._steps = np.empty(capacity, dtype=np.int64)
        self._head = 0  # index of next write
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def records(self) -> list[ScanRecord]:
        """Stored records, oldest first."""
        centers, steps = self._active()
        return [
            ScanRecord((float(c[0]), float(c[1])), int(t)) for c, t in zip(centers, steps)
        ]

    def _active(self) -> tuple[np.ndarray, np.ndarray]:
        idx = (np.arange(self._head - self._size, self._head)) % self.capacity
        return self._centers[idx], self._steps[idx]

    def push(self, center, step: int) -> None:
        """Append a scan record; evicts the oldest when full.

        Steps must be pushed in nondecreasing order.
        """
        if self._size > 0:
            last = self._steps[(self._head - 1) % self.capacity]
            if step < last:
                raise ValueError(f"scan steps must be nondecreasing (got {step} after {last})")
        self._centers[self._head] = center
        self._steps[self._head] = step
        self._head = (self._head + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def clear(self) -> None:
        self._head = 0
        self._size = 0

    def _sigmas_at(self, step: int) -> tuple[np.ndarray, np.ndarray]:
        centers, steps = self._active()
        if len(steps) and step < steps.max():
            raise ValueError("evaluation step precedes a stored scan")
        sigmas = self.sigma * (1.0 + self.rate) ** (step - steps)
        return np.ascontiguousarray(centers), sigmas

    def value(self, point, step: int) -> float:
        """Raw field value at one (azimuth, elevation) point."""
        if self._size == 0:
            return 0.0
        centers, sigmas = self._sigmas_at(step)
        pt = np.ascontiguousarray(np.asarray(point, dtype=float).reshape(1, 2))
        return float(_kernel.field_values(centers, sigmas, pt, self.cutoff)[0])

    def values(self, points: np.ndarray, step: int) -> np.ndarray:
        """Raw field values at an (n, 2) array of points."""
        points = np.ascontiguousarray(points, dtype=float)
        if self._size == 0:
            return np.zeros(len(points))
        centers, sigmas = self._sigmas_at(step)
        return _kernel.field_values(centers, sigmas, points, self.cutoff)

    def normalized(self, point, step: int) -> float:
        """Field value scaled by the analytic peak bound (dimensionless)."""
        return self.value(point, step) / self.norm_value

    def raster(self, step: int, size: int = 48, half_extent: float = np.pi / 3) -> np.ndarray:
        """Normalized field sampled on a ``size x size`` grid.

        Row index follows azimuth, column index elevation; both axes run
        linearly from ``-half_extent`` to ``+half_extent`` inclusive.  Each
        cell equals the pointwise normalized value exactly.
        """
        if size < 2:
            raise ValueError("raster size must be at least 2")
        axis = np.linspace(-half_extent, half_extent, size)
        if self._size == 0:
            return np.zeros((size, size))
        centers, sigmas = self._sigmas_at(step)
        grid = _kernel.field_raster(centers, sigmas, axis, axis, self.cutoff)
        return grid / self.norm_value
