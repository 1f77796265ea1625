"""NumPy fallback for the compiled scan-field kernels.

Matches the compiled module's semantics: per-record circular truncation at
``cutoff`` standard deviations (``cutoff <= 0`` disables it) and record-major
accumulation, so point and raster evaluations agree exactly with each other.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def _accumulate(centers, sigmas, pts, cutoff):
    out = np.zeros(len(pts))
    for j in range(len(centers)):
        s2 = sigmas[j] * sigmas[j]
        d = pts - centers[j]
        r2 = d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]
        vals = np.exp(-0.5 * r2 / s2) / (TWO_PI * s2)
        if cutoff > 0.0:
            vals[r2 > cutoff * cutoff * s2] = 0.0
        out += vals
    return out


def field_values(centers, sigmas, points, cutoff):
    """Field value at each query point: sum over records of the scaled normal."""
    if len(centers) == 0:
        return np.zeros(len(points))
    return _accumulate(centers, sigmas, np.asarray(points, dtype=float), cutoff)


def field_raster(centers, sigmas, axis_a, axis_b, cutoff):
    """Field values over the grid axis_a x axis_b (row index follows axis_a)."""
    na, nb = len(axis_a), len(axis_b)
    if len(centers) == 0:
        return np.zeros((na, nb))
    aa, bb = np.meshgrid(axis_a, axis_b, indexing="ij")
    pts = np.column_stack([aa.ravel(), bb.ravel()])
    return _accumulate(centers, sigmas, pts, cutoff).reshape(na, nb)
