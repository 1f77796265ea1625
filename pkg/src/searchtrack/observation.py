"""Fixed-shape observation: a zero-padded normalized track matrix plus the
rasterized scan field."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scanfield import ScanField
from .tracking import Track

TRACK_FEATURES = 7


@dataclass(frozen=True)
class ObservationConfig:
    max_tracks: int = 15
    raster_size: int = 48
    range_scale: float = 100_000.0
    bearing_scale: float = np.pi / 3
    velocity_scale: float = 100.0
    # When more tracks exist than rows: keep the lowest-covariance ones
    # ("best"), or the lowest track ids ("first").
    overflow: str = "best"


@dataclass
class Observation:
    """Policy input: (max_tracks, 7) float32 track matrix and
    (1, N, N) float32 scan raster."""

    track_matrix: np.ndarray
    scan_raster: np.ndarray


def encode_track(track: Track, c_threshold: float, cfg: ObservationConfig | None = None) -> np.ndarray:
    """Normalize one track into its 7-entry observation row.

    Entries: range (scaled, offset to [-1, 0] at zero range), azimuth,
    elevation, the three velocity components and the covariance Frobenius
    norm scaled by the deletion threshold.
    """
    cfg = cfg or ObservationConfig()
    pos = track.position
    r = float(np.linalg.norm(pos))
    psi = float(np.arctan2(pos[1], pos[0]))
    theta = float(np.arcsin(pos[2] / r)) if r > 0 else 0.0
    vel = track.velocity
    return np.array(
        [
            r / cfg.range_scale - 1.0,
            psi / cfg.bearing_scale,
            theta / cfg.bearing_scale,
            vel[0] / cfg.velocity_scale,
            vel[1] / cfg.velocity_scale,
            vel[2] / cfg.velocity_scale,
            track.cov_norm / c_threshold,
        ]
    )


def build_observation(
    tracks: list[Track],
    scan_field: ScanField,
    step: int,
    c_threshold: float,
    cfg: ObservationConfig | None = None,
) -> Observation:
    """Assemble the observation for the current step.

    Rows hold up to ``max_tracks`` encoded tracks in ascending-id order with
    exact zeros beyond; overflow keeps the configured subset.  The raster is
    the normalized scan field over the field of regard.
    """
    cfg = cfg or ObservationConfig()
    matrix = np.zeros((cfg.max_tracks, TRACK_FEATURES), dtype=np.float32)
    chosen = tracks
    if len(tracks) > cfg.max_tracks:
        if cfg.overflow == "best":
            ranked = sorted(tracks, key=lambda t: (t.cov_norm, t.track_id))
        else:
            ranked = sorted(tracks, key=lambda t: t.track_id)
        chosen = ranked[: cfg.max_tracks]
    for row, trk in enumerate(sorted(chosen, key=lambda t: t.track_id)):
        matrix[row] = encode_track(trk, c_threshold, cfg)
    raster = scan_field.raster(step, cfg.raster_size).astype(np.float32)[None, :, :]
    return Observation(matrix, raster)
