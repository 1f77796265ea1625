"""Observation/action dataset recorder for imitation pre-training.

File layout: one JSON header line (shapes, count, dtypes, version) followed
by contiguous little-endian binary records.  Each record is the track matrix
(float32), the scan raster (float32) and the action pair (int32), so the
file can be memory-mapped with a structured dtype.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .config import EpisodeConfig
from .engine import Environment
from .policies import Policy

_MAGIC = "searchtrack-bc"


def record_dtype(track_shape, raster_shape) -> np.dtype:
    return np.dtype(
        [
            ("tracks", "<f4", tuple(track_shape)),
            ("raster", "<f4", tuple(raster_shape)),
            ("action", "<i4", (2,)),
        ]
    )


def export_dataset(
    config: EpisodeConfig,
    policy: Policy,
    n_samples: int,
    path: str | Path,
    base_seed: int | None = None,
) -> dict:
    """Collect ``n_samples`` (observation, action) pairs from the teacher
    policy and write them to ``path``.  Episodes use consecutive seeds;
    each pair holds the observation the teacher saw when choosing.

    Returns the written header.
    """
    if n_samples <= 0:
        raise ValueError("sample count must be positive")
    track_shape = (config.obs.max_tracks, 7)
    raster_shape = (1, config.obs.raster_size, config.obs.raster_size)
    header = {
        "magic": _MAGIC,
        "version": __version__,
        "count": n_samples,
        "track_shape": list(track_shape),
        "raster_shape": list(raster_shape),
        "obs_dtype": "float32",
        "action_dtype": "int32",
        "policy": policy.name,
        "config_sha256": config.sha256(),
    }
    dtype = record_dtype(track_shape, raster_shape)
    seed = config.seed if base_seed is None else int(base_seed)
    written = 0
    env = Environment(config)
    with open(path, "wb") as f:
        f.write((json.dumps(header) + "\n").encode())
        buffer = np.empty(min(n_samples, config.n_steps), dtype=dtype)
        while written < n_samples:
            obs = env.reset(seed)
            policy.reset(env.grid, env._rng["policy"])
            seed += 1
            done = False
            fill = 0
            while not done and written + fill < n_samples:
                action = policy.act(env._t, obs)
                buffer[fill]["tracks"] = obs.track_matrix
                buffer[fill]["raster"] = obs.scan_raster
                buffer[fill]["action"] = action
                fill += 1
                obs, _, done, _ = env.step(action)
            buffer[:fill].tofile(f)
            written += fill
    return header


def read_header(path: str | Path) -> tuple[dict, int]:
    """Read and validate the header; returns (header, payload offset)."""
    with open(path, "rb") as f:
        line = f.readline()
        offset = f.tell()
    header = json.loads(line)
    if header.get("magic") != _MAGIC:
        raise ValueError(f"{path}: not a dataset file")
    return header, offset


def load_dataset(path: str | Path, mmap: bool = True) -> tuple[dict, np.ndarray]:
    """Load all records; memory-mapped by default."""
    header, offset = read_header(path)
    dtype = record_dtype(header["track_shape"], header["raster_shape"])
    if mmap:
        records = np.memmap(path, dtype=dtype, mode="r", offset=offset, shape=(header["count"],))
    else:
        with open(path, "rb") as f:
            f.seek(offset)
            records = np.fromfile(f, dtype=dtype, count=header["count"])
    if len(records) != header["count"]:
        raise ValueError(
            f"{path}: truncated dataset ({len(records)} of {header['count']} records)"
        )
    return header, records
