"""Episode configuration: every tunable in one seeded, JSON-round-trippable
record.  Unknown keys are rejected with their field path."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    pass


@dataclass
class SensorConfig:
    beam_width: float = float(np.deg2rad(9.0))
    sigma_psi: float = 1e-3
    sigma_theta: float = 1e-3
    sigma_r: float = 5.0
    p_detect: float = 1.0
    clutter_rate: float = 0.0


@dataclass
class TrackerSection:
    q_process: float = 1.0
    gate: float = 6.0
    c_threshold: float = 8.0e6
    ukf_alpha: float = 0.5
    ukf_beta: float = 2.0
    ukf_kappa: float = 0.0
    init_vel_var: float = 3700.0 / 3.0


@dataclass
class ScanSection:
    capacity: int = 64
    peak_ratio: float = 0.01
    horizon: int = 600
    norm_window: int = 4
    cutoff: float = 6.0


@dataclass
class GridSection:
    field_of_regard: float = float(2.0 * np.pi / 3.0)


@dataclass
class ObsSection:
    max_tracks: int = 15
    raster_size: int = 48
    overflow: str = "best"


@dataclass
class SpawnSection:
    r_min: float = 20_000.0
    r_max: float = 90_000.0
    v_min: float = 10.0
    v_max: float = 100.0


@dataclass
class GospaSection:
    cutoff: float = 1000.0
    order: float = 1.0
    alpha: float = 2.0


@dataclass
class RewardSection:
    literal_track_sign: bool = False


@dataclass
class EpisodeConfig:
    """Everything that, together with a policy, determines an episode."""

    seed: int = 0
    dt: float = 0.05
    n_steps: int = 1200
    n_targets: int = 10
    sensor: SensorConfig = field(default_factory=SensorConfig)
    tracker: TrackerSection = field(default_factory=TrackerSection)
    scan: ScanSection = field(default_factory=ScanSection)
    grid: GridSection = field(default_factory=GridSection)
    obs: ObsSection = field(default_factory=ObsSection)
    spawn: SpawnSection = field(default_factory=SpawnSection)
    gospa: GospaSection = field(default_factory=GospaSection)
    rewards: RewardSection = field(default_factory=RewardSection)

    def validate(self) -> None:
        checks = [
            (self.dt > 0, "dt", "must be positive"),
            (self.n_steps >= 1, "n_steps", "must be at least 1"),
            (self.n_targets >= 0, "n_targets", "must be nonnegative"),
            (self.sensor.beam_width > 0, "sensor.beam_width", "must be positive"),
            (0 <= self.sensor.p_detect <= 1, "sensor.p_detect", "must be in [0, 1]"),
            (self.sensor.clutter_rate >= 0, "sensor.clutter_rate", "must be nonnegative"),
            (self.tracker.c_threshold > 0, "tracker.c_threshold", "must be positive"),
            (self.tracker.gate > 0, "tracker.gate", "must be positive"),
            (self.tracker.init_vel_var > 0, "tracker.init_vel_var", "must be positive"),
            (self.scan.capacity >= 1, "scan.capacity", "must be at least 1"),
            (0 < self.scan.peak_ratio <= 1, "scan.peak_ratio", "must be in (0, 1]"),
            (self.scan.horizon >= 1, "scan.horizon", "must be at least 1"),
            (self.scan.norm_window >= 0, "scan.norm_window", "must be nonnegative"),
            (self.grid.field_of_regard > 0, "grid.field_of_regard", "must be positive"),
            (self.obs.max_tracks >= 1, "obs.max_tracks", "must be at least 1"),
            (self.obs.raster_size >= 2, "obs.raster_size", "must be at least 2"),
            (self.obs.overflow in ("best", "first"), "obs.overflow", "must be 'best' or 'first'"),
            (0 < self.spawn.r_min <= self.spawn.r_max, "spawn.r_min", "needs 0 < r_min <= r_max"),
            (0 <= self.spawn.v_min <= self.spawn.v_max, "spawn.v_min", "needs 0 <= v_min <= v_max"),
            (self.gospa.cutoff > 0, "gospa.cutoff", "must be positive"),
            (self.gospa.order >= 1, "gospa.order", "must be >= 1"),
            (0 < self.gospa.alpha <= 2, "gospa.alpha", "must be in (0, 2]"),
        ]
        for ok, path, msg in checks:
            if not ok:
                raise ConfigError(f"{path}: {msg}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EpisodeConfig":
        cfg = _build(cls, data, path="")
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path: str | Path) -> "EpisodeConfig":
        with open(path) as f:
            return cls.from_dict(json.load(f))

    def sha256(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()


def _build(cls, data, path):
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'config'}: expected an object, got {type(data).__name__}")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(fields)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown key {(path + '.' if path else '') + key!s}")
    kwargs = {}
    for name, value in data.items():
        f = fields[name]
        sub_path = f"{path}.{name}" if path else name
        if dataclasses.is_dataclass(f.type) or (
            isinstance(f.type, str) and f.type in _SECTIONS
        ):
            sub_cls = _SECTIONS[f.type] if isinstance(f.type, str) else f.type
            kwargs[name] = _build(sub_cls, value, sub_path)
        else:
            kwargs[name] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{path or 'config'}: {exc}") from exc


_SECTIONS = {
    c.__name__: c
    for c in (
        SensorConfig,
        TrackerSection,
        ScanSection,
        GridSection,
        ObsSection,
        SpawnSection,
        GospaSection,
        RewardSection,
    )
}
