"""Deterministic 3D radar search-and-track simulation.

A beam-agile radar watches a fixed field of regard for constant-velocity
targets.  Past dwells form a diffusing Gaussian scan field; detections feed
an unscented-Kalman-filter multi-target tracker.  Episodes expose a
reset/step interface with fixed-shape observations, a two-part reward
(search coverage and tracking confidence) and GOSPA-based evaluation, plus
three baseline pointing policies.
"""

__version__ = "0.1.0"

from .actions import ActionGrid, grid_size
from .config import ConfigError, EpisodeConfig
from .engine import (
    Environment,
    EpisodeTrace,
    read_trace,
    run_batch,
    run_episode,
    write_trace,
)
from .geometry import angular_offset, cart_to_spherical, spherical_to_cart
from .metrics import GospaConfig, GospaResult, gospa, gospa_switching, summarize_episode
from .observation import Observation, build_observation, encode_track
from .policies import (
    CoveragePolicy,
    Policy,
    RandomPolicy,
    ReplayPolicy,
    StaticPolicy,
    make_policy,
)
from .rewards import RewardBreakdown, search_reward, total_reward, track_reward
from .scanfield import (
    FIELD_BACKEND,
    ScanField,
    beam_sigma,
    diffusion_rate,
    peak_field_value,
    scan_pdf,
)
from .simulation import Detection, SensorModel, SpawnBounds, TargetState, propagate, sense, spawn_targets
from .tracking import (
    MotionModel,
    Track,
    TrackerConfig,
    assign,
    mahalanobis,
    mtt_step,
    ukf_predict,
    ukf_update,
)

__all__ = [
    "ActionGrid",
    "ConfigError",
    "CoveragePolicy",
    "Detection",
    "Environment",
    "EpisodeConfig",
    "EpisodeTrace",
    "FIELD_BACKEND",
    "GospaConfig",
    "GospaResult",
    "MotionModel",
    "Observation",
    "Policy",
    "RandomPolicy",
    "ReplayPolicy",
    "RewardBreakdown",
    "ScanField",
    "SensorModel",
    "SpawnBounds",
    "StaticPolicy",
    "TargetState",
    "Track",
    "TrackerConfig",
    "angular_offset",
    "assign",
    "beam_sigma",
    "build_observation",
    "cart_to_spherical",
    "diffusion_rate",
    "encode_track",
    "gospa",
    "gospa_switching",
    "grid_size",
    "mahalanobis",
    "make_policy",
    "mtt_step",
    "peak_field_value",
    "propagate",
    "read_trace",
    "run_batch",
    "run_episode",
    "scan_pdf",
    "search_reward",
    "sense",
    "spawn_targets",
    "spherical_to_cart",
    "summarize_episode",
    "total_reward",
    "track_reward",
    "ukf_predict",
    "ukf_update",
    "write_trace",
]
