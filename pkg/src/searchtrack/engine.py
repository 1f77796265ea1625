"""Episode engine: binds sensor, tracker, scan field, rewards and metrics
into a deterministic reset/step loop, with trace recording and a batch
runner.

Step pipeline (order is part of the contract):
  1. map the action to beam bearings,
  2. compute the search reward from the pre-scan field,
  3. push the new scan,
  4. propagate targets by dt,
  5. sense detections at the commanded boresight,
  6. run the tracker,
  7. compute the tracking reward,
  8. build the observation.

One master seed is split into named independent substreams (target spawn,
measurement noise, clutter, policy) so toggling one stochastic feature never
perturbs the others.
"""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .actions import ActionGrid
from .config import EpisodeConfig
from .metrics import GospaConfig, gospa, summarize_episode
from .observation import Observation, ObservationConfig, build_observation
from .policies import Policy, make_policy
from .rewards import RewardBreakdown, search_reward, track_reward
from .scanfield import FIELD_BACKEND, ScanField, beam_sigma, diffusion_rate
from .simulation import SensorModel, SpawnBounds, propagate, sense, spawn_targets
from .tracking import MotionModel, TrackerConfig, mtt_step

_STREAMS = ("spawn", "measurement", "clutter", "policy")


@dataclass
class EpisodeTrace:
    """Header (config echo, versions) plus one record per step."""

    header: dict
    steps: list[dict]


class Environment:
    """One episode instance; strictly sequential, owns all of its state."""

    def __init__(self, config: EpisodeConfig | None = None):
        self.config = config or EpisodeConfig()
        self.config.validate()
        cfg = self.config
        self.grid = ActionGrid.from_sensor(cfg.grid.field_of_regard, cfg.sensor.beam_width)
        self.sensor = SensorModel(
            beam_width=cfg.sensor.beam_width,
            noise_std=np.array([cfg.sensor.sigma_psi, cfg.sensor.sigma_theta, cfg.sensor.sigma_r]),
            p_detect=cfg.sensor.p_detect,
            clutter_rate=cfg.sensor.clutter_rate,
        )
        self.motion = MotionModel(cfg.dt, cfg.tracker.q_process)
        self.tracker_cfg = TrackerConfig(
            c_threshold=cfg.tracker.c_threshold,
            gate=cfg.tracker.gate,
            alpha=cfg.tracker.ukf_alpha,
            beta=cfg.tracker.ukf_beta,
            kappa=cfg.tracker.ukf_kappa,
            init_vel_var=cfg.tracker.init_vel_var,
        )
        self.obs_cfg = ObservationConfig(
            max_tracks=cfg.obs.max_tracks,
            raster_size=cfg.obs.raster_size,
            bearing_scale=cfg.grid.field_of_regard / 2.0,
            overflow=cfg.obs.overflow,
        )
        self.spawn_bounds = SpawnBounds(
            r_min=cfg.spawn.r_min,
            r_max=cfg.spawn.r_max,
            v_min=cfg.spawn.v_min,
            v_max=cfg.spawn.v_max,
            bearing_half_extent=cfg.grid.field_of_regard / 2.0,
        )
        self.gospa_cfg = GospaConfig(cfg.gospa.cutoff, cfg.gospa.order, cfg.gospa.alpha)
        self._done = True
        self._t = 0

    # -- environment contract -------------------------------------------------

    def reset(self, seed: int | None = None) -> Observation:
        """Start a fresh episode; returns the initial (track-free) observation."""
        cfg = self.config
        self.seed = cfg.seed if seed is None else int(seed)
        streams = np.random.SeedSequence(self.seed).spawn(len(_STREAMS))
        self._rng = {
            name: np.random.default_rng(ss) for name, ss in zip(_STREAMS, streams)
        }
        self.targets = spawn_targets(cfg.n_targets, self._rng["spawn"], self.spawn_bounds)
        self.tracks = []
        self._next_track_id = 0
        self.field = ScanField(
            capacity=cfg.scan.capacity,
            sigma=beam_sigma(cfg.sensor.beam_width),
            rate=diffusion_rate(cfg.scan.peak_ratio, cfg.scan.horizon),
            norm_window=cfg.scan.norm_window,
            cutoff=cfg.scan.cutoff,
        )
        self._t = 0
        self._done = False
        self._prev_norms: dict[int, float] = {}
        self._prev_detected: set[int] = set()
        return build_observation(
            self.tracks, self.field, 0, self.tracker_cfg.c_threshold, self.obs_cfg
        )

    def step(self, action) -> tuple[Observation, RewardBreakdown, bool, dict]:
        """Advance one step; returns (observation, reward, done, info)."""
        obs, reward, done, info = self._advance(action, build_obs=True)
        return obs, reward, done, info

    # -- internals -------------------------------------------------------------

    def _advance(self, action, build_obs: bool) -> tuple[Observation | None, RewardBreakdown, bool, dict]:
        if self._done:
            raise RuntimeError("episode is finished; call reset() first")
        cfg = self.config
        t = self._t
        bearings = self.grid.bearings(action)

        r_sv = search_reward(self.field, bearings, t)
        self.field.push(bearings, t)

        self.targets = propagate(self.targets, cfg.dt)
        detections = sense(
            self.targets,
            bearings,
            self.sensor,
            t,
            self._rng["measurement"],
            self._rng["clutter"],
            (cfg.spawn.r_min, cfg.spawn.r_max),
        )
        self.tracks, track_info, self._next_track_id = mtt_step(
            self.tracks,
            detections,
            self.motion,
            self.sensor.R,
            self.tracker_cfg,
            t,
            self._next_track_id,
        )

        cur_norms = {trk.track_id: trk.cov_norm for trk in self.tracks}
        detected = set(track_info.updated_ids) | set(track_info.born_ids)
        r_tl = track_reward(
            self._prev_norms,
            cur_norms,
            detected | self._prev_detected,
            cfg.rewards.literal_track_sign,
        )
        self._prev_norms = cur_norms
        self._prev_detected = detected

        truth_positions = np.stack([tg.position for tg in self.targets]) if self.targets else np.zeros((0, 3))
        track_positions = (
            np.stack([trk.position for trk in self.tracks]) if self.tracks else np.zeros((0, 3))
        )
        gospa_result = gospa(truth_positions, track_positions, self.gospa_cfg)

        self._t += 1
        self._done = self._t >= cfg.n_steps
        reward = RewardBreakdown(r_sv, r_tl)
        info = {
            "t": t,
            "bearings": bearings,
            "detections": detections,
            "track_info": track_info,
            "truth_positions": truth_positions,
            "track_positions": track_positions,
            "gospa": gospa_result,
        }
        obs = (
            build_observation(self.tracks, self.field, t, self.tracker_cfg.c_threshold, self.obs_cfg)
            if build_obs
            else None
        )
        return obs, reward, self._done, info

    def _step_record(self, action, reward: RewardBreakdown, info: dict) -> dict:
        gospa_result = info["gospa"]
        truth_ids = [tg.target_id for tg in self.targets]
        track_ids = [trk.track_id for trk in self.tracks]
        return {
            "t": info["t"],
            "action": [int(action[0]), int(action[1])],
            "bearings": [info["bearings"][0], info["bearings"][1]],
            "r_sv": reward.search,
            "r_tl": reward.track,
            "detections": [
                [*d.meas.tolist(), d.truth_id] for d in info["detections"]
            ],
            "tracks": [
                [trk.track_id, *trk.mean.tolist(), trk.cov_norm, trk.last_detected]
                for trk in self.tracks
            ],
            "truths": [
                [tid, *pos.tolist()]
                for tid, pos in zip(truth_ids, info["truth_positions"])
            ],
            "gospa": {
                "distance": gospa_result.distance,
                "localisation": gospa_result.localisation,
                "missed": gospa_result.missed_cost,
                "false": gospa_result.false_cost,
                "n_missed": gospa_result.n_missed,
                "n_false": gospa_result.n_false,
                "assignment": [
                    [truth_ids[i], track_ids[j]] for i, j in gospa_result.assignment
                ],
            },
        }


def run_episode(
    config: EpisodeConfig,
    policy: Policy,
    seed: int | None = None,
    collect_trace: bool = True,
) -> EpisodeTrace:
    """Drive one full episode, returning its trace.

    Observations are only built when the policy consumes them; the step
    pipeline and trace contents are identical either way.
    """
    env = Environment(config)
    obs = env.reset(seed)
    policy.reset(env.grid, env._rng["policy"])
    header = {
        "version": __version__,
        "field_backend": FIELD_BACKEND,
        "config": config.to_dict(),
        "config_sha256": config.sha256(),
        "policy": policy.name,
        "seed": env.seed,
    }
    steps = []
    done = False
    while not done:
        action = policy.act(env._t, obs)
        obs, reward, done, info = env._advance(action, build_obs=policy.needs_observation)
        steps.append(env._step_record(action, reward, info))
    return EpisodeTrace(header, steps)


def write_trace(trace: EpisodeTrace, path: str | Path) -> None:
    """Write a trace as JSON lines: header first, then one record per step."""
    with open(path, "w") as f:
        f.write(json.dumps({"type": "header", **trace.header}) + "\n")
        for record in trace.steps:
            f.write(json.dumps({"type": "step", **record}) + "\n")


def read_trace(path: str | Path) -> EpisodeTrace:
    with open(path) as f:
        header = json.loads(f.readline())
        if header.pop("type", None) != "header":
            raise ValueError(f"{path}: first line is not a trace header")
        steps = []
        for line in f:
            record = json.loads(line)
            if record.pop("type", None) == "step":
                steps.append(record)
    return EpisodeTrace(header, steps)


def _run_one(args) -> tuple[int, dict, EpisodeTrace | None]:
    config_dict, policy_name, seed, keep_trace, actions = args
    config = EpisodeConfig.from_dict(config_dict)
    policy = make_policy(policy_name, actions)
    trace = run_episode(config, policy, seed=seed)
    summary = summarize_episode(trace)
    return seed, summary, (trace if keep_trace else None)


def run_batch(
    config: EpisodeConfig,
    policy_name: str,
    episodes: int,
    base_seed: int | None = None,
    out_dir: str | Path | None = None,
    workers: int = 1,
    actions=None,
) -> list[dict]:
    """Run ``episodes`` seeded episodes of one policy, merged in seed order.

    Episode ``i`` uses seed ``base_seed + i``.  With ``out_dir`` set, per-
    episode traces (JSON lines) and a ``summary.csv`` are written there.
    """
    base = config.seed if base_seed is None else int(base_seed)
    seeds = [base + i for i in range(episodes)]
    keep = out_dir is not None
    jobs = [(config.to_dict(), policy_name, s, keep, actions) for s in seeds]
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_run_one, jobs)
    else:
        results = [_run_one(job) for job in jobs]
    results.sort(key=lambda r: r[0])
    summaries = []
    for seed, summary, trace in results:
        summaries.append(summary)
        if keep and trace is not None:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            write_trace(trace, out / f"trace_{policy_name}_{seed}.jsonl")
    if keep:
        write_summary_csv(summaries, Path(out_dir) / f"summary_{policy_name}.csv")
    return summaries


def write_summary_csv(summaries: list[dict], path: str | Path) -> None:
    import csv

    if not summaries:
        return
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(summaries[0].keys()))
        writer.writeheader()
        writer.writerows(summaries)
