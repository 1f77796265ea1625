"""Ground-truth target motion and the beam-limited radar sensor.

Targets fly straight at constant velocity for the whole episode.  The sensor
reports one noisy spherical measurement per target whose direction lies
within half the beam width of the commanded boresight; detection inside the
beam is certain by default and no clutter is generated unless configured.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import cart_to_spherical_many, direction_vector


@dataclass
class TargetState:
    """Constant-velocity point target."""

    target_id: int
    position: np.ndarray  # (3,) m
    velocity: np.ndarray  # (3,) m/s


@dataclass
class Detection:
    """One sensor return: spherical measurement [psi, theta, r] at step ``t``.

    ``truth_id`` identifies the generating target (-1 for clutter) and is
    carried for evaluation only; it is never exposed to policies.
    """

    meas: np.ndarray
    t: int
    truth_id: int


@dataclass
class SensorModel:
    """Beam geometry and measurement noise.

    ``noise_std`` holds the per-axis standard deviations (azimuth rad,
    elevation rad, range m); the covariance is diagonal.
    """

    beam_width: float = np.deg2rad(9.0)
    noise_std: np.ndarray = field(
        default_factory=lambda: np.array([1e-3, 1e-3, 5.0])
    )
    p_detect: float = 1.0
    clutter_rate: float = 0.0

    @property
    def R(self) -> np.ndarray:
        return np.diag(self.noise_std**2)


@dataclass
class SpawnBounds:
    """Uniform spawn region: bearings over the field of regard, range and
    speed over the given intervals."""

    r_min: float = 20_000.0
    r_max: float = 90_000.0
    v_min: float = 10.0
    v_max: float = 100.0
    bearing_half_extent: float = np.pi / 3

    def validate(self) -> None:
        if not 0 < self.r_min <= self.r_max:
            raise ValueError("spawn range bounds must satisfy 0 < r_min <= r_max")
        if not 0 <= self.v_min <= self.v_max:
            raise ValueError("spawn speed bounds must satisfy 0 <= v_min <= v_max")
        if not 0 < self.bearing_half_extent <= np.pi / 2:
            raise ValueError("bearing half extent must be in (0, pi/2]")


def spawn_targets(n: int, rng: np.random.Generator, bounds: SpawnBounds) -> list[TargetState]:
    """Draw ``n`` targets with bearings inside the field of regard.

    Positions are uniform in (azimuth, elevation, range); velocities have
    isotropic random direction and uniform speed.
    """
    bounds.validate()
    if n < 0:
        raise ValueError("target count must be nonnegative")
    targets = []
    for i in range(n):
        psi, theta = rng.uniform(-bounds.bearing_half_extent, bounds.bearing_half_extent, 2)
        r = rng.uniform(bounds.r_min, bounds.r_max)
        pos = r * direction_vector(psi, theta)
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        speed = rng.uniform(bounds.v_min, bounds.v_max)
        targets.append(TargetState(i, pos, speed * direction))
    return targets


def propagate(targets: list[TargetState], dt: float) -> list[TargetState]:
    """Advance all targets by ``dt`` seconds (velocities unchanged)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return [
        TargetState(t.target_id, t.position + t.velocity * dt, t.velocity) for t in targets
    ]


def sense(
    targets: list[TargetState],
    boresight,
    sensor: SensorModel,
    t: int,
    rng: np.random.Generator,
    clutter_rng: np.random.Generator | None = None,
    clutter_range: tuple[float, float] = (20_000.0, 90_000.0),
) -> list[Detection]:
    """Measure every target within half the beam width of ``boresight``.

    Measurements are the true spherical coordinates plus independent
    Gaussian noise per axis.  When ``p_detect < 1`` each in-beam target is
    kept with that probability; clutter detections (``truth_id = -1``) are
    appended at a Poisson rate uniformly over the beam disk.
    """
    detections: list[Detection] = []
    if targets:
        positions = np.stack([tg.position for tg in targets])
        spherical = cart_to_spherical_many(positions)
        # Containment test via dot product: offset <= w/2 iff cos(offset)
        # >= cos(w/2) for unit direction vectors.
        axis = direction_vector(*boresight)
        dirs = positions / spherical[:, 2:3]
        in_beam = np.flatnonzero(dirs @ axis >= np.cos(sensor.beam_width / 2.0))
        if sensor.p_detect < 1.0 and len(in_beam):
            keep = rng.random(len(in_beam)) < sensor.p_detect
            in_beam = in_beam[keep]
        if len(in_beam):
            noise = rng.normal(size=(len(in_beam), 3)) * sensor.noise_std
            for row, idx in enumerate(in_beam):
                meas = spherical[idx] + noise[row]
                meas[1] = float(np.clip(meas[1], -np.pi / 2, np.pi / 2))
                detections.append(Detection(meas, t, targets[idx].target_id))
    if sensor.clutter_rate > 0.0:
        crng = clutter_rng if clutter_rng is not None else rng
        for _ in range(crng.poisson(sensor.clutter_rate)):
            # Uniform over the beam disk in angle space.
            radius = sensor.beam_width / 2.0 * np.sqrt(crng.random())
            angle = crng.uniform(0.0, 2.0 * np.pi)
            meas = np.array(
                [
                    boresight[0] + radius * np.cos(angle),
                    boresight[1] + radius * np.sin(angle),
                    crng.uniform(*clutter_range),
                ]
            )
            detections.append(Detection(meas, t, -1))
    return detections
