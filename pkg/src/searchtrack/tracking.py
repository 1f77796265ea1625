"""Multi-target tracker: unscented Kalman filtering on a constant-velocity
model, Mahalanobis-gated minimum-cost association, immediate track birth from
unassigned detections and covariance-norm deletion.

State vector per track is [x, vx, y, vy, z, vz].  The prediction step is
exactly linear so it uses the closed form; measurement updates propagate
sigma points through the spherical measurement function.  All per-track
linear algebra is batched across the track list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .geometry import spherical_to_cart, wrap_angle
from .simulation import Detection

_POS = np.array([0, 2, 4])
_VEL = np.array([1, 3, 5])
_BIG_COST = 1e15
_JITTER = 1e-9


@dataclass
class Track:
    """Kinematic estimate of one hypothesized target.

    Tracks are replaced, not mutated, on every filter step, so the
    covariance norm is memoized.
    """

    track_id: int
    mean: np.ndarray  # (6,)
    cov: np.ndarray  # (6, 6)
    last_detected: int | None = None
    _norm: float | None = field(default=None, repr=False, compare=False)

    @property
    def position(self) -> np.ndarray:
        return self.mean[_POS]

    @property
    def velocity(self) -> np.ndarray:
        return self.mean[_VEL]

    @property
    def cov_norm(self) -> float:
        if self._norm is None:
            self._norm = float(np.linalg.norm(self.cov))
        return self._norm


@dataclass
class MotionModel:
    """Discrete constant-velocity model with white-noise acceleration.

    ``q`` is the process-noise intensity in m^2/s^3; the per-axis transition
    and noise blocks are
    ``[[1, dt], [0, 1]]`` and ``q * [[dt^3/3, dt^2/2], [dt^2/2, dt]]``.
    """

    dt: float
    q: float
    F: np.ndarray = field(init=False)
    Q: np.ndarray = field(init=False)

    def __post_init__(self):
        dt = self.dt
        f1 = np.array([[1.0, dt], [0.0, 1.0]])
        q1 = self.q * np.array([[dt**3 / 3.0, dt**2 / 2.0], [dt**2 / 2.0, dt]])
        eye3 = np.eye(3)
        self.F = np.kron(eye3, f1)
        self.Q = np.kron(eye3, q1)


@dataclass
class TrackerConfig:
    """Tracker tuning parameters.

    ``c_threshold`` bounds the covariance Frobenius norm before deletion and
    doubles as the covariance normalizer in observations.  ``gate`` is a
    Mahalanobis distance bound (sqrt of a chi-square quantile, 3 dof).
    """

    c_threshold: float = 8.0e6
    gate: float = 6.0
    alpha: float = 0.5
    beta: float = 2.0
    kappa: float = 0.0
    # Matches the speed prior of the default spawn bounds: E[v_axis^2]
    # for isotropic directions and speed ~ U(10, 100) is E[speed^2] / 3.
    init_vel_var: float = 3700.0 / 3.0


@dataclass
class TrackerStepInfo:
    """Bookkeeping from one tracker step, for rewards and traces."""

    updated_ids: list[int]
    born_ids: list[int]
    deleted_ids: list[int]
    pairs: list[tuple[int, int]]  # (track_id, detection index)


def _sigma_weights(n: int, cfg: TrackerConfig) -> tuple[float, np.ndarray, np.ndarray]:
    lam = cfg.alpha**2 * (n + cfg.kappa) - n
    wm = np.full(2 * n + 1, 1.0 / (2.0 * (n + lam)))
    wc = wm.copy()
    wm[0] = lam / (n + lam)
    wc[0] = lam / (n + lam) + (1.0 - cfg.alpha**2 + cfg.beta)
    return n + lam, wm, wc


def _cholesky_batch(covs: np.ndarray) -> np.ndarray:
    """Batched lower Cholesky with one symmetrize-and-jitter retry."""
    try:
        return np.linalg.cholesky(covs)
    except np.linalg.LinAlgError:
        fixed = 0.5 * (covs + np.swapaxes(covs, -1, -2))
        fixed = fixed + _JITTER * np.eye(covs.shape[-1])
        return np.linalg.cholesky(fixed)


def _sigma_points_batch(means: np.ndarray, covs: np.ndarray, scale: float) -> np.ndarray:
    """Scaled sigma points, shape (n_tracks, 2d+1, d)."""
    d = means.shape[-1]
    roots = np.sqrt(scale) * _cholesky_batch(covs)
    pts = np.repeat(means[:, None, :], 2 * d + 1, axis=1)
    offsets = np.swapaxes(roots, -1, -2)  # row i is column i of the root
    pts[:, 1 : d + 1, :] += offsets
    pts[:, d + 1 :, :] -= offsets
    return pts


def spherical_measurement(states: np.ndarray) -> np.ndarray:
    """Map stacked state vectors (..., 6) to measurements [psi, theta, r]."""
    pos = states[..., _POS]
    r = np.linalg.norm(pos, axis=-1)
    psi = np.arctan2(pos[..., 1], pos[..., 0])
    theta = np.arcsin(np.clip(pos[..., 2] / r, -1.0, 1.0))
    return np.stack([psi, theta, r], axis=-1)


def _measurement_stats(
    means: np.ndarray,
    covs: np.ndarray,
    R: np.ndarray,
    cfg: TrackerConfig,
    meas_fn=None,
    wrap: bool = True,
):
    """Unscented-transform measurement prediction for every track.

    Returns predicted measurements (n, m), innovation covariances (n, m, m)
    and state-measurement cross covariances (n, 6, m).
    """
    fn = meas_fn if meas_fn is not None else spherical_measurement
    scale, wm, wc = _sigma_weights(means.shape[-1], cfg)
    pts = _sigma_points_batch(means, covs, scale)
    z_pts = fn(pts)
    z_pred = np.einsum("i,nij->nj", wm, z_pts)
    dz = z_pts - z_pred[:, None, :]
    if wrap:
        dz[..., 0] = wrap_angle(dz[..., 0])
    dx = pts - means[:, None, :]
    S = np.einsum("i,nij,nik->njk", wc, dz, dz) + R
    C = np.einsum("i,nij,nik->njk", wc, dx, dz)
    return z_pred, S, C


def ukf_predict(track: Track, model: MotionModel) -> Track:
    """Propagate one track through the motion model (exactly linear)."""
    mean = model.F @ track.mean
    cov = model.F @ track.cov @ model.F.T + model.Q
    cov = 0.5 * (cov + cov.T)
    return Track(track.track_id, mean, cov, track.last_detected)


def _apply_update(mean, cov, z, z_pred, S, C, wrap):
    nu = z - z_pred
    if wrap:
        nu[0] = wrap_angle(nu[0])
    K = np.linalg.solve(S, C.T).T
    new_mean = mean + K @ nu
    new_cov = cov - K @ S @ K.T
    new_cov = 0.5 * (new_cov + new_cov.T)
    return new_mean, new_cov, nu


def ukf_update(
    track: Track,
    detection: Detection | np.ndarray,
    R: np.ndarray,
    cfg: TrackerConfig,
    meas_fn=None,
    wrap: bool = True,
) -> tuple[Track, np.ndarray, np.ndarray]:
    """Measurement update of one track.

    Returns the updated track, the (azimuth-wrapped) innovation and the
    innovation covariance.
    """
    z = detection.meas if isinstance(detection, Detection) else np.asarray(detection, float)
    t = detection.t if isinstance(detection, Detection) else track.last_detected
    z_pred, S, C = _measurement_stats(
        track.mean[None, :], track.cov[None, :, :], R, cfg, meas_fn, wrap
    )
    mean, cov, nu = _apply_update(track.mean, track.cov, z, z_pred[0], S[0], C[0], wrap)
    return Track(track.track_id, mean, cov, t), nu, S[0]


def mahalanobis(
    track: Track,
    detection: Detection | np.ndarray,
    R: np.ndarray,
    cfg: TrackerConfig,
    meas_fn=None,
    wrap: bool = True,
) -> float:
    """Innovation magnitude normalized by the innovation covariance."""
    z = detection.meas if isinstance(detection, Detection) else np.asarray(detection, float)
    z_pred, S, _ = _measurement_stats(
        track.mean[None, :], track.cov[None, :, :], R, cfg, meas_fn, wrap
    )
    nu = z - z_pred[0]
    if wrap:
        nu[0] = wrap_angle(nu[0])
    return float(np.sqrt(nu @ np.linalg.solve(S[0], nu)))


def assign(
    cost: np.ndarray, gate: float = np.inf
) -> tuple[list[tuple[int, int]], list[int], list[int]]:
    """Minimum-total-cost one-to-one assignment over entries within the gate.

    Returns (row, col) pairs plus the unassigned row and column indices;
    the three outputs partition both index sets.
    """
    n, m = cost.shape
    if n == 0 or m == 0:
        return [], list(range(n)), list(range(m))
    feasible = cost <= gate
    masked = np.where(feasible, cost, _BIG_COST)
    rows, cols = linear_sum_assignment(masked)
    pairs = [(int(i), int(j)) for i, j in zip(rows, cols) if feasible[i, j]]
    used_r = {i for i, _ in pairs}
    used_c = {j for _, j in pairs}
    return (
        pairs,
        [i for i in range(n) if i not in used_r],
        [j for j in range(m) if j not in used_c],
    )


def initiate_track(
    detection: Detection, R: np.ndarray, cfg: TrackerConfig, track_id: int
) -> Track:
    """Start a track from one detection.

    Position is the converted measurement; its covariance comes from an
    unscented transform of the measurement noise through the spherical-to-
    Cartesian map.  Velocity starts at zero with ``init_vel_var`` per axis.
    """
    z = detection.meas
    scale, wm, wc = _sigma_weights(3, cfg)
    root = np.sqrt(scale) * np.linalg.cholesky(R)
    pts = np.vstack([z, z + root.T, z - root.T])
    cart = np.stack([spherical_to_cart(p) for p in pts])
    center = wm @ cart
    dc = cart - center
    pos_cov = np.einsum("i,ij,ik->jk", wc, dc, dc)
    mean = np.zeros(6)
    mean[_POS] = spherical_to_cart(z)
    cov = np.zeros((6, 6))
    cov[np.ix_(_POS, _POS)] = pos_cov
    cov[_VEL, _VEL] = cfg.init_vel_var
    return Track(track_id, mean, cov, detection.t)


def manage_tracks(
    tracks: list[Track],
    unassigned: list[Detection],
    R: np.ndarray,
    cfg: TrackerConfig,
    next_id: int,
) -> tuple[list[Track], list[int], list[int], int]:
    """Birth a track per unassigned detection, then drop tracks whose
    covariance norm exceeds the threshold.  Track ids are never reused."""
    born: list[int] = []
    for det in unassigned:
        tracks = tracks + [initiate_track(det, R, cfg, next_id)]
        born.append(next_id)
        next_id += 1
    kept, deleted = [], []
    for trk in tracks:
        if trk.cov_norm > cfg.c_threshold:
            deleted.append(trk.track_id)
        else:
            kept.append(trk)
    return kept, born, deleted, next_id


def mtt_step(
    tracks: list[Track],
    detections: list[Detection],
    model: MotionModel,
    R: np.ndarray,
    cfg: TrackerConfig,
    t: int,
    next_id: int = 0,
) -> tuple[list[Track], TrackerStepInfo, int]:
    """One tracker cycle: predict, gate, assign, update, manage.

    Deterministic given its inputs; detections keep their list order for
    association and birth.
    """
    if tracks:
        means = np.stack([trk.mean for trk in tracks])
        covs = np.stack([trk.cov for trk in tracks])
        means = means @ model.F.T
        covs = model.F @ covs @ model.F.T + model.Q
        covs = 0.5 * (covs + np.swapaxes(covs, -1, -2))
    else:
        means = np.zeros((0, 6))
        covs = np.zeros((0, 6, 6))

    pairs: list[tuple[int, int]] = []
    unassigned_dets = list(detections)
    updated: list[int] = []

    if tracks and detections:
        z_pred, S, C = _measurement_stats(means, covs, R, cfg)
        z_all = np.stack([d.meas for d in detections])
        nu = z_all[None, :, :] - z_pred[:, None, :]
        nu[..., 0] = wrap_angle(nu[..., 0])
        S_inv = np.linalg.inv(S)
        d2 = np.einsum("nmi,nij,nmj->nm", nu, S_inv, nu)
        cost = np.sqrt(np.maximum(d2, 0.0))
        matched, _, un_cols = assign(cost, cfg.gate)
        unassigned_dets = [detections[j] for j in un_cols]
        for i, j in matched:
            new_mean, new_cov, _ = _apply_update(
                means[i], covs[i], detections[j].meas, z_pred[i], S[i], C[i], wrap=True
            )
            means[i] = new_mean
            covs[i] = new_cov
            pairs.append((tracks[i].track_id, j))
            updated.append(tracks[i].track_id)

    updated_set = set(updated)
    norms = np.linalg.norm(covs, axis=(1, 2)) if len(tracks) else np.zeros(0)
    predicted = [
        Track(
            trk.track_id,
            means[i].copy(),
            covs[i].copy(),
            t if trk.track_id in updated_set else trk.last_detected,
            float(norms[i]),
        )
        for i, trk in enumerate(tracks)
    ]
    kept, born, deleted, next_id = manage_tracks(predicted, unassigned_dets, R, cfg, next_id)
    info = TrackerStepInfo(updated, born, deleted, pairs)
    return kept, info, next_id
