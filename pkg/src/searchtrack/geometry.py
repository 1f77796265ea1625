"""Coordinate conversions between observer-centered Cartesian and spherical frames.

Conventions: observer at the origin with fixed attitude, x forward, y right,
z up.  Azimuth ``psi`` is measured from +x toward +y, elevation ``theta``
from the xy-plane toward +z.  All angles in radians, distances in meters.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(angle):
    """Wrap an angle (scalar or array) to (-pi, pi]."""
    wrapped = -((-np.asarray(angle) + np.pi) % TWO_PI - np.pi)
    return wrapped if isinstance(angle, np.ndarray) else float(wrapped)


def cart_to_spherical(p) -> np.ndarray:
    """Convert Cartesian position [x, y, z] to [psi, theta, r].

    Raises:
        ValueError: if the position is at the origin (bearing undefined).
    """
    p = np.asarray(p, dtype=float)
    r = float(np.linalg.norm(p))
    if r == 0.0:
        raise ValueError("bearing undefined for zero-range position")
    psi = np.arctan2(p[1], p[0])
    theta = np.arcsin(p[2] / r)
    return np.array([psi, theta, r])


def spherical_to_cart(s) -> np.ndarray:
    """Convert [psi, theta, r] to Cartesian [x, y, z]."""
    psi, theta, r = np.asarray(s, dtype=float)
    cos_t = np.cos(theta)
    return np.array([r * cos_t * np.cos(psi), r * cos_t * np.sin(psi), r * np.sin(theta)])


def cart_to_spherical_many(p: np.ndarray) -> np.ndarray:
    """Vectorized ``cart_to_spherical`` for an (n, 3) position array."""
    p = np.asarray(p, dtype=float)
    r = np.linalg.norm(p, axis=-1)
    psi = np.arctan2(p[..., 1], p[..., 0])
    theta = np.arcsin(np.clip(p[..., 2] / r, -1.0, 1.0))
    return np.stack([psi, theta, r], axis=-1)


def direction_vector(psi, theta) -> np.ndarray:
    """Unit direction vector(s) for bearing (psi, theta)."""
    cos_t = np.cos(theta)
    return np.stack(
        [cos_t * np.cos(psi), cos_t * np.sin(psi), np.sin(theta) * np.ones_like(cos_t)],
        axis=-1,
    )


def angular_offset(boresight, target_dir) -> float:
    """Great-circle angle in [0, pi] between two (psi, theta) directions."""
    u = direction_vector(*boresight)
    v = direction_vector(*target_dir)
    cross = np.linalg.norm(np.cross(u, v))
    return float(np.arctan2(cross, np.dot(u, v)))


def angular_offsets(boresight, bearings: np.ndarray) -> np.ndarray:
    """Great-circle angles between one boresight and an (n, 2) bearing array."""
    u = direction_vector(*boresight)
    v = direction_vector(bearings[:, 0], bearings[:, 1])
    cross = np.linalg.norm(np.cross(u[None, :], v), axis=-1)
    return np.arctan2(cross, v @ u)
