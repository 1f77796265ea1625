"""Per-step reward: a search term penalizing recently scanned directions and
a tracking term rewarding covariance reduction on detected tracks."""

from __future__ import annotations

from dataclasses import dataclass

from .scanfield import ScanField


@dataclass(frozen=True)
class RewardBreakdown:
    search: float
    track: float

    @property
    def total(self) -> float:
        return self.search + self.track


def search_reward(field: ScanField, bearings, step: int) -> float:
    """Negated normalized field value at the commanded bearing.

    Must be evaluated before the step's own scan is pushed, otherwise every
    dwell penalizes itself with its fresh peak.
    """
    return -field.normalized(bearings, step)


def track_reward(
    prev_norms: dict[int, float],
    cur_norms: dict[int, float],
    detected_ids: set[int],
    literal_sign: bool = False,
) -> float:
    """Summed covariance-norm reduction over tracks detected this step or
    the previous one.

    Tracks without a norm on both sides (born or deleted in between)
    contribute zero.  ``literal_sign`` flips to current-minus-previous,
    which penalizes improvement; the default rewards it.
    """
    total = 0.0
    for track_id in detected_ids:
        if track_id in prev_norms and track_id in cur_norms:
            total += prev_norms[track_id] - cur_norms[track_id]
    return -total if literal_sign else total


def total_reward(search: float, track: float) -> RewardBreakdown:
    return RewardBreakdown(search, track)
