"""Contribution-cascade detection and branching-ratio estimation.

Commits are partitioned by gap-threshold declustering: a new cascade
starts whenever the gap to the previous commit (by any author) exceeds
tau. With one immigrant per cascade in the branching picture, the
triggered fraction estimates the branching ratio:
eta_hat = 1 - cascades / events. eta_hat close to 1 indicates a critical,
self-sustained regime.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import InsufficientDataError
from .windows import _nearest_rank

__all__ = [
    "Cascade",
    "CascadeStats",
    "default_tau",
    "detect_cascades",
    "branching_ratio",
]


@dataclass(frozen=True)
class Cascade:
    commit_ids: tuple
    start_ts: float
    end_ts: float

    @property
    def size(self):
        return len(self.commit_ids)

    @property
    def duration(self):
        return self.end_ts - self.start_ts


@dataclass(frozen=True)
class CascadeStats:
    tau: float
    cascade_count: int
    event_count: int
    eta_hat: float
    size_distribution: tuple  # sorted (size, count) pairs

    def to_json(self):
        return {
            "tau": self.tau,
            "cascades": self.cascade_count,
            "events": self.event_count,
            "eta_hat": self.eta_hat,
            "sizes": {str(size): count for size, count in self.size_distribution},
        }


def default_tau(history):
    """10th-percentile gap between consecutive commits (any author)."""
    ts = [c.timestamp for c in history.commits]
    gaps = sorted(b - a for a, b in zip(ts, ts[1:]))
    if not gaps:
        raise InsufficientDataError("need >= 2 commits to derive a gap threshold")
    tau = _nearest_rank(gaps, 0.1)
    if tau <= 0:
        raise InsufficientDataError("10th-percentile gap is zero; pass tau explicitly")
    return tau


def detect_cascades(history, tau):
    """Exhaustive, disjoint partition of commits into gap-bounded runs."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    if len(history) == 0:
        raise InsufficientDataError("history has no commits")
    cascades = []
    current = [history.commits[0]]
    for prev, cur in zip(history.commits, history.commits[1:]):
        if cur.timestamp - prev.timestamp > tau:
            cascades.append(current)
            current = [cur]
        else:
            current.append(cur)
    cascades.append(current)
    return [
        Cascade(
            commit_ids=tuple(c.commit_id for c in group),
            start_ts=group[0].timestamp,
            end_ts=group[-1].timestamp,
        )
        for group in cascades
    ]


def branching_ratio(history, tau=None):
    """CascadeStats with the immigrant-fraction branching-ratio estimate."""
    if tau is None:
        tau = default_tau(history)
    cascades = detect_cascades(history, tau)
    events = len(history)
    sizes = Counter(c.size for c in cascades)
    return CascadeStats(
        tau=float(tau),
        cascade_count=len(cascades),
        event_count=events,
        eta_hat=1.0 - len(cascades) / events,
        size_distribution=tuple(sorted(sizes.items())),
    )
