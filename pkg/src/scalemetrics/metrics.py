"""Production measures per commit and per window.

Supported measures: commit counts, added/deleted/total lines of code, and
the Levenshtein edit distance of diff payloads. Edit distance is computed
byte-level on UTF-8 with a configurable per-side size cap; commits whose
payload is missing or over the cap are excluded from that measure's totals
and counted in a coverage statistic rather than silently truncated.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import MeasureUnavailableError
from .windows import active_team_series

DEFAULT_SIZE_CAP = 1 << 20  # 1 MiB per side

__all__ = [
    "ProductionMeasure",
    "WindowObservation",
    "levenshtein_distance",
    "commit_production",
    "window_observations",
    "window_observations_with_coverage",
    "observations_to_csv",
]


class ProductionMeasure(enum.Enum):
    COMMITS = "commits"
    LOC_ADDED = "loc-added"
    LOC_DELETED = "loc-deleted"
    LOC_TOTAL = "loc"
    LEVENSHTEIN = "lev"

    @classmethod
    def from_string(cls, s):
        for m in cls:
            if m.value == s:
                return m
        raise ValueError(f"unknown production measure {s!r}")


@dataclass(frozen=True)
class WindowObservation:
    """One (team size n, production P) sample from a non-empty window."""

    start_ts: float
    end_ts: float
    n: int
    production: float


def levenshtein_distance(a, b, size_cap=DEFAULT_SIZE_CAP):
    """Unit-cost insert/delete/substitute edit distance, byte-level on UTF-8.

    Two-row dynamic program, O(min(|a|,|b|)) memory. Inputs larger than
    ``size_cap`` bytes per side raise MeasureUnavailableError.
    """
    xs = a.encode("utf-8") if isinstance(a, str) else bytes(a)
    ys = b.encode("utf-8") if isinstance(b, str) else bytes(b)
    if len(xs) > size_cap or len(ys) > size_cap:
        raise MeasureUnavailableError(
            f"input exceeds size cap ({max(len(xs), len(ys))} > {size_cap} bytes)"
        )
    if len(xs) < len(ys):
        xs, ys = ys, xs
    if not ys:
        return len(xs)
    prev = list(range(len(ys) + 1))
    for i, cx in enumerate(xs, start=1):
        cur = [i] + [0] * len(ys)
        for j, cy in enumerate(ys, start=1):
            cur[j] = min(
                prev[j] + 1,  # delete
                cur[j - 1] + 1,  # insert
                prev[j - 1] + (cx != cy),  # substitute
            )
        prev = cur
    return prev[-1]


def commit_production(commit, measure, size_cap=DEFAULT_SIZE_CAP):
    """Production contributed by one commit under the given measure."""
    if measure is ProductionMeasure.COMMITS:
        return 1.0
    if measure is ProductionMeasure.LOC_ADDED:
        return float(commit.lines_added)
    if measure is ProductionMeasure.LOC_DELETED:
        return float(commit.lines_deleted)
    if measure is ProductionMeasure.LOC_TOTAL:
        return float(commit.lines_added + commit.lines_deleted)
    if measure is ProductionMeasure.LEVENSHTEIN:
        if commit.diff_payload is None:
            raise MeasureUnavailableError(
                f"commit {commit.commit_id} has no diff payload"
            )
        return float(
            sum(levenshtein_distance(o, n, size_cap) for o, n in commit.diff_payload)
        )
    raise ValueError(f"unknown measure {measure!r}")


def window_observations_with_coverage(history, definition, measure,
                                      size_cap=DEFAULT_SIZE_CAP):
    """(observations, unavailable_commit_count) for non-empty windows."""
    series = active_team_series(history, definition)
    t0 = history.commits[0].timestamp
    length = series[0].end_ts - series[0].start_ts
    count = len(series)
    production = [0.0] * count
    unavailable = 0
    for c in history.commits:
        idx = min(int((c.timestamp - t0) // length), count - 1)
        try:
            production[idx] += commit_production(c, measure, size_cap)
        except MeasureUnavailableError:
            unavailable += 1
    obs = [
        WindowObservation(w.start_ts, w.end_ts, w.n, production[i])
        for i, w in enumerate(series)
        if w.n > 0
    ]
    return obs, unavailable


def window_observations(history, definition, measure, size_cap=DEFAULT_SIZE_CAP):
    """One WindowObservation per non-empty window; production summed over
    the window's commits under ``measure``."""
    obs, _ = window_observations_with_coverage(history, definition, measure, size_cap)
    return obs


def observations_to_csv(observations, measure):
    lines = ["start_ts,end_ts,n,measure,production"]
    for o in observations:
        lines.append(
            f"{o.start_ts:g},{o.end_ts:g},{o.n},{measure.value},{o.production:g}"
        )
    return "\n".join(lines) + "\n"
