"""Active-team time series under the two competing team definitions.

A team is the set of developers with at least one commit inside a tumbling
(non-overlapping, contiguous) time window. Two window-length conventions are
supported: a fixed short window (default 5 days) and a data-driven one, the
q-th quantile (default 0.9) of the pooled per-author inter-commit gaps.
Windows are anchored at the first commit timestamp; empty windows are kept
in the series (downstream fits drop them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDataError, InsufficientDataError

DAY = 86400.0

__all__ = [
    "FixedWindow",
    "QuantileWindow",
    "ActivityWindow",
    "inter_commit_quantile",
    "resolve_window_length",
    "active_team_series",
    "single_commit_share",
    "windows_to_csv",
]


@dataclass(frozen=True)
class FixedWindow:
    """Tumbling window of a fixed length in seconds (default 5 days)."""

    length: float = 5 * DAY

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("window length must be positive")


@dataclass(frozen=True)
class QuantileWindow:
    """Window whose length is the q-th quantile of pooled per-author
    inter-commit gaps (default q = 0.9)."""

    q: float = 0.9

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValueError("quantile must be in (0, 1)")


@dataclass(frozen=True)
class ActivityWindow:
    start_ts: float
    end_ts: float
    active_authors: frozenset
    commit_count: int

    @property
    def n(self):
        return len(self.active_authors)


def _nearest_rank(sorted_values, q):
    rank = max(1, math.ceil(q * len(sorted_values)))
    return sorted_values[rank - 1]


def inter_commit_quantile(history, q):
    """q-th nearest-rank quantile of consecutive same-author commit gaps,
    pooled across all authors."""
    if not 0 < q < 1:
        raise ValueError("quantile must be in (0, 1)")
    per_author = {}
    for c in history.commits:
        per_author.setdefault(c.author, []).append(c.timestamp)
    gaps = []
    for times in per_author.values():
        times.sort()
        gaps.extend(b - a for a, b in zip(times, times[1:]))
    if not gaps:
        raise InsufficientDataError("no author has two or more commits")
    gaps.sort()
    return _nearest_rank(gaps, q)


def resolve_window_length(history, definition):
    if isinstance(definition, FixedWindow):
        return definition.length
    if isinstance(definition, QuantileWindow):
        length = inter_commit_quantile(history, definition.q)
        if length <= 0:
            raise DegenerateDataError(
                "quantile window length is zero (all pooled gaps are zero)"
            )
        return length
    raise TypeError(f"unknown team definition {definition!r}")


def active_team_series(history, definition):
    """Tumbling windows covering [first_ts, last_ts], anchored at first_ts."""
    if len(history) == 0:
        raise InsufficientDataError("history has no commits")
    length = resolve_window_length(history, definition)
    t0 = history.commits[0].timestamp
    t_last = history.commits[-1].timestamp
    count = int((t_last - t0) // length) + 1
    authors = [set() for _ in range(count)]
    commit_counts = [0] * count
    for c in history.commits:
        idx = min(int((c.timestamp - t0) // length), count - 1)
        authors[idx].add(c.author)
        commit_counts[idx] += 1
    return [
        ActivityWindow(
            start_ts=t0 + i * length,
            end_ts=t0 + (i + 1) * length,
            active_authors=frozenset(authors[i]),
            commit_count=commit_counts[i],
        )
        for i in range(count)
    ]


def single_commit_share(history):
    """Fraction of all commits authored by developers with exactly one commit."""
    if len(history) == 0:
        raise InsufficientDataError("history has no commits")
    counts = history.commits_per_author()
    singles = sum(1 for v in counts.values() if v == 1)
    return singles / len(history)


def windows_to_csv(series):
    lines = ["start_ts,end_ts,n,commits"]
    for w in series:
        lines.append(f"{w.start_ts:g},{w.end_ts:g},{w.n},{w.commit_count}")
    return "\n".join(lines) + "\n"
