"""Commit-history ingestion.

Two input formats are supported:

* the pinned pipe-delimited log format (one header line per commit followed
  by numstat rows, terminated by a blank line)::

      C|<commit_id>|<author_email>|<author_name>|<unix_ts>|<parent_count>
      <added>\t<deleted>\t<path>
      ...
      <blank>

* JSON Lines, one object per commit:
  ``{id, email, name, ts, added, deleted, files:[{old,new}]?}``.
  This is the only format that can carry diff payloads for the
  edit-distance production measure, and it is also the canonical
  serialization emitted by :func:`write_jsonl`.

Merge commits (parent_count >= 2) carry no numstat deltas and are excluded
by default; pass ``include_merges=True`` to keep them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .errors import ConfigError, ParseError

__all__ = [
    "AuthorId",
    "CommitRecord",
    "ProjectHistory",
    "parse_commit_log",
    "parse_jsonl",
    "write_jsonl",
    "resolve_authors",
]


@dataclass(frozen=True, order=True)
class AuthorId:
    """Canonical author identity: lowercased, trimmed email (name fallback)."""

    canonical_key: str

    def __post_init__(self):
        if not self.canonical_key:
            raise ValueError("author identity must be non-empty")

    @classmethod
    def from_raw(cls, email, name):
        key = (email or "").strip().lower() or (name or "").strip().lower()
        return cls(key)


@dataclass(frozen=True)
class CommitRecord:
    commit_id: str
    author: AuthorId
    timestamp: float  # seconds since epoch, UTC
    lines_added: int
    lines_deleted: int
    raw_email: str = ""
    raw_name: str = ""
    parent_count: int = 1
    diff_payload: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self):
        if not self.commit_id:
            raise ValueError("commit_id must be non-empty")
        if not math.isfinite(self.timestamp) or self.timestamp < 0:
            raise ValueError(f"bad timestamp {self.timestamp!r}")
        if self.lines_added < 0 or self.lines_deleted < 0:
            raise ValueError("line deltas must be non-negative")

    @property
    def is_merge(self):
        return self.parent_count >= 2


@dataclass(frozen=True)
class ProjectHistory:
    project_name: str
    commits: tuple[CommitRecord, ...] = ()

    @classmethod
    def build(cls, project_name, commits):
        """Sort commits by timestamp and check commit-id uniqueness."""
        commits = tuple(sorted(commits, key=lambda c: (c.timestamp, c.commit_id)))
        seen = set()
        for c in commits:
            if c.commit_id in seen:
                raise ParseError(f"duplicate commit id {c.commit_id!r}")
            seen.add(c.commit_id)
        return cls(project_name, commits)

    def __len__(self):
        return len(self.commits)

    @property
    def authors(self):
        return frozenset(c.author for c in self.commits)

    def commits_per_author(self):
        counts = {}
        for c in self.commits:
            counts[c.author] = counts.get(c.author, 0) + 1
        return counts


def _parse_numstat_field(raw, line_no):
    if raw == "-":  # binary file
        return 0
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"bad numstat count {raw!r}", line=line_no) from None
    if value < 0:
        raise ParseError(f"negative numstat count {raw!r}", line=line_no)
    return value


def parse_commit_log(text, project_name="project", include_merges=False):
    """Parse the pinned pipe-delimited commit-log format."""
    commits = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        if not line.strip():
            i += 1
            continue
        header_no = i + 1
        parts = line.split("|")
        if len(parts) != 6 or parts[0] != "C":
            raise ParseError(f"malformed header {line!r}", line=header_no)
        _, commit_id, email, name, ts_raw, parents_raw = parts
        if not commit_id:
            raise ParseError("empty commit id", line=header_no)
        try:
            ts = float(ts_raw)
            parents = int(parents_raw)
        except ValueError:
            raise ParseError(f"malformed header {line!r}", line=header_no) from None
        added = deleted = 0
        i += 1
        while i < len(lines) and lines[i].strip():
            cols = lines[i].split("\t")
            if len(cols) < 3:
                raise ParseError(f"malformed numstat row {lines[i]!r}", line=i + 1)
            added += _parse_numstat_field(cols[0], i + 1)
            deleted += _parse_numstat_field(cols[1], i + 1)
            i += 1
        if parents >= 2 and not include_merges:
            continue
        try:
            commits.append(
                CommitRecord(
                    commit_id=commit_id,
                    author=AuthorId.from_raw(email, name),
                    timestamp=ts,
                    lines_added=added,
                    lines_deleted=deleted,
                    raw_email=email,
                    raw_name=name,
                    parent_count=parents,
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), line=header_no) from None
    return ProjectHistory.build(project_name, commits)


def parse_jsonl(text, project_name="project", include_merges=False):
    """Parse the JSONL commit format."""
    commits = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc.msg}", line=line_no) from None
        if not isinstance(obj, dict) or "id" not in obj or "ts" not in obj:
            raise ParseError("record must be an object with 'id' and 'ts'", line=line_no)
        files = obj.get("files")
        payload = None
        if files is not None:
            payload = tuple((f.get("old", ""), f.get("new", "")) for f in files)
        parents = int(obj.get("parents", 1))
        if parents >= 2 and not include_merges:
            continue
        email = obj.get("email", "") or ""
        name = obj.get("name", "") or ""
        try:
            commits.append(
                CommitRecord(
                    commit_id=str(obj["id"]),
                    author=AuthorId.from_raw(email, name),
                    timestamp=float(obj["ts"]),
                    lines_added=int(obj.get("added", 0)),
                    lines_deleted=int(obj.get("deleted", 0)),
                    raw_email=email,
                    raw_name=name,
                    parent_count=parents,
                    diff_payload=payload,
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), line=line_no) from None
    return ProjectHistory.build(project_name, commits)


def write_jsonl(history):
    """Serialize to the canonical JSONL form (the inverse of parse_jsonl)."""
    out = []
    for c in history.commits:
        obj = {
            "id": c.commit_id,
            "email": c.raw_email or c.author.canonical_key,
            "name": c.raw_name,
            "ts": c.timestamp,
            "added": c.lines_added,
            "deleted": c.lines_deleted,
        }
        if c.parent_count != 1:
            obj["parents"] = c.parent_count
        if c.diff_payload is not None:
            obj["files"] = [{"old": o, "new": n} for o, n in c.diff_payload]
        out.append(json.dumps(obj, sort_keys=False))
    return "\n".join(out) + ("\n" if out else "")


def _normalize_alias_map(alias_map):
    """Lowercase/trim keys and values; reject cycles."""
    normalized = {}
    for raw_key, raw_val in alias_map.items():
        key = str(raw_key).strip().lower()
        val = str(raw_val).strip().lower()
        if not key or not val:
            raise ConfigError(f"empty alias entry {raw_key!r} -> {raw_val!r}")
        normalized[key] = val
    for start in normalized:
        seen = {start}
        cur = start
        while cur in normalized:
            cur = normalized[cur]
            if cur in seen:
                raise ConfigError(f"cyclic alias map entry involving {start!r}")
            seen.add(cur)
    return normalized


def resolve_authors(history, alias_map=None, drop_authors=()):
    """Canonicalize all author identities.

    ``alias_map`` maps a raw identity (email or name, matched after
    trim/lowercase) to its canonical replacement; chains are followed.
    ``drop_authors`` is a deny-list of canonical keys (e.g. bots) whose
    commits are removed.
    """
    aliases = _normalize_alias_map(alias_map or {})
    drop = {str(a).strip().lower() for a in drop_authors}
    commits = []
    for c in history.commits:
        key = (c.raw_email or "").strip().lower() or (c.raw_name or "").strip().lower()
        key = key or c.author.canonical_key
        while key in aliases:
            key = aliases[key]
        if key in drop:
            continue
        commits.append(replace(c, author=AuthorId(key)))
    return ProjectHistory.build(history.project_name, commits)
