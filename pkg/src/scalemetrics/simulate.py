"""Synthetic generators and analytic oracles.

* the ranked-contribution (Zipf) team whose total S(n) = N * sum j^-alpha
  grows sublinearly in n with exponent 1 - alpha;
* heavy-tailed (Pareto) sampling and the sum-scaling experiment showing
  totals of n draws scale as n^(1/mu) for mu < 1 and as n for mu >= 1;
* a branching (cascade) commit-stream generator with Poisson immigrants
  and Poisson(eta) offspring, used end-to-end as an oracle for the
  cascade detector;
* deterministic commit-history builders (Zipf growth, heavy-tail
  participation) that emit the same history objects the ingest module
  produces, closing the loop for end-to-end tests.

All generators take an integer seed; trials and windows draw from RNG
streams derived from (seed, task index) so results do not depend on
execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from .ingest import AuthorId, CommitRecord, ProjectHistory
from .windows import DAY

DEFAULT_EVENT_CAP = 10**6

__all__ = [
    "ZipfTeamModel",
    "BranchingModel",
    "BranchingStreamResult",
    "zipf_total",
    "max_team_size",
    "zipf_asymptotic_check",
    "sample_pareto",
    "simulate_sum_scaling",
    "simulate_branching_stream",
    "simulate_zipf_growth",
    "simulate_heavy_tail_participation",
]


@dataclass(frozen=True)
class ZipfTeamModel:
    """Ranked-contribution team: member at rank j contributes N / j^alpha."""

    N: float
    alpha: float
    n: int

    def __post_init__(self):
        if self.N <= 0:
            raise ValueError("N must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.n < 1:
            raise ValueError("team size must be >= 1")
        if self.n > self.N ** (1.0 / self.alpha) + 1e-9:
            raise ValueError(
                f"n={self.n} violates n <= N^(1/alpha) = "
                f"{self.N ** (1.0 / self.alpha):.6g}: the last member must "
                "contribute at least one commit"
            )

    def contributions(self):
        """Per-rank contributions N / j^alpha, j = 1..n (real-valued)."""
        ranks = np.arange(1, self.n + 1, dtype=float)
        return self.N * ranks ** (-self.alpha)

    def total(self):
        return float(np.sum(self.contributions()))


def zipf_total(N, alpha, n):
    """Exact partial sum S(n) = N * sum_{j=1..n} j^-alpha."""
    return ZipfTeamModel(N=N, alpha=alpha, n=n).total()


def max_team_size(N, alpha):
    """Largest n with N / n^alpha >= 1, i.e. floor(N^(1/alpha))."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    return int(np.floor(N ** (1.0 / alpha) + 1e-9))


def zipf_asymptotic_check(N, alpha, n_values):
    """Ratios S(n) / (N * n^(1-alpha) / (1-alpha)); approach 1 as n grows."""
    n_values = list(n_values)
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly increasing")
    n_max = max(n_values)
    partial = np.cumsum(np.arange(1, n_max + 1, dtype=float) ** (-alpha))
    return [
        float(N * partial[n - 1] / (N * n ** (1.0 - alpha) / (1.0 - alpha)))
        for n in n_values
    ]


def sample_pareto(mu, xmin, count, seed):
    """Inverse-CDF Pareto sampling: X = xmin * U^(-1/mu), P(X>x) = (x/xmin)^-mu."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    if xmin <= 0:
        raise ValueError("xmin must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(count)  # uniform on (0, 1]: keeps samples finite
    return xmin * u ** (-1.0 / mu)


def simulate_sum_scaling(mu, n_values, trials=100, seed=42):
    """OLS slope of log median-total vs log n.

    For each n, the median over ``trials`` of the sum of n Pareto(mu)
    draws. The median (not the mean) is used because for mu < 1 the mean
    is dominated by extremes and does not converge; the median of the sum
    still scales as n^(1/mu).
    """
    n_values = list(n_values)
    medians = []
    for i, n in enumerate(n_values):
        rng = np.random.default_rng([seed, i])
        u = 1.0 - rng.random((trials, n))
        sums = np.sum(u ** (-1.0 / mu), axis=1)
        medians.append(float(np.median(sums)))
    res = linregress(np.log(n_values), np.log(medians))
    return float(res.slope)


@dataclass(frozen=True)
class BranchingModel:
    """Poisson-immigrant branching stream with exponential offspring delays."""

    eta: float  # branching ratio: mean offspring per event
    immigrant_rate: float  # exogenous events per second
    offspring_delay_scale: float  # mean trigger delay, seconds
    horizon: float  # simulated duration, seconds
    seed: int = 42
    event_cap: int = DEFAULT_EVENT_CAP

    def __post_init__(self):
        if not 0 <= self.eta <= 1:
            raise ValueError("eta must be in [0, 1]")
        if self.immigrant_rate <= 0 or self.offspring_delay_scale <= 0:
            raise ValueError("rates and delay scales must be positive")
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")


@dataclass(frozen=True)
class BranchingStreamResult:
    history: ProjectHistory
    immigrants: int
    events: int
    truncated: bool


def simulate_branching_stream(model, participants, participation_mu,
                              project_name="branching-sim"):
    """Simulate the cascade stream and emit it as a commit history.

    Immigrants arrive as a Poisson process on [0, horizon]; each event
    spawns Poisson(eta) offspring at exponential delays (offspring beyond
    the horizon are dropped). Events are attributed to ``participants``
    authors with Pareto(participation_mu)-weighted probabilities. At
    eta = 1 cluster sizes have infinite mean, so generation stops at
    ``model.event_cap`` with ``truncated`` set.
    """
    if participants < 1:
        raise ValueError("participants must be >= 1")
    rng = np.random.default_rng(model.seed)
    n_imm = rng.poisson(model.immigrant_rate * model.horizon)
    times = list(np.sort(rng.random(n_imm) * model.horizon))
    truncated = False
    i = 0
    while i < len(times):
        if len(times) >= model.event_cap:
            truncated = True
            break
        k = rng.poisson(model.eta)
        if k:
            children = times[i] + rng.exponential(model.offspring_delay_scale, size=k)
            times.extend(t for t in children if t <= model.horizon)
        i += 1
    times = sorted(times[: model.event_cap])

    weights = (1.0 - rng.random(participants)) ** (-1.0 / participation_mu)
    probs = weights / weights.sum()
    authors = rng.choice(participants, size=len(times), p=probs)
    commits = [
        CommitRecord(
            commit_id=f"sim-{i:07d}",
            author=AuthorId(f"dev{a}@sim"),
            timestamp=float(t),
            lines_added=1,
            lines_deleted=0,
            raw_email=f"dev{a}@sim",
            raw_name=f"dev {a}",
        )
        for i, (t, a) in enumerate(zip(times, authors))
    ]
    history = ProjectHistory.build(project_name, commits)
    return BranchingStreamResult(
        history=history,
        immigrants=int(n_imm),
        events=len(times),
        truncated=truncated,
    )


def _window_commits(window_idx, window_length, count, rng, first_window):
    """Timestamps inside window ``window_idx``, confined to its first 99%
    so downstream tumbling windows (anchored at the first commit) line up
    with the generator's. The very first window is pinned to start at 0."""
    base = window_idx * window_length
    ts = np.sort(base + rng.random(count) * window_length * 0.99)
    if first_window and len(ts):
        ts[0] = base
    return ts


def simulate_zipf_growth(N, alpha, max_n=None, window_length=5 * DAY, seed=42,
                         project_name="zipf-growth-sim"):
    """History whose w-th window holds a Zipf team of size w.

    In window w (w = 1..max_n) members 1..w are active and member j makes
    round(N / j^alpha) commits, so per-window production tracks S(w) and
    the production-scaling fit recovers the sublinear exponent 1 - alpha.
    """
    if max_n is None:
        max_n = max_team_size(N, alpha)
    ZipfTeamModel(N=N, alpha=alpha, n=max_n)  # validate parameters
    commits = []
    cid = 0
    for w in range(1, max_n + 1):
        rng = np.random.default_rng([seed, w])
        per_member = np.maximum(
            1, np.round(N * np.arange(1, w + 1, dtype=float) ** (-alpha))
        ).astype(int)
        authors = np.repeat(np.arange(1, w + 1), per_member)
        ts = _window_commits(w - 1, window_length, len(authors), rng, w == 1)
        rng.shuffle(authors)
        for t, j in zip(ts, authors):
            commits.append(
                CommitRecord(
                    commit_id=f"zipf-{cid:07d}",
                    author=AuthorId(f"dev{j}@sim"),
                    timestamp=float(t),
                    lines_added=1,
                    lines_deleted=0,
                    raw_email=f"dev{j}@sim",
                    raw_name=f"dev {j}",
                )
            )
            cid += 1
    return ProjectHistory.build(project_name, commits)


def simulate_heavy_tail_participation(mu, n_windows=60, min_events=5,
                                      max_events=2000, pool=100_000,
                                      window_length=5 * DAY, seed=42,
                                      project_name="heavy-tail-sim"):
    """History with Zipf-weighted author participation of tail exponent mu.

    Per-window event counts are log-spaced between ``min_events`` and
    ``max_events``; every event is attributed to one of ``pool`` authors
    with rank weights j^(-1/mu). The number of distinct authors among m
    draws then grows as m^mu, so total per-window production scales as
    n^(1/mu) in team size n: superlinear for mu < 1.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    counts = np.unique(
        np.round(np.logspace(np.log10(min_events), np.log10(max_events),
                             n_windows)).astype(int)
    )
    order = np.random.default_rng([seed, 0]).permutation(len(counts))
    ranks = np.arange(1, pool + 1, dtype=float)
    probs = ranks ** (-1.0 / mu)
    probs /= probs.sum()
    commits = []
    cid = 0
    for w, count in enumerate(counts[order]):
        rng = np.random.default_rng([seed, w + 1])
        ts = _window_commits(w, window_length, int(count), rng, w == 0)
        authors = rng.choice(pool, size=int(count), p=probs)
        for t, a in zip(ts, authors):
            commits.append(
                CommitRecord(
                    commit_id=f"ht-{cid:07d}",
                    author=AuthorId(f"dev{a}@sim"),
                    timestamp=float(t),
                    lines_added=1,
                    lines_deleted=0,
                    raw_email=f"dev{a}@sim",
                    raw_name=f"dev {a}",
                )
            )
            cid += 1
    return ProjectHistory.build(project_name, commits)
