import random
from functools import lru_cache

import pytest

from scalemetrics.errors import MeasureUnavailableError
from scalemetrics.metrics import (
    ProductionMeasure,
    commit_production,
    levenshtein_distance,
    observations_to_csv,
    window_observations,
    window_observations_with_coverage,
)
from scalemetrics.windows import DAY, FixedWindow

from conftest import make_commit, make_history, random_history


def oracle_levenshtein(a, b):
    """Independent top-down memoized edit distance for small strings."""

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
            d(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return d(len(a), len(b))


def test_lev_insertions_only():
    assert levenshtein_distance("", "abc") == 3


def test_lev_identity():
    for s in ["", "a", "kitten", "héllo"]:
        assert levenshtein_distance(s, s) == 0


def test_lev_kitten_sitting():
    assert levenshtein_distance("kitten", "sitting") == 3
    assert oracle_levenshtein("kitten", "sitting") == 3


def test_lev_matches_oracle_random_pairs():
    rng = random.Random(7)
    alphabet = "abcd"
    for _ in range(300):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 12)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 12)))
        assert levenshtein_distance(a, b) == oracle_levenshtein(a, b)


def test_lev_symmetry_and_triangle():
    rng = random.Random(11)
    alphabet = "abc"
    for _ in range(500):
        a, b, c = (
            "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 10)))
            for _ in range(3)
        )
        dab = levenshtein_distance(a, b)
        assert dab == levenshtein_distance(b, a)
        assert dab <= levenshtein_distance(a, c) + levenshtein_distance(c, b)
        assert (dab == 0) == (a == b)


def test_lev_size_cap():
    with pytest.raises(MeasureUnavailableError):
        levenshtein_distance("x" * 100, "y", size_cap=10)


def test_commit_production_measures():
    c = make_commit("c1", "a@x", 1, added=5, deleted=2)
    assert commit_production(c, ProductionMeasure.COMMITS) == 1
    assert commit_production(c, ProductionMeasure.LOC_ADDED) == 5
    assert commit_production(c, ProductionMeasure.LOC_DELETED) == 2
    assert commit_production(c, ProductionMeasure.LOC_TOTAL) == 7


def test_commit_production_levenshtein():
    c = make_commit("c1", "a@x", 1, payload=(("abc", "abd"), ("", "xy")))
    assert commit_production(c, ProductionMeasure.LEVENSHTEIN) == 3


def test_levenshtein_requires_payload():
    c = make_commit("c1", "a@x", 1)
    with pytest.raises(MeasureUnavailableError):
        commit_production(c, ProductionMeasure.LEVENSHTEIN)


def test_single_commit_observation():
    h = make_history([("a@x", 0)])
    obs = window_observations(h, FixedWindow(5 * DAY), ProductionMeasure.COMMITS)
    assert len(obs) == 1
    assert (obs[0].n, obs[0].production) == (1, 1.0)


def test_window_counting():
    h = make_history([("a@x", 0), ("a@x", 100), ("b@x", 200)])
    obs = window_observations(h, FixedWindow(5 * DAY), ProductionMeasure.COMMITS)
    assert len(obs) == 1
    assert (obs[0].n, obs[0].production) == (2, 3.0)


def test_commits_production_at_least_n(rng):
    # each active author has >= 1 commit in the window by construction
    for _ in range(10):
        h = random_history(rng, n_commits=60, n_authors=8)
        obs = window_observations(
            h, FixedWindow(rng.uniform(2000, 20000)), ProductionMeasure.COMMITS
        )
        assert all(o.production >= o.n for o in obs)


def test_production_additive_over_windows(rng):
    for measure in (ProductionMeasure.COMMITS, ProductionMeasure.LOC_TOTAL):
        h = random_history(rng, n_commits=50, n_authors=5)
        total = sum(commit_production(c, measure) for c in h.commits)
        obs = window_observations(h, FixedWindow(5000.0), measure)
        assert sum(o.production for o in obs) == pytest.approx(total)


def test_unavailable_commits_counted_not_fatal():
    commits = [
        make_commit("c0", "a@x", 0, payload=(("ab", "ac"),)),
        make_commit("c1", "a@x", 10),  # no payload
    ]
    from scalemetrics.ingest import ProjectHistory

    h = ProjectHistory.build("t", commits)
    obs, unavailable = window_observations_with_coverage(
        h, FixedWindow(5 * DAY), ProductionMeasure.LEVENSHTEIN
    )
    assert unavailable == 1
    assert obs[0].production == 1.0


def test_observations_csv_shape():
    h = make_history([("a@x", 0), ("b@x", 100)])
    obs = window_observations(h, FixedWindow(5 * DAY), ProductionMeasure.COMMITS)
    csv = observations_to_csv(obs, ProductionMeasure.COMMITS)
    lines = csv.strip().splitlines()
    assert lines[0] == "start_ts,end_ts,n,measure,production"
    assert lines[1].endswith("commits,2")
