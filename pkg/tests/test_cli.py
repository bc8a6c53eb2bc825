import json

import jsonschema
import pytest

from scalemetrics.cli import main, parse_duration
from scalemetrics.errors import ConfigError

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "project", "measure", "arm_a", "arm_b", "tails", "regimes",
        "single_commit_share", "min_commit_inequality_holds", "cascades",
        "config",
    ],
    "properties": {
        "project": {"type": "string"},
        "measure": {"type": "string"},
        "arm_a": {
            "type": "object",
            "required": ["description", "window_length_seconds", "fit", "error"],
            "properties": {
                "fit": {
                    "type": ["object", "null"],
                    "required": ["beta", "intercept", "ci", "r_squared",
                                 "n_points", "binned", "superlinear"],
                },
            },
        },
        "arm_b": {
            "type": "object",
            "required": ["description", "per_member_slope", "error"],
        },
        "tails": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["method", "mu", "xmin", "k", "ci"],
            },
        },
        "single_commit_share": {"type": "number", "minimum": 0, "maximum": 1},
        "cascades": {"type": "object"},
    },
}

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["projects", "regime_counts", "project_count"],
    "properties": {
        "projects": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["project", "beta", "superlinear", "regimes",
                             "single_commit_share"],
            },
        },
        "regime_counts": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
        "project_count": {"type": "integer", "minimum": 0},
    },
}


def test_parse_duration():
    assert parse_duration("5d") == 5 * 86400
    assert parse_duration("12h") == 12 * 3600
    assert parse_duration("90") == 90
    with pytest.raises(ConfigError):
        parse_duration("5x")
    with pytest.raises(ConfigError):
        parse_duration("-3d")


def test_ingest_empty_file(tmp_path, capsys):
    src = tmp_path / "empty.log"
    src.write_text("")
    assert main(["ingest", str(src), "-o", str(tmp_path / "out.jsonl")]) == 0
    assert "0 commits" in capsys.readouterr().err


def test_ingest_malformed_header_exit_2(tmp_path, capsys):
    src = tmp_path / "bad.log"
    src.write_text("garbage line\n")
    assert main(["ingest", str(src), "--input-format", "log"]) == 2
    assert "line 1" in capsys.readouterr().err


def test_usage_error_exit_1():
    assert main(["analyze"]) == 1
    assert main(["no-such-command"]) == 1


def test_simulate_zipf_sidecar(tmp_path):
    out = tmp_path / "zipf.jsonl"
    assert main(["simulate", "zipf", "--N", "10", "--alpha", "0.5",
                 "--team-size", "25", "-o", str(out)]) == 0
    meta = json.loads(out.with_suffix(".jsonl.meta.json").read_text())
    assert meta["S"] == pytest.approx(86.3931, abs=1e-3)
    assert meta["alpha"] == 0.5
    assert meta["expected_beta"] == 0.5


def test_simulate_rejects_invalid_team(tmp_path, capsys):
    out = tmp_path / "bad.jsonl"
    code = main(["simulate", "zipf", "--N", "10", "--alpha", "0.5",
                 "--team-size", "101", "-o", str(out)])
    assert code == 2
    assert "N^(1/alpha)" in capsys.readouterr().err


def test_simulate_branching_truncation_flag(tmp_path):
    out = tmp_path / "crit.jsonl"
    assert main(["simulate", "branching", "--eta", "1.0",
                 "--immigrant-rate", "0.01", "--horizon", "100000s",
                 "-o", str(out)]) == 0
    meta = json.loads(out.with_suffix(".jsonl.meta.json").read_text())
    assert "truncated" in meta


def test_seed_repetition_identical_files(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for out in (a, b):
        main(["simulate", "branching", "--eta", "0.4", "--seed", "7",
              "-o", str(out)])
    assert a.read_bytes() == b.read_bytes()


def test_roundtrip_simulator_output_through_ingest(tmp_path):
    out = tmp_path / "sim.jsonl"
    main(["simulate", "zipf", "--team-size", "20", "-o", str(out)])
    re_out = tmp_path / "reingested.jsonl"
    assert main(["ingest", str(out), "-o", str(re_out)]) == 0
    assert re_out.read_text() == out.read_text()


@pytest.fixture(scope="module")
def zipf_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    for i, team in enumerate([40, 60, 80]):
        main(["simulate", "zipf", "--team-size", str(team), "--seed", str(i),
              "-o", str(root / f"proj{i}.jsonl")])
    return root


def test_analyze_zipf_input(zipf_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["analyze", str(zipf_corpus / "proj2.jsonl"), "-o", str(out),
                 "--format", "json"])
    assert code == 0
    bundle = json.loads((out / "report.json").read_text())
    jsonschema.validate(bundle, REPORT_SCHEMA)
    beta = bundle["arm_a"]["fit"]["beta"]
    assert 0.4 <= beta <= 0.75  # sublinear, near 1 - alpha = 0.5
    assert (out / "observations.csv").exists()
    assert (out / "binned.csv").exists()


def test_analyze_single_author_warns_exit_0(tmp_path, capsys):
    src = tmp_path / "solo.jsonl"
    lines = [
        json.dumps({"id": f"c{i}", "email": "solo@x", "name": "S",
                    "ts": i * 1000.0, "added": 1, "deleted": 0})
        for i in range(20)
    ]
    src.write_text("\n".join(lines) + "\n")
    out = tmp_path / "out"
    assert main(["analyze", str(src), "-o", str(out)]) == 0
    captured = capsys.readouterr()
    assert "warning" in captured.err
    bundle = json.loads((out / "report.json").read_text())
    jsonschema.validate(bundle, REPORT_SCHEMA)
    assert bundle["arm_a"]["fit"] is None


def test_analyze_deterministic_bytes(zipf_corpus, tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    for out in (out1, out2):
        assert main(["analyze", str(zipf_corpus / "proj0.jsonl"),
                     "-o", str(out), "--seed", "42"]) == 0
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()


def test_compare_corpus_summary(zipf_corpus, tmp_path, capsys):
    out = tmp_path / "cmp"
    assert main(["compare", str(zipf_corpus), "-o", str(out),
                 "--jobs", "2"]) == 0
    summary = json.loads((out / "summary.json").read_text())
    jsonschema.validate(summary, SUMMARY_SCHEMA)
    assert summary["project_count"] == 3
    assert sum(summary["regime_counts"].values()) >= 3
    for i in range(3):
        report = json.loads((out / f"proj{i}.report.json").read_text())
        jsonschema.validate(report, REPORT_SCHEMA)


def test_compare_empty_dir_exit_2(tmp_path):
    assert main(["compare", str(tmp_path), "-o", str(tmp_path / "x")]) == 2


def test_report_renders_saved_json(zipf_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    main(["analyze", str(zipf_corpus / "proj1.jsonl"), "-o", str(out)])
    capsys.readouterr()
    assert main(["report", str(out / "report.json")]) == 0
    text = capsys.readouterr().out
    assert "arm A" in text and "cascades" in text


def test_env_seed_used(tmp_path, monkeypatch):
    monkeypatch.setenv("SCALEMETRICS_SEED", "123")
    a = tmp_path / "a.jsonl"
    main(["simulate", "branching", "-o", str(a)])
    meta = json.loads(a.with_suffix(".jsonl.meta.json").read_text())
    assert meta["seed"] == 123
