import json

import pytest

from conftest import DUMPS, FIXTURES, golden_vectors
from screentest.cli import main
from screentest.features import FEATURE_NAMES


def test_extract_login(capsys):
    assert main(["extract", str(DUMPS / "login.xml")]) == 0
    header, values = capsys.readouterr().out.splitlines()
    assert header.split(",") == list(FEATURE_NAMES)
    assert [int(v) for v in values.split(",")] == golden_vectors()["login.xml"]


def test_extract_native_json(capsys):
    assert main(["extract", "--native", "--json", str(DUMPS / "login.json")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert list(doc.values()) == golden_vectors()["login.json"]


def test_extract_parse_error(capsys):
    assert main(["extract", str(FIXTURES / "bad" / "bad_bounds.xml")]) == 2
    assert "bounds" in capsys.readouterr().err


def test_extract_missing_file():
    assert main(["extract", "/nonexistent/dump.xml"]) == 2


def test_unknown_flag(capsys):
    assert main(["eval", "--no-such-flag"]) == 2
    assert "usage" in capsys.readouterr().err


def test_no_command():
    assert main([]) == 2


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_folds_one():
    assert main(["eval", "--folds", "1"]) == 2


def test_blend_out_of_range():
    assert main(["train", "--blend", "150", "--out", "x.json"]) == 2


def test_dataset_build_matches_bundled(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["dataset", "build", "--out", str(out)]) == 0
    assert out.read_bytes() == (FIXTURES / "activities_golden.csv").read_bytes()


def test_train_then_run_with_model(tmp_path, capsys):
    model = tmp_path / "m.json"
    assert main(["train", "--out", str(model)]) == 0
    assert main(["run", "kitchensink", "--model", str(model)]) == 0
    assert "0 logical bugs, 0 crashes" in capsys.readouterr().out


def test_eval_prints_rows(capsys):
    assert main(["eval", "--folds", "5"]) == 0
    out = capsys.readouterr().out
    for row in ("K* (blend 20)", "1-NN", "3-NN", "majority"):
        assert row in out


def test_rank(capsys):
    assert main(["rank"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 16


def test_run_ls1_exits_one(capsys):
    assert main(["run", "k9replica", "--fault", "LS-1"]) == 1
    out = capsys.readouterr().out
    assert out.count("Bug #") == 1 and "login-empty-bypass" in out


def test_exit_zero_flag():
    assert main(["run", "k9replica", "--fault", "LS-1", "--exit-zero"]) == 0


def test_unknown_fault():
    assert main(["run", "k9replica", "--fault", "PT-1"]) == 2


def test_clean_run_exits_zero():
    assert main(["run", "crimetalk_replica"]) == 0


def test_structured_out_and_report(tmp_path, capsys):
    out = tmp_path / "run.json"
    assert main(["run", "crimetalk_replica", "--all-faults", "--out", str(out)]) == 1
    capsys.readouterr()
    assert main(["report", str(out)]) == 0
    text = capsys.readouterr().out
    assert "Summary: 3 logical bugs, 0 crashes" in text
    assert main(["report", str(out), "--format", "structured"]) == 0
    assert capsys.readouterr().out == out.read_text()


def test_report_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["report", str(bad)]) == 2


def test_monkey(capsys):
    assert main(["monkey", "k9replica", "--events", "20000", "--seed", "0", "--format", "structured"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["summary"]["logical_bugs"] == 0 and doc["summary"]["crashes"] >= 1


def test_config_file_budget(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"schema_version": 1, "time_budget_ms": 3000}))
    assert main(["run", "k9replica", "--config", str(cfg), "--format", "structured"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["reports"][0]["budget_exhausted"] is True


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert main(["run", "k9replica", "--config", str(cfg)]) == 2
