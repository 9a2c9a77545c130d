import json
import shutil

import pytest

from schemas.control_schema import Property, Verdict, VerdictStatus
from tools import criteria
from tools.cli import EXIT_CONFIG, EXIT_PARSE, EXIT_SOUNDNESS, main
from tools.lie_core import GroupKind
from tools.settings import REPO_ROOT

SYSTEMS = REPO_ROOT / "data" / "systems"


def system_file(k: int) -> str:
    return str(SYSTEMS / f"ex{k}.sys")


# ---------------- analyze ----------------
@pytest.mark.parametrize(
    "argv, code",
    [
        (["analyze", system_file(1)], 0),
        (["analyze", system_file(2)], 2),
        (["analyze", system_file(2), "--oracle"], 0),
        (["analyze", system_file(8)], 2),
        (["analyze", system_file(8), "--oracle"], 1),
        (["analyze", system_file(6), "--oracle"], 0),
        (["analyze", system_file(7)], 2),
    ],
)
def test_analyze_exit_codes(argv, code, capsys):
    assert main(argv) == code
    out = capsys.readouterr().out
    assert " via " in out


def test_analyze_uncontrollable_system(tmp_path):
    path = tmp_path / "empty.sys"
    path.write_text("group so 4\n", encoding="utf-8")
    assert main(["analyze", str(path)]) == 1
    assert main(["analyze", str(path), "--oracle"]) == 1


def test_parse_error_names_file_and_line(tmp_path, capsys):
    path = tmp_path / "bad.sys"
    path.write_text("group so 3\ncontrol B 2 1\n", encoding="utf-8")
    assert main(["analyze", str(path)]) == EXIT_PARSE
    assert f"{path}:2:" in capsys.readouterr().err


def test_bad_encoding_is_a_parse_error(tmp_path, capsys):
    path = tmp_path / "latin1.sys"
    path.write_bytes(b"group so 3\ncontrol B 1 2 # \xff\xfe\n")
    assert main(["analyze", str(path)]) == EXIT_PARSE
    err = capsys.readouterr().err
    assert f"{path}:2:" in err and "UTF-8" in err


def test_missing_file(tmp_path, capsys):
    path = tmp_path / "nope.sys"
    assert main(["analyze", str(path)]) == EXIT_PARSE
    assert str(path) in capsys.readouterr().err


def test_json_output_is_stable(capsys):
    main(["analyze", system_file(3), "--json", "--oracle"])
    first = capsys.readouterr().out
    main(["analyze", system_file(3), "--json", "--oracle"])
    assert capsys.readouterr().out == first

    report = json.loads(first)
    assert report["verdict"]["status"] == "GuaranteedYes"
    assert report["verdict"]["criterion"] == "sl-union-strong-connectivity"
    assert report["oracle"] == {"dimension": 24, "full_dimension": 24, "holds": True}
    assert report["system"]["algebra"] == "sl(5)"
    assert report["timing"] is None and report["timestamp"] is None


def test_timing_is_reported_on_request(capsys):
    main(["analyze", system_file(1), "--json", "--timing"])
    timing = json.loads(capsys.readouterr().out)["timing"]
    assert set(timing) == {"parse_s", "criteria_s", "oracle_s"}


def test_dot_files(tmp_path):
    dot_dir = tmp_path / "dot"
    assert main(["analyze", system_file(1), "--dot-dir", str(dot_dir)]) == 0
    assert sorted(p.name for p in dot_dir.iterdir()) == ["contr.dot", "drift.dot", "union.dot"]
    contr = (dot_dir / "contr.dot").read_text(encoding="utf-8")
    assert contr.startswith("graph contr {") and "  1 -- 3;" in contr


def test_directed_dot_files(tmp_path):
    dot_dir = tmp_path / "dot"
    main(["analyze", system_file(6), "--dot-dir", str(dot_dir)])
    contr = (dot_dir / "contr.dot").read_text(encoding="utf-8")
    assert contr.startswith("digraph contr {")
    assert "  1 -> 1;" in contr and "  2 -> 1;" in contr


def test_save_log_writes_reports(tmp_path, monkeypatch, capsys):
    log_dir = tmp_path / "reports"
    monkeypatch.setenv("GRAPHLARC_LOG_DIR", str(log_dir))
    assert main(["analyze", system_file(5), "--json", "--save-log"]) == 0
    captured = capsys.readouterr()
    # the report stays valid JSON on stdout; the paths go to stderr
    json.loads(captured.out)
    assert "Report saved" in captured.err

    saved = sorted(p.suffix for p in log_dir.glob("analysis_*"))
    assert saved == [".json", ".txt"]
    stamped = json.loads(next(log_dir.glob("analysis_*.json")).read_text(encoding="utf-8"))
    assert stamped["timestamp"] is not None


def test_soundness_failure_exit_code(monkeypatch, capsys):
    def always_yes(sys):
        return Verdict(status=VerdictStatus.YES, property=Property.CONTROLLABLE, reasons=[], criterion="broken")

    monkeypatch.setitem(criteria.DRIFT_CHECKERS, GroupKind.SO, always_yes)
    assert main(["analyze", system_file(8), "--oracle"]) == EXIT_SOUNDNESS
    assert "soundness" in capsys.readouterr().err


def test_bad_setting_exit_code(monkeypatch, capsys):
    monkeypatch.setenv("GRAPHLARC_WORKERS", "zero")
    assert main(["randcheck", "--group", "so"]) == EXIT_CONFIG
    assert "GRAPHLARC_" in capsys.readouterr().err


# ---------------- randcheck ----------------
def test_randcheck_single_trial(capsys):
    assert main(["randcheck", "--group", "gl", "--n", "3", "--trials", "1"]) == 0
    assert "no violations" in capsys.readouterr().out


def test_randcheck_json(capsys):
    assert main(["randcheck", "--group", "sl", "--n", "3", "--trials", "5", "--seed", "4", "--json"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["trials"] == 5 and summary["violation"] == 0
    assert summary["max_controls"] == 5


def test_randcheck_rejects_bad_arguments():
    with pytest.raises(SystemExit):
        main(["randcheck", "--group", "so", "--n", "1"])
    with pytest.raises(SystemExit):
        main(["randcheck", "--group", "su"])


# ---------------- examples ----------------
def test_examples_pass(capsys):
    assert main(["examples"]) == 0
    assert "8 passed, 0 failed" in capsys.readouterr().out


def test_examples_json(capsys):
    assert main(["examples", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] == 8 and report["failed"] == 0


def test_examples_report_a_broken_system(tmp_path, capsys):
    systems = tmp_path / "systems"
    shutil.copytree(SYSTEMS, systems)
    # an extra arc turns ex4 into a different system
    with open(systems / "ex4.sys", "a", encoding="utf-8") as f:
        f.write("control E 2 3\n")
    assert main(["examples", "--systems-dir", str(systems)]) == 1
    out = capsys.readouterr().out
    assert "7 passed, 1 failed" in out
    assert "failing: ex4" in out


def test_examples_report_an_unreadable_system(tmp_path, capsys):
    systems = tmp_path / "systems"
    shutil.copytree(SYSTEMS, systems)
    (systems / "ex6.sys").write_bytes(b"group gl 4\n\xc3\x28\n")
    assert main(["examples", "--systems-dir", str(systems), "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] == 7 and report["failed"] == 1
    (broken,) = [r for r in report["results"] if not r["passed"]]
    assert broken["name"] == "ex6" and ":2: not valid UTF-8" in broken["error"]


def test_examples_missing_golden(tmp_path, capsys):
    assert main(["examples", "--golden", str(tmp_path / "none.json")]) == 1
    assert "golden file not found" in capsys.readouterr().err
