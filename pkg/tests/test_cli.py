import io
import json
import subprocess
import sys

import pytest

from acctmodel import scenario_path
from acctmodel.cli import main

from rule_fixtures import VALID


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def path(name):
    return scenario_path(f"{name}.acct")


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    return code, json.loads(text) if text else None


@pytest.fixture
def write_tmp(tmp_path):
    def write(text, name="s.acct"):
        p = tmp_path / name
        p.write_text(text)
        return p

    return write


def test_validate_lenient_passes(capsys):
    for name in ("uber-sts", "uber-hall", "uber-lindberg", "uber-raci", "lidar-structural"):
        code, _ = run("validate", path(name))
        assert code == (1 if name == "lidar-structural" else 0), name


def test_validate_without_ego_reports_sts0():
    code, data = run_json("validate", path("lidar-structural"))
    assert code == 1
    assert [v["rule"] for v in data["violations"]] == ["AM-4", "STS-0"]


def test_validate_strict_lists_cps1():
    code, text = run("validate", path("uber-hall"), "--strict")
    assert code == 1
    assert "ERROR CPS-1 [EGO," in text


def test_validate_json_shape():
    code, data = run_json("validate", path("uber-hall"))
    assert code == 0
    assert data["mode"] == "lenient" and data["scenario"] == "exampleAMhall"
    assert data["violations"] == [{
        "rule": "AM-4",
        "severity": "warning",
        "subjects": ["BLACKBOX", "DRIVER_TESTEMONY", "VIDEO_FEED"],
        "message": "hasAccount covers every mechanism account (predicate demands a strict subset)",
    }]


def test_missing_file_is_input_error(tmp_path, capsys):
    code, _ = run("validate", tmp_path / "nonexistent.acct")
    assert code == 2
    assert "cannot read" in capsys.readouterr().err


def test_syntax_error_is_input_error(write_tmp, capsys):
    code, _ = run("validate", write_tmp("principal UBER kind=robot\n"))
    assert code == 2
    assert "1:21: expected person|legal_entity, found robot" in capsys.readouterr().err


def test_resolve_error_is_input_error(write_tmp, capsys):
    code, _ = run("report", write_tmp("cps S {\n}\n"))
    assert code == 2
    assert "MissingEgo" in capsys.readouterr().err


@pytest.mark.parametrize(
    "name, argv, expected",
    [
        ("uber-hall", ["--notion", "hall"], ["AI", "CHASSIS"]),
        ("uber-lindberg", ["--notion", "lindberg", "--component", "AI"], ["UBER"]),
        ("uber-lindberg", ["--notion", "lindberg", "--component", "CHASSIS"], ["DRIVER"]),
        ("uber-raci", ["--notion", "raci", "--event", "HIT_PEDESTRIAN"], ["UBER"]),
        ("lidar-structural", ["--notion", "raci", "--event", "HIT_PEDESTRIAN"], []),
    ],
)
def test_query(name, argv, expected):
    code, data = run_json("query", path(name), *argv)
    assert code == 0
    assert data["result"] == expected
    assert data["notion"] == argv[1]
    assert data["subject"] == (argv[3] if len(argv) > 2 else None)


def test_query_text():
    assert run("query", path("uber-hall"), "--notion", "hall") == (0, "hall() = [AI, CHASSIS]\n")


def test_query_raci_without_causes():
    code, text = run("query", path("uber-hall"), "--notion", "raci", "--event", "HIT_PEDESTRIAN")
    assert code == 3 and text == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["--notion", "hall", "--event", "HIT_PEDESTRIAN"],
        ["--notion", "lindberg"],
        ["--notion", "raci", "--component", "AI"],
        ["--notion", "raci"],
        ["--notion", "bogus"],
        ["--strict", "--notion", "hall"],
    ],
)
def test_query_flag_misuse(argv):
    assert run("query", path("uber-hall"), *argv)[0] == 64


def test_usage_errors():
    assert run()[0] == 64
    assert run("frobnicate", path("uber-hall"))[0] == 64
    assert run("causes", path("uber-raci"))[0] == 64
    assert run("compare", path("uber-raci"), "--strict")[0] == 64


def test_unknown_ids_are_input_errors():
    assert run("query", path("uber-hall"), "--notion", "lindberg", "--component", "NOPE")[0] == 2
    assert run("query", path("uber-raci"), "--notion", "raci", "--event", "NO_SUCH")[0] == 2
    assert run("causes", path("uber-raci"), "--event", "NO_SUCH")[0] == 2


def test_causes_explicit():
    code, data = run_json("causes", path("uber-raci"), "--event", "HIT_PEDESTRIAN")
    assert code == 0
    assert data == {
        "event": "HIT_PEDESTRIAN",
        "results": [{"source": "explicit", "causes": ["AI", "CHASSIS"]}],
        "warnings": [],
    }


def test_causes_computed():
    code, data = run_json("causes", path("lidar-structural"), "--event", "HIT_PEDESTRIAN", "--minimal")
    assert code == 0
    assert data["results"] == [
        {"source": "computed", "causes": ["LIDAR"], "but_for": ["LIDAR"], "minimal_sets": [["LIDAR"]]}
    ]


def test_causes_unavailable():
    assert run("causes", path("uber-hall"), "--event", "HIT_PEDESTRIAN")[0] == 3
    assert run("causes", path("uber-raci"), "--event", "DETECT_PEDESTRIAN")[0] == 3


def test_cause_conflict_warning(write_tmp):
    text = path("lidar-structural").read_text() + "component CHASSIS\ncaused HIT_PEDESTRIAN = [CHASSIS]\n"
    code, out = run("causes", write_tmp(text), "--event", "HIT_PEDESTRIAN")
    assert code == 0
    assert out.splitlines() == [
        "event HIT_PEDESTRIAN",
        "explicit: [CHASSIS]",
        "computed: [LIDAR]",
        "  but-for: [LIDAR]",
        "WARNING CAUSE-CONFLICT: explicit and computed causes disagree",
    ]


def test_causes_not_occurring(write_tmp):
    text = path("lidar-structural").read_text().replace("exo P = true", "exo P = false")
    assert run("causes", write_tmp(text), "--event", "HIT_PEDESTRIAN")[0] == 3


def test_report_missed_by_ego():
    code, data = run_json("report", path("uber-raci"))
    assert code == 0
    assert data["missed_by_ego"] == ["DETECT_PEDESTRIAN"]
    assert sorted(data) == ["causes", "missed_by_ego", "mode", "notions", "relations", "scenario", "violations"]
    assert data["notions"]["raci"] == {"DETECT_PEDESTRIAN": None, "HIT_PEDESTRIAN": ["UBER"]}
    assert data["relations"]["AI"] == {"constructed": ["UBER"], "informed": ["UBER"], "responsible": ["UBER"]}


def test_report_is_byte_identical():
    for fmt in ("text", "json"):
        first = run("report", path("uber-raci"), "--format", fmt)
        assert run("report", path("uber-raci"), "--format", fmt) == first


def test_report_on_minimal_scenario(write_tmp):
    code, data = run_json("report", write_tmp('scenario "minimal"\n'))
    assert code == 1  # STS-0: no ego cps
    assert data["notions"]["hall"] == [] and data["notions"]["lindberg"] == {} and data["notions"]["raci"] == {}
    assert data["missed_by_ego"] is None and data["relations"] == {} and data["causes"] == {}


def test_report_strict_on_valid_model(write_tmp):
    code, data = run_json("report", write_tmp(VALID), "--strict")
    assert code == 0 and data["violations"] == []


def test_compare_json():
    code, data = run_json("compare", path("uber-hall"))
    assert code == 0
    assert data["hall"] == ["AI", "CHASSIS"]
    assert data["raci"] == {"DETECT_PEDESTRIAN": None, "HIT_PEDESTRIAN": None}
    assert data["requirements"]["hall"] == ["observation", "has_account"]


def test_text_and_json_agree_for_query():
    _, text = run("query", path("uber-lindberg"), "--notion", "lindberg", "--component", "CHASSIS")
    _, data = run_json("query", path("uber-lindberg"), "--notion", "lindberg", "--component", "CHASSIS")
    assert text.strip() == f"lindberg(CHASSIS) = [{', '.join(data['result'])}]"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "acctmodel", "query", str(path("uber-hall")), "--notion", "hall", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"] == ["AI", "CHASSIS"]
