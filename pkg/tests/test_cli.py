import json

import numpy as np
import pytest

from sympairs import cli, suites
from sympairs.core import OperatorMatrix
from sympairs.report import Record, Report, emit, make_record
from sympairs.suites import run_suite


def write_pair_file(path, value_a=1.0, value_b=1.0, tol=1e-8):
    obj = {
        "A": OperatorMatrix(np.array([[value_a]])).to_json(),
        "B": OperatorMatrix(np.array([[value_b]])).to_json(),
        "tol": tol,
    }
    path.write_text(json.dumps(obj))


def test_emit_empty_report():
    out = emit(Report(), "json")
    obj = json.loads(out)
    assert obj["records"] == []
    assert obj["summary"]["total"] == 0


def test_emit_csv_failing_record():
    rep = Report()
    rep.records.append(make_record("pair", "identity", "x", 1.0, 1e-10))
    lines = emit(rep, "csv").splitlines()
    assert lines[0] == "suite,check,anchor,residual,tol,pass"
    assert len(lines) == 2
    assert lines[1].endswith("false")


def test_emit_json_round_trip():
    rep = Report(wall_time=0.25)
    rep.records.append(make_record("pair", "identity", "x", 3e-12, 1e-10))
    rep.records.append(make_record("net", "kernel", "y", 2.0, 1e-10,
                                   message="note"))
    back = Report.from_dict(json.loads(emit(rep, "json")))
    assert back.records == rep.records
    assert back.wall_time == rep.wall_time


def test_emit_rejects_unknown_format():
    with pytest.raises(ValueError):
        emit(Report(), "xml")


def test_check_pair_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.json"
    write_pair_file(good)
    assert cli.main(["check", "pair", "-i", str(good)]) == 0
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    write_pair_file(bad, value_b=2.0)
    assert cli.main(["check", "pair", "-i", str(bad)]) == 1
    capsys.readouterr()


def test_usage_errors_exit_2(tmp_path, capsys):
    assert cli.main(["check", "pair", "-i", str(tmp_path / "nope.json")]) == 2
    assert cli.main(["check", "bogus"]) == 2
    assert cli.main(["frobnicate"]) == 2
    assert cli.main(["check", "malliavin", "--d", "0"]) == 2
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert cli.main(["check", "pair", "-i", str(garbled)]) == 2
    capsys.readouterr()


def test_sympair_tol_env(tmp_path, capsys, monkeypatch):
    good = tmp_path / "good.json"
    write_pair_file(good)
    monkeypatch.setenv("SYMPAIR_TOL", "not-a-number")
    assert cli.main(["check", "pair", "-i", str(good)]) == 2
    monkeypatch.setenv("SYMPAIR_TOL", "-1")
    assert cli.main(["check", "pair", "-i", str(good)]) == 2
    monkeypatch.setenv("SYMPAIR_TOL", "1e-6")
    assert cli.main(["check", "pair", "-i", str(good)]) == 0
    capsys.readouterr()


def test_run_default_config(capsys):
    assert cli.main(["run", "-c", "default", "--format", "json"]) == 0
    out = capsys.readouterr().out
    obj = json.loads(out.strip())
    assert obj["summary"]["failed"] == 0
    assert obj["summary"]["total"] > 20


def test_run_empty_suites(tmp_path, capsys):
    cfg = tmp_path / "empty.json"
    cfg.write_text(json.dumps({"suites": []}))
    assert cli.main(["run", "-c", str(cfg)]) == 0
    obj = json.loads(capsys.readouterr().out.strip())
    assert obj["summary"]["total"] == 0


def test_run_tol_zero_fails_checks(tmp_path, capsys):
    cfg = tmp_path / "strict.json"
    cfg.write_text(json.dumps({
        "suites": [
            {"kind": "malliavin", "tol": 0.0, "params": {"d": 1, "N": 4}}
        ]
    }))
    assert cli.main(["run", "-c", str(cfg)]) == 1
    capsys.readouterr()
    # negative tol is a config error, not a check failure
    cfg.write_text(json.dumps({
        "suites": [
            {"kind": "malliavin", "tol": -1.0, "params": {"d": 1, "N": 4}}
        ]
    }))
    assert cli.main(["run", "-c", str(cfg)]) == 2
    capsys.readouterr()


def test_run_output_file_and_byte_determinism(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "suites": [
            {"kind": "defect",
             "params": {"rule": "geometric", "r": 2.0, "nmax": 80,
                        "expect": "CONVERGES"}},
        ]
    }))
    outs = []
    for name in ("r1.json", "r2.json"):
        out = tmp_path / name
        assert cli.main(["run", "-c", str(cfg), "-o", str(out)]) == 0
        obj = json.loads(out.read_text())
        # wall time varies between runs; records must not
        outs.append(json.dumps(obj["records"], sort_keys=True))
    assert outs[0] == outs[1]


def test_run_suite_error_becomes_failed_record():
    rep = run_suite({"suites": [{"kind": "network",
                                 "params": {"graph": "a a 1\n"}}]})
    assert rep.total == 1
    assert not rep.all_passed
    assert rep.records[0].check == "suite_error"


def test_run_suite_bad_kind_rejected_by_cli(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"suites": [{"kind": "bogus"}]}))
    assert cli.main(["run", "-c", str(cfg)]) == 2
    capsys.readouterr()


def test_check_defect_expect_mismatch(capsys):
    code = cli.main([
        "check", "defect", "--rule", "geometric", "--r", "2",
        "--expect", "DIVERGES",
    ])
    assert code == 1
    capsys.readouterr()


def test_check_modular_and_network_subcommands(tmp_path, capsys):
    assert cli.main(["check", "modular", "--n", "2", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "suite,check,anchor,residual,tol,pass"
    graph = tmp_path / "g.txt"
    graph.write_text("a b 1\nb c 1\norigin a\n")
    assert cli.main(["check", "network", "-g", str(graph),
                     "--format", "human"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_default_config_is_valid():
    cfg = suites.default_config()
    assert cli._validate_config(cfg) is cfg
    rep = run_suite(cfg)
    assert rep.all_passed
