import csv
import json
import math

import pytest

from phasedual import cli

SQRT5 = math.sqrt(5.0)


def run(tmp_path, *args):
    return cli.main(["run", "--out", str(tmp_path), *args])


def load_report(tmp_path):
    return json.loads((tmp_path / "report.json").read_text())


def test_example1_run(tmp_path, capsys):
    assert run(tmp_path, "--scenario", "example-1", "--eps", "0.01") == 0
    rep = load_report(tmp_path)
    assert rep["schema"] == "cdl-1" and rep["name"] == "example-1" and rep["all_matched"]
    assert rep["tables"]["spikes"][0]["delta_P"] == pytest.approx(-0.1, abs=1e-9)
    with open(tmp_path / "fields.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "sigma", "beta", "zeta1", "zeta2", "zeta3", "v1", "v2", "v3"]
    assert len(rows) == 1001
    assert (tmp_path / "fields.csv").read_bytes().count(b"\r\n") == 1001
    assert "example-1" in capsys.readouterr().out


def test_sup_infinite_run(tmp_path):
    assert run(tmp_path, "--scenario", "sup-infinite-3.9", "--gamma", "0.1") == 0
    rows = load_report(tmp_path)["tables"]["sequence"]
    assert all(b["dual"] > a["dual"] for a, b in zip(rows, rows[1:]))


def test_custom_dual_evaluation(tmp_path):
    code = run(tmp_path, "--custom", "--evaluate", "dual", "--zeta-const", "-2", "--mu", "1", "--nu", "1",
               "--alpha", "3", "--beta", repr(SQRT5))
    assert code == 0
    assert load_report(tmp_path)["value"] == pytest.approx(5 - 3 * SQRT5, abs=1e-12)


def test_custom_divergent_and_report(tmp_path):
    assert run(tmp_path, "--custom", "--evaluate", "dual", "--zeta-const", "-1", "--beta", "2") == 0
    assert load_report(tmp_path)["value"] == "divergent"
    assert run(tmp_path, "--custom", "--evaluate", "report", "--zeta-branch", "B1", "--beta", "4") == 0
    er = load_report(tmp_path)["energy_report"]
    assert er["critical"] and abs(er["gap"]) <= 1e-8 * (1 + abs(er["primal"]))


def test_custom_missing_inputs(tmp_path, capsys):
    assert run(tmp_path, "--custom", "--evaluate", "primal") == 1
    assert "needs" in capsys.readouterr().err


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scenario": "gap-obstruction-3.10", "mu": 1, "nu": 1, "alpha": 3,
                               "load": {"kind": "piecewise", "breaks": [0, 0.25, 1], "pieces": [[0], [-2]],
                                        "sigma1": 4.5}, "n_cells": 400}))
    out = tmp_path / "o"
    assert cli.main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["parameters"]["n_cells"] == 400
    assert cli.main(["run", "--config", str(cfg), "--n-cells", "800", "--out", str(out)]) == 0
    assert json.loads((out / "report.json").read_text())["parameters"]["n_cells"] == 800


def test_malformed_json_reports_position(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{\n  "scenario": "example-1",\n  oops\n}')
    assert cli.main(["run", "--config", str(cfg)]) == 1
    err = capsys.readouterr().err
    assert "line 3" in err and "column 3" in err


def test_invalid_physics_quotes_constraint(tmp_path, capsys):
    assert run(tmp_path, "--scenario", "example-1", "--mu", "5") == 1
    assert "nu*alpha^2 > 2*mu" in capsys.readouterr().err


def test_unknown_scenario_lists_known(tmp_path, capsys):
    assert run(tmp_path, "--scenario", "bogus") == 1
    err = capsys.readouterr().err
    assert "weights-lemma" in err and "example-1" in err


def test_bad_flag_value_exits_1(capsys):
    assert_exit = pytest.raises(SystemExit)
    with assert_exit as info:
        cli.main(["run", "--n-cells", "many"])
    assert info.value.code == 1


def test_mismatch_exit_code(tmp_path, monkeypatch):
    from phasedual import falsify

    def fake(cfg):
        rep = falsify.ScenarioReport("fake")
        rep.add("c", "anchor", falsify.Verdict.CONFIRMED, False)
        return rep

    monkeypatch.setitem(falsify.SCENARIOS, "p-classify",
                        falsify.Scenario("p-classify", "d", "a", fake))
    assert run(tmp_path, "--scenario", "p-classify") == 2
    assert load_report(tmp_path)["all_matched"] is False


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["run", "--scenario", "global-min-3.9", "--seed", "7", "--out", str(d)]) == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "fields.csv").read_bytes() == (b / "fields.csv").read_bytes()


def test_list_text_and_json(capsys):
    assert cli.main(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) >= 9 and any(line.startswith("example-1") for line in lines)
    assert cli.main(["list", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["schema"] == "cdl-1" and len(data["scenarios"]) == 9


def test_run_json_stdout(tmp_path, capsys):
    assert run(tmp_path, "--scenario", "p-classify", "--json") == 0
    assert json.loads(capsys.readouterr().out)["name"] == "p-classify"


def test_all_scenarios_suite(tmp_path):
    assert run(tmp_path, "--scenario", "all") == 0
    rep = load_report(tmp_path)
    assert rep["kind"] == "suite" and [s["name"] for s in rep["scenarios"]] == sorted(s["name"] for s in rep["scenarios"])
