import csv
import json
import os
import subprocess
import sys

import pytest

from loccov import cli
from loccov.report import CheckRecord, Report, emit_tables, load, strip_timing
from loccov.suites import ConfigError, ExperimentConfig, run_suite

SMALL = {
    "causal": {"N": [4, 4], "T": [6, 6], "random_sets": 4, "regions_per_lattice": 1},
    "laws": {"instances": 10, "max_dim": 5},
    "dynlocal": {"N": [5], "T": 12, "mu": "1", "max_width": 2, "multi": False, "compare_N": []},
    "massless": {"N": [5], "T": 12, "mu": "0", "max_width": 2},
}


def write_cfg(tmp_path, d, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(d))
    return str(path)


def test_record_validation():
    with pytest.raises(ValueError):
        CheckRecord("x", "not-an-anchor", "pass")
    with pytest.raises(ValueError):
        CheckRecord("x", "lem:exhaustion", "maybe")
    assert CheckRecord("x", "lem:exhaustion", "fail").witness is not None


def test_duplicate_ids_rejected():
    r = Report("s", {}, 0, {})
    r.add(CheckRecord("a", "lem:exhaustion", "pass"))
    with pytest.raises(ValueError):
        r.add(CheckRecord("a", "lem:exhaustion", "pass"))


def test_empty_report_gives_header_only_tables(tmp_path):
    data = Report("s", {}, 0, {}).to_json()
    checks, dims = emit_tables(data, str(tmp_path))
    assert open(checks).read().strip() == "id,anchor,status,timing,witness"
    assert open(dims).read().strip() == "check,spacetime,region,kind,dim"


def test_mixed_statuses_in_table(tmp_path):
    r = Report("s", {}, 0, {})
    r.add(CheckRecord("a", "lem:exhaustion", "pass"))
    r.add(CheckRecord("b", "lem:exhaustion", "fail", {"k": 1}))
    r.add(CheckRecord("c", "lem:exhaustion", "flagged", dims=[{"spacetime": "6x12", "region": [[1, 2]],
                                                                "kind": "bullet", "dim": 3}]))
    checks, dims = emit_tables(r.to_json(), str(tmp_path))
    rows = list(csv.DictReader(open(checks)))
    assert [x["status"] for x in rows] == ["pass", "fail", "flagged"]
    assert list(csv.DictReader(open(dims)))[0]["region"] == "1:2"
    assert r.exit_code == 1


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"bogus": 1})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"caps": {"max_width": 0}})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"nets": {"mu": 0.5}})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"theory": {"kind": "scalar"}})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"spacetimes": ["missing.json"]}, str(tmp_path))


def test_run_is_deterministic_and_parallel_safe():
    cfg = ExperimentConfig.from_dict(SMALL)
    a = run_suite("dynlocal", cfg, jobs=1).to_json()
    b = run_suite("dynlocal", cfg, jobs=2).to_json()
    assert strip_timing(a) == strip_timing(b)
    assert a["dims"] and all(d["kind"] for d in a["dims"])


def test_cli_run_and_tables(tmp_path, capsys):
    path = write_cfg(tmp_path, SMALL)
    out = tmp_path / "out"
    code = cli.main(["run", "subobject-laws", "--config", path, "--out", str(out), "--seed", "3"])
    assert code == 0
    rep = load(str(out / "report-subobject-laws.json"))
    assert rep["metadata"]["seed"] == 3 and rep["summary"]["fail"] == 0
    assert cli.main(["tables", str(out / "report-subobject-laws.json"), "--out", str(out)]) == 0
    assert os.path.exists(out / "checks.csv")
    assert "PASS" in capsys.readouterr().out


def test_cli_failure_exit_code(tmp_path):
    path = write_cfg(tmp_path, SMALL)
    assert cli.main(["run", "dynlocal", "--config", path, "--out", str(tmp_path)]) == 1


def test_cli_config_error(tmp_path):
    assert cli.main(["run", "nets", "--config", write_cfg(tmp_path, {"bogus": 1})]) == 2
    assert cli.main(["run", "nets", "--config", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "0"}))
    assert cli.main(["tables", str(bad)]) == 2


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("LOCCOV_JOBS", "3")
    assert cli._jobs(None) == 3 and cli._jobs(1) == 1
    monkeypatch.setenv("LOCCOV_JOBS", "x")
    with pytest.raises(SystemExit):
        cli._jobs(None)


def test_module_entry_point(tmp_path):
    path = write_cfg(tmp_path, SMALL)
    proc = subprocess.run([sys.executable, "-m", "loccov", "run", "subobject-laws", "--config", path,
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "0 fail" in proc.stdout
