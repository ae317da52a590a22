import json

import pytest

from logfol.cli import (
    EXIT_CHECKS,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    main,
    parse_spec_document,
)

GOOD_SPEC = {
    "n": 2,
    "q": 1,
    "divisors": ["x0", "x1", "x2"],
    "residue_matrix": [[1, 2, -3]],
    "validation_level": "full-snc",
}


def write_spec(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def strip_timings(obj):
    if isinstance(obj, dict):
        return {k: strip_timings(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [strip_timings(v) for v in obj]
    return obj


# -- exit codes ---------------------------------------------------------------

def test_check_valid_spec_exits_zero(tmp_path, capsys):
    spec = write_spec(tmp_path / "s.json", GOOD_SPEC)
    assert main(["check", spec]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: PASS" in out


def test_missing_file_exits_one(tmp_path, capsys):
    assert main(["check", str(tmp_path / "absent.json")]) == EXIT_IO


def test_bad_json_exits_one(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["check", str(path)]) == EXIT_IO


def test_bad_polynomial_exits_one(tmp_path):
    payload = dict(GOOD_SPEC, divisors=["x0 +", "x1", "x2"])
    assert main(["check", write_spec(tmp_path / "s.json", payload)]) == EXIT_IO


def test_schema_violation_exits_one(tmp_path):
    payload = dict(GOOD_SPEC)
    payload["lambdas"] = {"1": 1}  # both residue forms present
    assert main(["check", write_spec(tmp_path / "s.json", payload)]) == EXIT_IO


def test_validation_failure_exits_two(tmp_path, capsys):
    payload = dict(GOOD_SPEC, residue_matrix=[[1, 1, -2]], validation_level="generic")
    spec = write_spec(tmp_path / "s.json", payload)
    assert main(["check", spec]) == EXIT_VALIDATION
    out = capsys.readouterr().out
    assert "not pairwise distinct" in out


def test_descent_violation_names_row(tmp_path, capsys):
    payload = dict(GOOD_SPEC, residue_matrix=[[1, 2, -1]], validation_level="basic")
    assert main(["check", write_spec(tmp_path / "s.json", payload)]) == EXIT_VALIDATION
    assert "residue row 1" in capsys.readouterr().out


def test_verify_passes_on_worked_instance(tmp_path):
    spec = write_spec(tmp_path / "s.json", GOOD_SPEC)
    assert main(["verify", spec]) == EXIT_OK


def test_waived_precondition_failure_exits_three(tmp_path, capsys):
    payload = dict(GOOD_SPEC, divisors=["x0", "x1", "x0 + x1"], checks=["lemma"])
    spec = write_spec(tmp_path / "s.json", payload)
    # without the waiver the spec does not validate at full-snc
    assert main(["verify", spec]) == EXIT_VALIDATION
    assert main(["verify", spec, "--waive-preconditions"]) == EXIT_CHECKS
    out = capsys.readouterr().out
    assert "precondition violated: snc at {1,2,3}" in out


def test_level_override_flag(tmp_path):
    payload = dict(GOOD_SPEC, residue_matrix=[[1, 1, -2]], validation_level="basic")
    spec = write_spec(tmp_path / "s.json", payload)
    assert main(["check", spec]) == EXIT_OK
    assert main(["check", spec, "--level", "generic"]) == EXIT_VALIDATION


# -- reports ---------------------------------------------------------------------

def test_machine_report_deterministic(tmp_path, capsys):
    spec = write_spec(tmp_path / "s.json", GOOD_SPEC)
    assert main(["verify", spec, "--format", "machine"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["verify", spec, "--format", "machine"]) == EXIT_OK
    second = capsys.readouterr().out
    assert strip_timings(json.loads(first)) == strip_timings(json.loads(second))
    # everything except the timings is byte-stable
    a = json.dumps(strip_timings(json.loads(first)), sort_keys=True)
    b = json.dumps(strip_timings(json.loads(second)), sort_keys=True)
    assert a == b


def test_report_spec_roundtrip(tmp_path, capsys):
    spec = write_spec(tmp_path / "s.json", GOOD_SPEC)
    assert main(["verify", spec, "--format", "machine"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    echoed = report["spec"]
    doc = parse_spec_document(echoed, "roundtrip")
    assert doc.echo() == echoed


def test_machine_report_written_to_file(tmp_path):
    spec = write_spec(tmp_path / "s.json", GOOD_SPEC)
    out_path = tmp_path / "report.json"
    assert main(["verify", spec, "--format", "machine", "--output", str(out_path)]) == EXIT_OK
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert report["verdict"] == "pass"
    assert report["engine"]["name"] == "logfol"


def test_compute_outputs_ideals(tmp_path, capsys):
    spec = write_spec(tmp_path / "s.json", GOOD_SPEC)
    assert main(["compute", spec, "--which", "all", "--format", "machine"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    ideals = report["ideals"]
    assert ideals["singular"]["generators"] == ["x0*x1", "x0*x2", "x1*x2"]
    assert ideals["singular"]["projective_dimension"] == 0
    assert ideals["kupka"]["generators"] == ideals["singular"]["generators"]
    assert ideals["persistent_equal"] is True


def test_compute_single_ideal(tmp_path, capsys):
    spec = write_spec(tmp_path / "s.json", GOOD_SPEC)
    assert main(["compute", spec, "--which", "sing", "--format", "machine"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert set(report["ideals"]) == {"singular"}


def test_variables_override(tmp_path, capsys):
    payload = {
        "n": 2, "q": 1,
        "variables": ["u", "v", "w"],
        "divisors": ["u", "v", "w"],
        "residue_matrix": [[1, 2, -3]],
        "validation_level": "full-snc",
    }
    spec = write_spec(tmp_path / "s.json", payload)
    assert main(["compute", spec, "--format", "machine"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    # reports are canonical: polynomials echo in x0..xn form
    assert report["spec"]["divisors"] == ["x0", "x1", "x2"]
    assert report["spec"]["variables"] == ["u", "v", "w"]


def test_lambdas_spec_file(tmp_path, capsys):
    payload = {
        "n": 2, "q": 1,
        "divisors": ["x0", "x1", "x2"],
        "lambdas": {"1": 1, "2": 2, "3": -3},
        "validation_level": "generic",
    }
    spec = write_spec(tmp_path / "s.json", payload)
    assert main(["verify", spec, "--format", "machine"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["spec"]["lambdas"] == {"1": "1", "2": "2", "3": "-3"}


def test_lambda_subset_key_errors(tmp_path):
    for key in ("0", "1,1", "2,1", "1,2,3"):
        payload = {
            "n": 2, "q": 1,
            "divisors": ["x0", "x1", "x2"],
            "lambdas": {key: 1},
        }
        assert main(["check", write_spec(tmp_path / "s.json", payload)]) == EXIT_IO


# -- batch --------------------------------------------------------------------------

def test_batch_directory(tmp_path, capsys):
    specs = tmp_path / "specs"
    specs.mkdir()
    write_spec(specs / "a.json", GOOD_SPEC)
    write_spec(specs / "b.json", dict(GOOD_SPEC, residue_matrix=[["1/2", 1, "-3/2"]]))
    reports_dir = tmp_path / "reports"
    code = main(["batch", str(specs), "--format", "machine",
                 "--output", str(reports_dir)])
    assert code == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["verdict"] == "pass"
    assert [r["name"] for r in summary["results"]] == ["a.json", "b.json"]
    assert (reports_dir / "a.report.json").exists()
    assert (reports_dir / "b.report.json").exists()


def test_batch_directory_flags_failures(tmp_path, capsys):
    specs = tmp_path / "specs"
    specs.mkdir()
    write_spec(specs / "good.json", GOOD_SPEC)
    write_spec(specs / "bad.json", dict(GOOD_SPEC, residue_matrix=[[1, 1, -2]]))
    code = main(["batch", str(specs), "--format", "machine"])
    assert code == EXIT_VALIDATION
    summary = json.loads(capsys.readouterr().out)
    verdicts = {r["name"]: r["verdict"] for r in summary["results"]}
    assert verdicts["good.json"] == "pass"
    assert verdicts["bad.json"] == "validation-failed"


def test_batch_random_seed_deterministic(capsys):
    assert main(["batch", "3", "--seed", "11", "--format", "machine"]) == EXIT_OK
    first = json.loads(capsys.readouterr().out)
    assert main(["batch", "3", "--seed", "11", "--format", "machine"]) == EXIT_OK
    second = json.loads(capsys.readouterr().out)
    assert strip_timings(first) == strip_timings(second)
    assert first["seed"] == 11
    assert [r["verdict"] for r in first["results"]] == ["pass"] * 3


def test_batch_bad_target(capsys):
    assert main(["batch", "/nonexistent/path"]) == EXIT_IO
