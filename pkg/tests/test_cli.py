"""Command line behavior: exit codes, schemas, reports, determinism."""

import json

import numpy as np
import pytest

from gframes import GeneratorSpec, ModuleVector, generate
from gframes import serialization as ser
from gframes.cli import main
from gframes.rng import complex_normal, stream

COMMUTING_SPEC = '{"seed": 42, "n": 2, "d": 2, "m": 4, "flavor": "commuting"}'
PARSEVAL_SPEC = '{"seed": 6, "n": 2, "d": 2, "m": 4, "flavor": "parseval"}'
BESSEL_SPEC = '{"seed": 3, "n": 1, "d": 2, "m": 4, "flavor": "bessel_only"}'


@pytest.fixture
def scen(tmp_path):
    path = tmp_path / "scen.json"
    assert main(["generate", "--spec", COMMUTING_SPEC, "--out", str(path)]) == 0
    return path


@pytest.fixture
def parseval_scen(tmp_path):
    path = tmp_path / "parseval.json"
    assert main(["generate", "--spec", PARSEVAL_SPEC, "--out", str(path)]) == 0
    return path


def read(path):
    return json.loads(path.read_text())


# ----------------------------------------------------------------- analyze


def test_analyze_frame_exit_zero(scen, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["analyze", str(scen), "--out", str(out)]) == 0
    report = read(out)
    assert report["verdict"] == "frame"
    assert report["bounds"][0] > 0
    assert report["commutation"]["passed"] is True
    assert report["condition_numbers"]["C"] >= 1.0


def test_analyze_parseval_unit_bounds(parseval_scen, tmp_path):
    out = tmp_path / "report.json"
    assert main(["analyze", str(parseval_scen), "--out", str(out)]) == 0
    report = read(out)
    lo, hi = report["bounds"]
    assert abs(lo - 1.0) <= 1e-9 and abs(hi - 1.0) <= 1e-9
    assert report["controlled_bounds"] == report["bounds"]


def test_analyze_bessel_only_exit_two(tmp_path):
    path = tmp_path / "bessel.json"
    assert main(["generate", "--spec", BESSEL_SPEC, "--out", str(path)]) == 0
    assert main(["analyze", str(path)]) == 2


def test_analyze_bounds_match_library_oracle(tmp_path):
    spec_text = '{"seed": 23, "n": 2, "d": 2, "m": 4, "flavor": "commuting"}'
    path = tmp_path / "s.json"
    out = tmp_path / "r.json"
    assert main(["generate", "--spec", spec_text, "--out", str(path)]) == 0
    assert main(["analyze", str(path), "--out", str(out)]) == 0
    from gframes import optimal_bounds
    sc = generate(GeneratorSpec(seed=23, n=2, d=2, m=4, flavor="commuting"))
    b = optimal_bounds(sc.family)
    lo, hi = read(out)["bounds"]
    assert lo == b.lower and hi == b.upper


def test_analyze_schema_error_names_path(scen, tmp_path, capsys):
    obj = read(scen)
    obj["points"][0]["weight"] = -1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    assert main(["analyze", str(bad)]) == 1
    assert "points[0].weight" in capsys.readouterr().err


def test_analyze_missing_file(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "nope.json")]) == 1
    assert "error" in capsys.readouterr().err


def test_analyze_invalid_json(tmp_path, capsys):
    p = tmp_path / "mangled.json"
    p.write_text("{not json")
    assert main(["analyze", str(p)]) == 1


# ---------------------------------------------------------------- generate


def test_generate_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["generate", "--spec", COMMUTING_SPEC, "--out", str(a)]) == 0
    assert main(["generate", "--spec", COMMUTING_SPEC, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_threads_do_not_change_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["generate", "--spec", COMMUTING_SPEC, "--threads", "1",
                 "--out", str(a)]) == 0
    assert main(["generate", "--spec", COMMUTING_SPEC, "--threads", "4",
                 "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_round_trip_bytes(scen):
    text = scen.read_text()
    rebuilt = ser.scenario_from_obj(json.loads(text))
    assert ser.dumps(ser.scenario_to_obj(rebuilt)) == text


def test_generate_spec_from_file(tmp_path):
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(COMMUTING_SPEC)
    out = tmp_path / "o.json"
    assert main(["generate", "--spec", str(spec_file), "--out", str(out)]) == 0
    assert read(out)["n"] == 2


def test_generate_invalid_flavor_exit_one(capsys):
    bad = '{"seed": 1, "n": 1, "d": 1, "m": 1, "flavor": "exotic"}'
    assert main(["generate", "--spec", bad]) == 1
    assert "flavor" in capsys.readouterr().err


def test_generate_writes_stdout_without_out(capsys):
    assert main(["generate", "--spec", '{"seed": 1, "n": 1, "d": 1, "m": 1}']) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["version"] == 1


# ------------------------------------------------------------------ verify


def write_batch(tmp_path, specs):
    path = tmp_path / "batch.json"
    path.write_text(json.dumps(specs))
    return path


SMALL_BATCH = [
    {"seed": 100, "n": 1, "d": 1, "m": 2, "flavor": "generic"},
    {"seed": 101, "n": 2, "d": 2, "m": 4, "flavor": "commuting"},
    {"seed": 102, "n": 2, "d": 2, "m": 4, "flavor": "parseval"},
    {"seed": 103, "n": 2, "d": 2, "m": 4, "flavor": "bessel_only"},
]


def test_verify_small_batch_passes(tmp_path, capsys):
    batch = write_batch(tmp_path, SMALL_BATCH)
    out = tmp_path / "report.json"
    assert main(["verify", "--batch", str(batch), "--out", str(out)]) == 0
    report = read(out)
    assert set(report) == {"version", "tolerances", "results"}
    ids = [r["check_id"] for r in report["results"]]
    assert ids == sorted(ids)
    err = capsys.readouterr().err
    assert "op_energy_bound" in err


def test_verify_threads_byte_identical(tmp_path):
    batch = write_batch(tmp_path, SMALL_BATCH)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--batch", str(batch), "--threads", "1",
                 "--out", str(a)]) == 0
    assert main(["verify", "--batch", str(batch), "--threads", "4",
                 "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_two_runs_byte_identical(tmp_path):
    batch = write_batch(tmp_path, SMALL_BATCH)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--batch", str(batch), "--out", str(a)]) == 0
    assert main(["verify", "--batch", str(batch), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_tiny_tol_exit_three_with_seeds(tmp_path):
    batch = write_batch(tmp_path, SMALL_BATCH)
    out = tmp_path / "report.json"
    assert main(["verify", "--batch", str(batch), "--tol", "1e-18",
                 "--out", str(out)]) == 3
    report = read(out)
    failing = [r for r in report["results"] if r["status"] == "fail"]
    assert failing
    seeds = {s["seed"] for s in SMALL_BATCH}
    for r in failing:
        for f in r["failures"]:
            assert f["seed"] in seeds


def test_verify_empty_batch_exit_one(tmp_path, capsys):
    batch = write_batch(tmp_path, [])
    assert main(["verify", "--batch", str(batch)]) == 1
    assert "batch" in capsys.readouterr().err


def test_verify_batch_schema_error(tmp_path, capsys):
    batch = write_batch(tmp_path, [{"seed": 1, "n": 1, "d": 1}])
    assert main(["verify", "--batch", str(batch)]) == 1


def test_verify_rejects_batch_plus_default(tmp_path):
    batch = write_batch(tmp_path, SMALL_BATCH)
    assert main(["verify", "--batch", str(batch), "--default"]) == 1


def test_verify_bad_threads(capsys):
    assert main(["verify", "--threads", "0"]) == 1


# ------------------------------------------------------------- reconstruct


def test_reconstruct_random_seed(scen, tmp_path):
    out = tmp_path / "rec.json"
    assert main(["reconstruct", str(scen), "--random", "5",
                 "--out", str(out)]) == 0
    report = read(out)
    assert report["passed"] is True
    assert report["error"] >= 0.0
    assert report["relative_error"] <= 1e-8 * max(1.0, report["condition_number"])


def test_reconstruct_parseval_tiny_error(parseval_scen, tmp_path):
    out = tmp_path / "rec.json"
    assert main(["reconstruct", str(parseval_scen), "--random", "8",
                 "--out", str(out)]) == 0
    assert read(out)["error"] <= 1e-12


def test_reconstruct_explicit_vector(scen, tmp_path):
    x = ModuleVector(2, 2, complex_normal(stream(77, 0), (2, 4)))
    vec_path = tmp_path / "x.json"
    vec_path.write_text(ser.dumps(ser.vector_to_obj(x)))
    out = tmp_path / "rec.json"
    assert main(["reconstruct", str(scen), "--vector", str(vec_path),
                 "--out", str(out)]) == 0
    assert read(out)["passed"] is True


def test_reconstruct_vector_shape_mismatch(scen, tmp_path, capsys):
    x = ModuleVector(1, 2, complex_normal(stream(78, 0), (1, 2)))
    vec_path = tmp_path / "x.json"
    vec_path.write_text(ser.dumps(ser.vector_to_obj(x)))
    assert main(["reconstruct", str(scen), "--vector", str(vec_path)]) == 1


def test_reconstruct_bessel_only_exit_two(tmp_path, capsys):
    path = tmp_path / "bessel.json"
    assert main(["generate", "--spec", BESSEL_SPEC, "--out", str(path)]) == 0
    assert main(["reconstruct", str(path), "--random", "1"]) == 2
    assert "not a frame" in capsys.readouterr().err


# ----------------------------------------------------------- env and usage


def test_env_tol_applies(tmp_path, monkeypatch):
    batch = write_batch(tmp_path, SMALL_BATCH)
    monkeypatch.setenv("GFRAME_TOL", "1e-18")
    assert main(["verify", "--batch", str(batch)]) == 3


def test_flag_overrides_env(tmp_path, monkeypatch):
    batch = write_batch(tmp_path, SMALL_BATCH)
    monkeypatch.setenv("GFRAME_TOL", "1e-18")
    assert main(["verify", "--batch", str(batch), "--tol", "1e-9"]) == 0


def test_env_tol_invalid(scen, monkeypatch, capsys):
    monkeypatch.setenv("GFRAME_TOL", "abc")
    assert main(["analyze", str(scen)]) == 1
    assert "GFRAME_TOL" in capsys.readouterr().err


def test_no_command_prints_help(capsys):
    assert main([]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_command_exit_one():
    with pytest.raises(SystemExit) as exc:
        main(["summon"])
    assert exc.value.code == 1


def test_analyze_report_is_canonical_json(scen, tmp_path):
    out = tmp_path / "report.json"
    assert main(["analyze", str(scen), "--out", str(out)]) == 0
    text = out.read_text()
    obj = json.loads(text)
    assert text == ser.dumps(obj)
