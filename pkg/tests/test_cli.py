import json
import subprocess
import sys
from importlib import resources

import pytest

from fcunits import cli
from fcunits.fc import instance_from_json

INSTANCES = resources.files("fcunits") / "instances"


def path_of(name):
    return str(INSTANCES / f"{name}.json")


def run(argv, capsys):
    rc = cli.main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_validate_accepts_bundled_instance(capsys):
    rc, out, _ = run(["validate", path_of("heisenberg_gf2")], capsys)
    assert rc == 0
    assert out.startswith("valid:")
    assert "radius 3" in out


def test_validate_rejects_broken_cocycle(capsys):
    rc, out, _ = run(["validate", path_of("broken_cocycle")], capsys)
    assert rc == 1
    assert out.startswith("invalid:")
    assert "lambda(g,h)" in out


def test_validate_missing_file_is_io_error(capsys):
    rc, _, err = run(["validate", "/nonexistent/foo.json"], capsys)
    assert rc == 2
    assert "error:" in err


def test_validate_garbage_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    rc, _, err = run(["validate", str(bad)], capsys)
    assert rc == 2


def test_validate_schema_violation(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"field": {"kind": "rationals"}}),
                   encoding="utf-8")
    rc, _, err = run(["validate", str(bad)], capsys)
    assert rc == 2
    assert "error:" in err


def test_analyze_default_section_is_verdict(capsys):
    rc, out, _ = run(["analyze", path_of("heisenberg_gf2")], capsys)
    assert rc == 0
    report = json.loads(out)
    assert report["tool"]["name"] == "fcunits"
    assert report["seed"] == 0
    assert set(report["sections"]) == {"verdict"}
    assert report["sections"]["verdict"]["result"] == "FC"
    raw = json.loads((INSTANCES / "heisenberg_gf2.json").read_text())
    assert report["instance"]["digest"] == instance_from_json(raw).digest()
    assert report["instance"]["name"] == "Heisenberg mod 2 over GF(2)"


def test_analyze_rejects_invalid_instance(capsys):
    rc, _, err = run(["analyze", path_of("broken_cocycle")], capsys)
    assert rc == 1
    assert "invalid:" in err


def test_analyze_is_deterministic(capsys):
    argv = ["analyze", path_of("c3_z_rationals"), "--verdict", "--structure"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_analyze_out_writes_file_and_mutes_stdout(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc, out, _ = run(["analyze", path_of("gf3_c2_twisted"),
                      "--out", str(target)], capsys)
    assert rc == 0
    assert out == ""
    report = json.loads(target.read_text(encoding="utf-8"))
    assert report["sections"]["verdict"]["result"] == "Inapplicable"


def test_analyze_structure_section(capsys):
    rc, out, _ = run(["analyze", path_of("c3_z_rationals"), "--structure"],
                     capsys)
    assert rc == 0
    section = json.loads(out)["sections"]["structure"]
    assert section["torsion_dimension"] == 3
    assert section["radical"]["dimension"] == 0
    assert section["idempotent_count"] == 4


def test_analyze_structure_level_override(capsys):
    rc, out, _ = run(["analyze", path_of("prufer2_gf257"),
                      "--structure", "--level", "2"], capsys)
    assert rc == 0
    section = json.loads(out)["sections"]["structure"]
    assert section["prufer_level"] == 2
    assert section["torsion_dimension"] == 4


def test_analyze_orbit_section(capsys):
    rc, out, _ = run(["analyze", path_of("heisenberg_gf2"),
                      "--orbits", "f1", "t1", "--depth", "4"], capsys)
    assert rc == 0
    section = json.loads(out)["sections"]["orbits"]
    assert section["depth"] == 4
    assert section["probes"]["f1"]["sizes_by_depth"] == [1, 2, 2]
    assert section["probes"]["f1"]["stabilized"]
    assert section["probes"]["t1"]["sizes_by_depth"] == [1, 1]


def test_analyze_unknown_orbit_label(capsys):
    rc, _, err = run(["analyze", path_of("heisenberg_gf2"),
                      "--orbits", "t9"], capsys)
    assert rc == 2
    assert "unknown generator label" in err


def test_analyze_oracle_cross_check_agrees(capsys):
    rc, out, _ = run(["analyze", path_of("gf3_c2_twisted"), "--oracle"],
                     capsys)
    assert rc == 0
    section = json.loads(out)["sections"]["oracle"]
    assert section["agree"] is True
    assert section["report"]["unit_count"] == 8
    assert section["report"]["idempotent_count"] == 2
    assert section["report"]["radical_dimension"] == 0
    checks = section["cross_check"]
    assert checks["radical_dimension"]["structural"] == 0
    assert checks["idempotent_count"]["structural"] == 2
    assert checks["unit_count"]["structural"] == 8


def test_analyze_oracle_refuses_infinite_instance(capsys):
    rc, _, err = run(["analyze", path_of("c3_z_rationals"), "--oracle"],
                     capsys)
    assert rc == 1
    assert "finite" in err


def test_seed_env_is_recorded(monkeypatch, capsys):
    monkeypatch.setenv("FC_UNITS_SEED", "7")
    rc, out, _ = run(["analyze", path_of("gf3_c2_trivial")], capsys)
    assert rc == 0
    assert json.loads(out)["seed"] == 7


def test_seed_env_must_be_integer(monkeypatch, capsys):
    monkeypatch.setenv("FC_UNITS_SEED", "lucky")
    rc, _, err = run(["analyze", path_of("gf3_c2_trivial")], capsys)
    assert rc == 2
    assert "FC_UNITS_SEED" in err


def test_human_rendering(capsys):
    rc, out, _ = run(["analyze", path_of("c2_z_gf3_twisted"), "--human"],
                     capsys)
    assert rc == 0
    assert out.splitlines()[0].startswith("fcunits")
    assert "verdict: FC via T4" in out
    assert "[pass] T4.3" in out


def test_bundled_listing():
    names = cli.bundled_names()
    assert "heisenberg_gf2" in names
    assert "broken_cocycle" in names
    assert len(cli.bundled_names("lemma3")) == 20


def test_bundled_instance_loads():
    obj = cli.bundled_instance("lemma3/c12_gf7")
    inst = instance_from_json(obj)
    assert inst.validate().valid
    assert inst.group.torsion.size == 12


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "fcunits.cli", "analyze",
         path_of("gf3_c2_twisted"), "--oracle", "--human"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "cross-check agrees" in proc.stdout
