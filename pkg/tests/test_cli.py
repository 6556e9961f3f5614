"""CLI surface: exit codes, file outputs, --json payloads."""

import json

import numpy as np
import pytest

from canonhand.cli import main
from canonhand import CanonicalHandParams, extract_all, load_urdf, HandAnnotation

from conftest import FIXTURES, full_hand_params


@pytest.fixture
def shadow_params(tmp_path):
    model = load_urdf(FIXTURES / "shadow_hand.urdf")
    ann = HandAnnotation.load(FIXTURES / "shadow_hand.annotation.json")
    path = tmp_path / "shadow_params.json"
    extract_all(model, ann).save(path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_inspect_json_reports_22_dof(capsys):
    code, out, err = run(capsys, "inspect", FIXTURES / "shadow_hand.urdf", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["dof"] == 22
    assert payload["links"] == payload["joints"] + 1
    assert "palm_link" in payload["aabbs"]


def test_extract_writes_params(capsys, tmp_path):
    out_file = tmp_path / "p.json"
    code, out, err = run(capsys, "extract", FIXTURES / "leap_hand.urdf",
                    "--annotation", FIXTURES / "leap_hand.annotation.json",
                    "--out", out_file, "--json")
    assert code == 0
    assert json.loads(out)["active_dof"] == 16
    assert CanonicalHandParams.load(out_file).palm_radius > 0


def test_generate_and_roundtrip(capsys, tmp_path):
    params = full_hand_params()
    pfile = tmp_path / "p.json"
    params.save(pfile)
    urdf_file = tmp_path / "hand.urdf"
    code, out, err = run(capsys, "generate", pfile, "--out", urdf_file, "--json")
    assert code == 0
    assert json.loads(out)["joints"] == 27  # 22 revolute + 5 fixed tips
    assert urdf_file.exists()

    code, out, err = run(capsys, "roundtrip", pfile, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] and payload["max_continuous"] < 1e-6


def test_generate_rejects_inverted_limits(capsys, tmp_path):
    params = full_hand_params()
    data = params.to_json_dict()
    data["joint_lowers"][3] = 2.5  # above the upper limit
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, _out, err = run(capsys, "generate", bad, "--out", tmp_path / "x.urdf")
    assert code == 1  # stderr names the slot; the exit code is the contract


def test_missing_file_is_io_error(capsys, tmp_path):
    code, _out, _err = run(capsys, "generate", tmp_path / "nope.json",
                  "--out", tmp_path / "x.urdf")
    assert code == 2
    code, _out, _err = run(capsys, "inspect", tmp_path / "nope.urdf")
    assert code == 2


def test_map_roundtrips_csv(capsys, tmp_path):
    rng = np.random.default_rng(31)
    q = rng.uniform(-1, 1, (5, 16))
    infile = tmp_path / "q.csv"
    infile.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in q))
    mid = tmp_path / "c.csv"
    back = tmp_path / "q2.csv"
    ann = FIXTURES / "leap_hand.annotation.json"
    assert run(capsys, "map", "--annotation", ann, "--direction", "to-canonical",
               "--in", infile, "--out", mid)[0] == 0
    assert run(capsys, "map", "--annotation", ann, "--direction", "to-original",
               "--in", mid, "--out", back)[0] == 0
    out = np.array([[float(v) for v in line.split(",")]
                    for line in back.read_text().splitlines()])
    assert np.array_equal(out, q)


def test_fk_prints_fingertips(capsys, tmp_path):
    pfile = tmp_path / "p.json"
    full_hand_params().save(pfile)
    code, out, err = run(capsys, "fk", pfile, "--json")
    assert code == 0
    tips = json.loads(out)["configs"][0]["fingertips"]
    assert set(tips) == {"thumb", "index", "middle", "ring", "little"}


def test_audit_writes_report(capsys, tmp_path, shadow_params):
    report_file = tmp_path / "report.json"
    code, out, err = run(capsys, "audit", FIXTURES / "shadow_hand.urdf",
                    "--annotation", FIXTURES / "shadow_hand.annotation.json",
                    "--params", shadow_params, "--n", "10", "--seed", "7",
                    "--out", report_file, "--json")
    assert code == 0
    payload = json.loads(report_file.read_text())
    assert payload["n_configs"] == 10
    assert np.isfinite(payload["max_distance"])


def test_sample_json_and_dataset(capsys, tmp_path):
    code, out, err = run(capsys, "sample", "--n", "2", "--seed", "3", "--json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 2 and len(rows[0]) == 66

    data_file = tmp_path / "hands.f32"
    code, _out, _err = run(capsys, "sample", "--n", "8", "--seed", "3",
                  "--out", data_file)
    assert code == 0
    assert data_file.stat().st_size == 8 * 66 * 4


def test_leap_variants_writes_manifest(capsys, tmp_path):
    out_dir = tmp_path / "variants"
    code, _out, _err = run(capsys, "leap-variants", "--base", FIXTURES / "leap_extended.json",
                  "--min-total", "11", "--out-dir", out_dir)
    assert code == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    names = {v["name"] for v in manifest["variants"]}
    assert "leap_3333" in names
    assert manifest["count"] == len(list(out_dir.glob("leap_*.urdf")))
    dof = {v["name"]: v["dof"] for v in manifest["variants"]}
    assert dof["leap_3333"] == 16


def test_roundtrip_on_extracted_fixture_params(capsys, tmp_path):
    # parameters produced by extraction are fixed points of the round-trip
    for name in ("shadow_hand", "allegro_hand", "leap_hand", "barrett_hand"):
        model = load_urdf(FIXTURES / f"{name}.urdf")
        ann = HandAnnotation.load(FIXTURES / f"{name}.annotation.json")
        pfile = tmp_path / f"{name}.json"
        extract_all(model, ann).save(pfile)
        code, out, _err = run(capsys, "roundtrip", pfile, "--json")
        assert code == 0, name
        assert json.loads(out)["max_continuous"] < 1e-6


def test_toml_config_supplies_defaults(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "canonhand.toml"
    cfg.write_text("[defaults]\nseed = 123\n")
    monkeypatch.chdir(tmp_path)
    code, out, _err = run(capsys, "sample", "--n", "1", "--json")
    assert code == 0 and json.loads(out)["seed"] == 123
    # explicit flags win over the config file
    code, out, _err = run(capsys, "sample", "--n", "1", "--seed", "5", "--json")
    assert json.loads(out)["seed"] == 5
    # a malformed config is an I/O-class error
    bad = tmp_path / "bad.toml"
    bad.write_text("defaults = [")
    code, _out, _err = run(capsys, "sample", "--n", "1", "--config-file", bad)
    assert code == 2
