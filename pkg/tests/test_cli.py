import json

import numpy as np
import pytest

from s3h.cli import main
from s3h.io import read_csv


def _report(path):
    return json.loads(path.read_text())


@pytest.fixture
def torus_csv(tmp_path):
    out = tmp_path / "f.csv"
    code = main(["clifford", "--r", "0.70710678", "--phi", "0.88137359", "--nx", "64", "--ny", "64",
                 "--out", str(out), "--frame-prefix", str(tmp_path / "fr"), "--report", str(tmp_path / "c.json")])
    assert code == 0
    return out


def test_clifford_and_verify(tmp_path, torus_csv):
    assert len(torus_csv.read_text().splitlines()) == 1 + 64 * 64
    rep = _report(tmp_path / "c.json")
    assert rep["status"] == "ok" and rep["failures"] == {}
    assert main(["verify", "--in", str(torus_csv), "--report", str(tmp_path / "v.json")]) == 0


def test_transform_then_congruent(tmp_path, torus_csv):
    fp = tmp_path / "fp.csv"
    assert main(["transform", "--in", str(torus_csv), "--eps", "+1", "--out", str(fp),
                 "--report", str(tmp_path / "t.json")]) == 0
    rep_path = tmp_path / "cong.json"
    assert main(["congruent", "--a", str(torus_csv), "--b", str(fp), "--report", str(rep_path)]) == 0
    data = _report(rep_path)["data"]
    assert data["residual"] < 1e-6 and len(data["R"]) == 16


def test_involution_pipeline(tmp_path, torus_csv):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["transform", "--in", str(torus_csv), "--out", str(a), "--report", str(tmp_path / "1.json")]) == 0
    assert main(["transform", "--in", str(a), "--eps", "-1", "--out", str(b), "--report", str(tmp_path / "2.json")]) == 0
    assert main(["congruent", "--a", str(torus_csv), "--b", str(b), "--report", str(tmp_path / "3.json")]) == 0
    assert np.abs(read_csv(b).values - read_csv(torus_csv).values).max() < 1e-6


def test_garbage_input_is_a_parse_error(tmp_path, capsys):
    bad = tmp_path / "garbage.csv"
    bad.write_text("x,y,c0,c1\n0,0,1\n")
    assert main(["verify", "--in", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_outputs_are_deterministic(tmp_path, torus_csv):
    runs = []
    for k in range(2):
        out, rep = tmp_path / f"t{k}.csv", tmp_path / f"t{k}.json"
        main(["transform", "--in", str(torus_csv), "--out", str(out), "--report", str(rep)])
        runs.append((out.read_bytes(), rep.read_bytes()))
    assert runs[0] == runs[1]


def test_tolerance_scale_turns_gates_red(tmp_path, torus_csv, monkeypatch):
    monkeypatch.setenv("S3H_TOLERANCE_SCALE", "1e-12")
    assert main(["transform", "--in", str(torus_csv), "--report", str(tmp_path / "t.json")]) == 1
    assert _report(tmp_path / "t.json")["status"] == "fail"


def test_gate_override(tmp_path, torus_csv):
    fp = tmp_path / "fp.csv"
    main(["transform", "--in", str(torus_csv), "--out", str(fp), "--report", str(tmp_path / "t.json")])
    code = main(["congruent", "--a", str(torus_csv), "--b", str(fp), "--gate", "procrustes=1e-20",
                 "--report", str(tmp_path / "c.json")])
    assert code == 1
    assert "procrustes" in _report(tmp_path / "c.json")["failures"]


def test_sequence(tmp_path, torus_csv):
    prefix = tmp_path / "seq"
    assert main(["sequence", "--in", str(torus_csv), "--p-min", "-1", "--p-max", "1",
                 "--out-prefix", str(prefix), "--report", str(tmp_path / "s.json")]) == 0
    assert (tmp_path / "seq_p-1.csv").exists() and (tmp_path / "seq_p1.csv").exists()


def test_bonnet_from_frame_files(tmp_path, torus_csv):
    out = tmp_path / "fb.csv"
    assert main(["bonnet", "--phi", str(tmp_path / "fr_phi.csv"), "--mu", str(tmp_path / "fr_mu.csv"),
                 "--out", str(out), "--report", str(tmp_path / "b.json")]) == 0
    assert main(["congruent", "--a", str(torus_csv), "--b", str(out), "--report", str(tmp_path / "c.json")]) == 0


def test_bonnet_sinh_gordon(tmp_path):
    rep = tmp_path / "sg.json"
    assert main(["bonnet", "--sinh-gordon", "0.5", "--nx", "60", "--ny", "60",
                 "--out", str(tmp_path / "sg.csv"), "--report", str(rep)]) == 0
    assert _report(rep)["residuals"]["path_independence"]["interior_sup"] < 1e-6


def test_bonnet_rejects_incompatible_data(tmp_path):
    assert main(["bonnet", "--sinh-gordon", "0.5", "--nx", "20", "--ny", "20",
                 "--report", str(tmp_path / "r.json")]) == 1
    assert "compat_phi" in _report(tmp_path / "r.json")["failures"]


def test_hsurface_round_trip_and_export(tmp_path, torus_csv):
    X = tmp_path / "X.csv"
    assert main(["hsurface", "--in", str(torus_csv), "--out", str(X), "--report", str(tmp_path / "h.json")]) == 0
    Xd = tmp_path / "Xd.csv"
    assert main(["hsurface", "--in", str(torus_csv), "--dilate", str(np.sqrt(3) / 2), "--out", str(Xd),
                 "--report", str(tmp_path / "hd.json")]) == 0
    assert _report(tmp_path / "hd.json")["data"]["H"] == pytest.approx(-2 / np.sqrt(3))
    assert main(["verify", "--in", str(Xd), "--H", str(-2 / np.sqrt(3)), "--report", str(tmp_path / "v.json")]) == 0
    assert main(["hsurface", "--reverse", "--in", str(X), "--out", str(tmp_path / "g.csv"),
                 "--report", str(tmp_path / "r.json")]) == 0
    obj = tmp_path / "X.obj"
    assert main(["export-obj", "--in", str(X), "--out", str(obj), "--report", str(tmp_path / "o.json")]) == 0
    text = obj.read_text().splitlines()
    assert sum(ln.startswith("v ") for ln in text) == 4096
    assert sum(ln.startswith("f ") for ln in text) == 2 * 63 * 63


def test_export_needs_projection_for_maps(tmp_path, torus_csv):
    assert main(["export-obj", "--in", str(torus_csv), "--out", str(tmp_path / "f.obj")]) == 2
    assert main(["export-obj", "--in", str(torus_csv), "--stereographic", "--out", str(tmp_path / "f.obj"),
                 "--report", str(tmp_path / "o.json")]) == 0


def test_verify_phi_mu_pair(tmp_path, torus_csv):
    assert main(["verify", "--in", str(tmp_path / "fr_phi.csv"), "--mu", str(tmp_path / "fr_mu.csv"),
                 "--report", str(tmp_path / "v.json")]) == 0
    assert main(["verify", "--in", str(tmp_path / "fr_phi.csv")]) == 2
