import json
import subprocess
import sys

import numpy as np
import pytest

from bicircle.cli import canonical_json, main, parse_res
from bicircle.errors import ParseError
from bicircle.quatpoly import QPoly, Quaternion, U, V
from bicircle.solver import PythTuple, SolveCertificate, tuple_to_triple


def small_factors():
    a = U + QPoly.constant(Quaternion(1, 2, 0, 1))
    b = (U * V) * QPoly.constant(Quaternion(0, 1, 1, 0)) + U + V \
        + QPoly.constant(Quaternion(2, 0, 1, 0))
    c = V + QPoly.constant(Quaternion(1, 0, 2, 0))
    return a, b, c


def write_tuple(tmp_path, name="tuple.json"):
    from bicircle.solver import tuple_from_ABCD

    a, b, c = small_factors()
    tup = tuple_from_ABCD(a, b, c, QPoly.one())
    path = tmp_path / name
    path.write_text(tup.to_json() + "\n")
    return path, tup


# --- verify --------------------------------------------------------------

def test_verify_valid_tuple(tmp_path, capsys):
    path, _ = write_tuple(tmp_path)
    assert main(["verify", str(path)]) == 0
    assert "ok" in capsys.readouterr().out


def test_verify_unit_tuple_prints_residual_one(tmp_path, capsys):
    data = {"tuple": [QPoly.one().to_json_dict()]
            + [QPoly.zero().to_json_dict()] * 5}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    assert main(["verify", str(path)]) == 1
    assert "residual: 1" in capsys.readouterr().out


def test_verify_malformed_json_exit2(tmp_path):
    path = tmp_path / "nj.json"
    path.write_text("{not json")
    assert main(["verify", str(path)]) == 2


def test_verify_wrong_component_count_exit2(tmp_path):
    path = tmp_path / "short.json"
    path.write_text(json.dumps({"tuple": [QPoly.one().to_json_dict()] * 3}))
    assert main(["verify", str(path)]) == 2


def test_verify_missing_file_exit5(tmp_path):
    assert main(["verify", str(tmp_path / "absent.json")]) == 5


def test_verify_approx_backend_accepts_small_residual(tmp_path):
    # a float tuple that is off by ~1e-12 passes only with --backend approx
    eps = 1e-12
    data = {"tuple": [
        QPoly.constant(Quaternion(3.0)).to_json_dict(),
        QPoly.constant(Quaternion(4.0)).to_json_dict(),
        QPoly.zero().to_json_dict(),
        QPoly.zero().to_json_dict(),
        QPoly.zero().to_json_dict(),
        QPoly.constant(Quaternion(5.0 + eps)).to_json_dict(),
    ]}
    path = tmp_path / "near.json"
    path.write_text(json.dumps(data))
    assert main(["verify", str(path)]) == 1
    assert main(["verify", str(path), "--backend", "approx"]) == 0
    assert main(["verify", str(path), "--backend", "approx",
                 "--tol", "1e-13"]) == 1


# --- solve / replay / make ----------------------------------------------

def test_solve_writes_verified_certificate(tmp_path):
    path, tup = write_tuple(tmp_path)
    cert_path = tmp_path / "cert.json"
    assert main(["solve", str(path), "--out", str(cert_path)]) == 0
    text = cert_path.read_text()
    cert = SolveCertificate.from_json(text)
    assert cert.verify(tuple_to_triple(tup))
    # bit-exact round-trip of the written file
    assert cert.to_json() + "\n" == text


def test_solve_without_out_exit2(tmp_path):
    path, _ = write_tuple(tmp_path)
    assert main(["solve", str(path)]) == 2


def test_solve_overdegree_exit4(tmp_path):
    path, tup = write_tuple(tmp_path)
    big = PythTuple([x * (U * U) for x in tup.xs])
    bad = tmp_path / "big.json"
    bad.write_text(big.to_json())
    assert main(["solve", str(bad), "--out", str(tmp_path / "c.json")]) == 4


def test_solve_float_tuple_needs_approx_backend(tmp_path):
    from bicircle.solver import tuple_from_ABCD

    a = U + QPoly.constant(Quaternion(1.0, 2.0, 0.0, 1.0))
    b = U + V + QPoly.constant(Quaternion(2.0, 0.0, 1.0, 0.0))
    c = V + QPoly.constant(Quaternion(1.0, 0.0, 2.0, 0.0))
    tup = tuple_from_ABCD(a, b, c, QPoly.one())
    path = tmp_path / "float.json"
    path.write_text(tup.to_json())
    out = tmp_path / "cert.json"
    assert main(["solve", str(path), "--out", str(out)]) == 3
    assert main(["solve", str(path), "--out", str(out),
                 "--backend", "approx"]) == 0


def test_replay_ok_and_tampered(tmp_path):
    path, _ = write_tuple(tmp_path)
    cert_path = tmp_path / "cert.json"
    assert main(["solve", str(path), "--out", str(cert_path)]) == 0
    assert main(["replay", str(cert_path), str(path)]) == 0
    cert = json.loads(cert_path.read_text())
    cert["orientation"] = "RQP" if cert["orientation"] == "PQR" else "PQR"
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(cert))
    assert main(["replay", str(bad), str(path)]) == 1


def test_make_matches_library_output(tmp_path):
    a, b, c = small_factors()
    abcd = tmp_path / "abcd.json"
    abcd.write_text(json.dumps({"A": a.to_json_dict(), "B": b.to_json_dict(),
                                "C": c.to_json_dict(),
                                "D": QPoly.one().to_json_dict()}))
    out = tmp_path / "made.json"
    assert main(["make", str(abcd), "--out", str(out)]) == 0
    assert main(["verify", str(out)]) == 0
    _, tup = write_tuple(tmp_path, "reference.json")
    assert out.read_text() == tup.to_json() + "\n"


def test_make_missing_entry_exit2(tmp_path):
    abcd = tmp_path / "abcd.json"
    abcd.write_text(json.dumps({"A": QPoly.one().to_json_dict()}))
    assert main(["make", str(abcd), "--out", str(tmp_path / "x.json")]) == 2


# --- surface -------------------------------------------------------------

def euclidean_spec(tmp_path):
    spec = {"family": "E",
            "alpha": {"center": [0, 0, 0], "radius": 2.0,
                      "unit_normal": [0, 0, 1]},
            "beta": {"center": [0.5, 0, 0], "radius": 1.0,
                     "unit_normal": [0, 1, 0]}}
    path = tmp_path / "e.json"
    path.write_text(json.dumps(spec))
    return path


def test_surface_euclidean_writes_artifacts(tmp_path, capsys):
    path = euclidean_spec(tmp_path)
    base = tmp_path / "patch"
    assert main(["surface", str(path), "--out", str(base),
                 "--res", "12x12"]) == 0
    for ext in (".obj", ".csv", ".report.json", ".png", ".metrics.png"):
        artifact = tmp_path / ("patch" + ext)
        assert artifact.exists() and artifact.stat().st_size > 0
    report = json.loads((tmp_path / "patch.report.json").read_text())
    assert report["family"] == "E"
    assert report["all_cocircular"] is True
    assert len(report["curves"]) == 24
    assert "all_cocircular=True" in capsys.readouterr().out


def test_surface_report_round_trips_bit_exactly(tmp_path):
    path = euclidean_spec(tmp_path)
    base = tmp_path / "patch"
    assert main(["surface", str(path), "--out", str(base),
                 "--res", "8x8"]) == 0
    text = (tmp_path / "patch.report.json").read_text()
    assert canonical_json(json.loads(text)) == text


def test_surface_clifford(tmp_path):
    spec = {"family": "C",
            "alpha": {"axis": [0, 0, 1], "angular_radius": 0.5},
            "beta": {"axis": [0, 0, 1], "angular_radius": 1.0}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(spec))
    assert main(["surface", str(path), "--out", str(tmp_path / "cl"),
                 "--res", "10x10"]) == 0
    report = json.loads((tmp_path / "cl.report.json").read_text())
    assert report["family"] == "C" and report["all_cocircular"]


def test_surface_cyclide(tmp_path):
    spec = {"family": "D",
            "cyclide": {"qcoeffs": {"0,0,0,2": 1.0, "0,0,0,1": 6.0,
                                    "0,0,0,0": 9.0, "2,0,0,0": -16.0,
                                    "0,2,0,0": -16.0}},
            "bbox": [[-3.2, -3.2, -1.2], [3.2, 3.2, 1.2]]}
    path = tmp_path / "d.json"
    path.write_text(json.dumps(spec))
    assert main(["surface", str(path), "--out", str(tmp_path / "torus"),
                 "--res", "20x12"]) == 0
    obj_text = (tmp_path / "torus.obj").read_text()
    assert any(line.startswith("l ") for line in obj_text.splitlines())
    report = json.loads((tmp_path / "torus.report.json").read_text())
    assert report["family"] == "D" and len(report["curves"]) > 0


def test_surface_point_beta(tmp_path):
    spec = {"family": "E",
            "alpha": {"center": [0, 0, 0], "radius": 2.0,
                      "unit_normal": [0, 0, 1]},
            "beta": {"point": [1.0, 2.0, 3.0]}}
    path = tmp_path / "ep.json"
    path.write_text(json.dumps(spec))
    assert main(["surface", str(path), "--out", str(tmp_path / "tr"),
                 "--res", "8x4"]) == 0


def test_surface_unknown_family_exit2(tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"family": "Z"}))
    assert main(["surface", str(path), "--out", str(tmp_path / "z")]) == 2


def test_surface_empty_cyclide_exit3(tmp_path):
    spec = {"family": "D",
            "cyclide": {"qcoeffs": {"0,0,0,1": 1.0, "0,0,0,0": -1.0}},
            "bbox": [[5, 5, 5], [6, 6, 6]]}
    path = tmp_path / "far.json"
    path.write_text(json.dumps(spec))
    assert main(["surface", str(path), "--out", str(tmp_path / "far")]) == 3


# --- config and serialization -------------------------------------------

def test_res_parsing():
    assert parse_res("16x16") == (16, 16)
    assert parse_res("8X12") == (8, 12)
    with pytest.raises(ParseError):
        parse_res("12")
    with pytest.raises(ParseError):
        parse_res("axb")


def test_bad_flags_exit2(tmp_path):
    path, _ = write_tuple(tmp_path)
    assert main(["verify", str(path), "--tol", "-1"]) == 2
    assert main(["verify", str(path), "--res", "1x8"]) == 2
    assert main(["verify", str(path), "--res", "nope"]) == 2


def test_canonical_json_properties():
    doc = {"b": [1.0, 0.5, -0.0, 3, True, None, "s"],
           "a": {"nested": 1e-300, "empty": {}, "seq": []}}
    text = canonical_json(doc)
    back = json.loads(text)
    assert canonical_json(back) == text
    assert back["b"][0] == 1.0 and isinstance(back["b"][0], float)
    assert isinstance(back["b"][3], int)
    assert text.index('"a"') < text.index('"b"')
    third = np.nextafter(1.0, 2.0)  # needs all 17 digits
    assert json.loads(canonical_json({"x": float(third)}))["x"] == third
    with pytest.raises(ParseError):
        canonical_json({"x": float("nan")})
    with pytest.raises(ParseError):
        canonical_json({"x": object()})


def test_selftest_passes(capsys):
    assert main(["selftest", "--seed", "11"]) == 0
    out = capsys.readouterr().out
    assert out.count("ok:") == 6 and "selftest passed" in out


def test_console_entry_point(tmp_path):
    path, _ = write_tuple(tmp_path)
    proc = subprocess.run(
        [sys.executable, "-m", "bicircle.cli", "verify", str(path)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "ok" in proc.stdout
