"""Command-line interface: exit codes, output schema, determinism."""

import json

from zmckit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_family_pass(capsys):
    code, out, _ = run(capsys, "verify", "--family", "ads:2,3,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["divides"] is True
    assert doc["h"] == "-16"
    assert doc["s"] == 2 and doc["epsilon"] == -1
    assert doc["family"] == "ads" and doc["params"] == [2, 3, 1]


def test_verify_lawson_quotient_degree(capsys):
    code, out, _ = run(capsys, "verify", "--family", "lawson:2,3")
    assert code == 0
    doc = json.loads(out)
    assert doc["divides"] is True
    assert doc["degree"] == 5


def test_verify_poly_failure_exit_one(capsys):
    code, out, _ = run(
        capsys,
        "verify", "--poly", "x1^2+2x2^2-x3^2", "--nvars", "3", "--sig", "2,-1",
    )
    assert code == 1
    doc = json.loads(out)
    assert doc["divides"] is False
    assert doc["h"] is None
    assert doc["remainder_nterms"] == 1


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "--family", "nope:1")[0] == 2
    assert run(capsys, "verify", "--poly", "x1 +", "--nvars", "2", "--sig", "0,1")[0] == 2
    assert run(capsys, "verify", "--poly", "x1", "--nvars", "2")[0] == 2


def test_spectrum_pass_and_schema(capsys):
    code, out, _ = run(
        capsys, "spectrum", "--family", "ds2:4", "--count", "6", "--seed", "7"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert len(doc["points"]) == 6
    first = doc["points"][0]
    assert set(first) >= {"point", "clusters", "metric_signature", "mean_curvature"}
    pairs = sorted(
        (c["value"], c["multiplicity"]) for c in first["clusters"]
    )
    assert [m for _, m in pairs] == [1, 4]
    assert first["expected_w"] == 4.0


def test_spectrum_lawson_gates_mean_curvature_only(capsys):
    code, out, _ = run(
        capsys, "spectrum", "--family", "lawson:2,3", "--count", "4", "--seed", "1"
    )
    assert code == 0
    doc = json.loads(out)
    assert all("expected_clusters" not in p for p in doc["points"])


def test_spectrum_csv_output(capsys):
    code, out, _ = run(
        capsys,
        "spectrum", "--family", "ads:1,1,0", "--count", "3", "--seed", "0",
        "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("point,f_residual")
    assert len(lines) == 4


def test_sample_json_schema(capsys):
    code, out, _ = run(
        capsys, "sample", "--family", "clifford:2,3", "--count", "5", "--seed", "3"
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc) == 5
    assert set(doc[0]) == {"coords", "f_residual", "constraint_residual", "w"}
    assert len(doc[0]["coords"]) == 7


def test_classify_family_and_custom(capsys):
    code, out, _ = run(capsys, "classify", "--family", "ads:1,2,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["classification"]["verdict"] == "matches"
    assert doc["classification"]["params"] == [1, 2, 1]

    code, out, _ = run(
        capsys,
        "classify", "--poly", "2 x1 x2 + x3^2 - x4^2", "--nvars", "4",
    )
    assert code == 0
    assert json.loads(out)["classification"]["params"] == [1, 1, 0]

    code, out, _ = run(
        capsys,
        "classify", "--poly", "x1^2 + 2 x2^2 - x3^2", "--nvars", "3",
    )
    assert code == 1


def test_report_aggregates_and_exit(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code = main(
        [
            "report",
            "--family", "ads:1,1,0",
            "--family", "ds2:1",
            "--family", "lawson:1,3",
            "--count", "4",
            "--seed", "5",
            "--out", str(out_path),
        ]
    )
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["passed"] is True
    labels = [e["family"] for e in doc["families"]]
    assert labels == sorted(labels)
    ads_entry = next(e for e in doc["families"] if e["family"] == "ads:1,1,0")
    assert ads_entry["classification"]["verdict"] == "matches"
    assert ads_entry["verify"]["divides"] is True
    lawson_entry = next(e for e in doc["families"] if e["family"] == "lawson:1,3")
    assert lawson_entry["classification"] is None


def test_report_requires_families(capsys):
    assert run(capsys, "report")[0] == 2


def test_report_determinism(tmp_path):
    args = [
        "report",
        "--family", "ads:2,3,0",
        "--family", "ds1:1,2",
        "--count", "5",
        "--seed", "11",
    ]
    a_path, b_path = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a_path)]) == 0
    assert main(args + ["--out", str(b_path)]) == 0
    assert a_path.read_bytes() == b_path.read_bytes()


def test_float_rendering_17_digits(capsys):
    code, out, _ = run(
        capsys, "sample", "--family", "ads:1,1,0", "--count", "1", "--seed", "2"
    )
    assert code == 0
    # Round-tripping the rendered floats through json must be lossless.
    doc = json.loads(out)
    coords = doc[0]["coords"]
    assert any(abs(c) > 1 for c in coords)


def test_unknown_command_usage(capsys):
    assert main(["frobnicate"]) == 2


def test_nonpositive_tolerance_rejected(capsys):
    code = main(["spectrum", "--family", "ds2:1", "--tol-spectrum", "0"])
    assert code == 2


def test_cone_quadric_actually_divides(capsys):
    # The residual of x1^2 + x2^2 - x3^2 in index 2 is exactly 32 f, so
    # verify exits 0 even though the variety misses the pseudo-sphere.
    code, out, _ = run(
        capsys,
        "verify", "--poly", "x1^2 + x2^2 - x3^2", "--nvars", "3", "--sig", "2,-1",
    )
    assert code == 0
    assert json.loads(out)["h"] == "32"


def test_report_thread_pool_determinism(tmp_path, monkeypatch):
    args = [
        "report",
        "--family", "ads:1,2,0",
        "--family", "ds2:2",
        "--count", "4",
        "--seed", "3",
    ]
    serial = tmp_path / "serial.json"
    threaded = tmp_path / "threaded.json"
    monkeypatch.setenv("ZMC_THREADS", "1")
    assert main(args + ["--out", str(serial)]) == 0
    monkeypatch.setenv("ZMC_THREADS", "4")
    assert main(args + ["--out", str(threaded)]) == 0
    assert serial.read_bytes() == threaded.read_bytes()


def test_sample_csv_format(capsys):
    code, out, _ = run(
        capsys,
        "sample", "--family", "ds1:1,2", "--count", "2", "--seed", "0",
        "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x1,x2,x3,x4,x5,x6,f_residual,constraint_residual,w"
    assert len(lines) == 3
