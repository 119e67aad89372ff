"""End-to-end tests for the cmetric command-line interface."""

import json
import math
import subprocess
import sys

import pytest

from cmetric.cli import emit_csv, main

ATANH_HALF = 0.5493061443340549  # atanh(0.5), mpmath oracle


def _write(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


# -- distance ---------------------------------------------------------------------


def test_distance_command(tmp_path, capsys):
    spec = {"domain": {"kind": "unit_disk"}, "x": 0, "y": [0.5, 0]}
    code, out = _run(capsys, ["distance", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "distance"
    assert report["value"] == pytest.approx(ATANH_HALF, rel=1e-15)
    assert report["seed"] == 42 and report["sample_count"] == 1000


def test_distance_scaled_disk_and_polydisk(tmp_path, capsys):
    spec = {"domain": {"kind": "scaled_disk", "radius": 0.5}, "x": 0, "y": [0.25, 0]}
    code, out = _run(capsys, ["distance", "--input", _write(tmp_path / "a.json", spec)])
    assert code == 0 and json.loads(out)["value"] == pytest.approx(ATANH_HALF, rel=1e-15)
    spec = {
        "domain": {"kind": "polydisk", "radii": [1.0, 1.0]},
        "x": [[0, 0], [0, 0]],
        "y": [[0.5, 0], [0.25, 0]],
    }
    code, out = _run(capsys, ["distance", "--input", _write(tmp_path / "b.json", spec)])
    assert code == 0 and json.loads(out)["value"] == pytest.approx(ATANH_HALF, rel=1e-15)


def test_report_round_trips_through_json(tmp_path, capsys):
    spec = {"domain": {"kind": "unit_disk"}, "x": 0, "y": [0.5, 0]}
    code, out = _run(capsys, ["distance", "--input", _write(tmp_path / "d.json", spec)])
    assert json.dumps(json.loads(out), indent=2, sort_keys=True) + "\n" == out


# -- parse and error paths -----------------------------------------------------------


def test_malformed_json_is_a_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    out_path = tmp_path / "report.json"
    code = main(["distance", "--input", str(bad), "--out", str(out_path)])
    assert code == 2
    assert not out_path.exists()  # all-or-nothing output


def test_missing_field_is_a_parse_error(tmp_path, capsys):
    spec = {"domain": {"kind": "unit_disk"}, "x": 0}
    code, _ = _run(capsys, ["distance", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 2


def test_invalid_domain_spec_is_a_parse_error(tmp_path, capsys):
    spec = {"domain": {"kind": "scaled_disk", "radius": 1.5}, "x": 0, "y": 0.1}
    code, _ = _run(capsys, ["distance", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 2


def test_unknown_kind_is_a_parse_error(tmp_path, capsys):
    spec = {"domain": {"kind": "euclidean_ball", "radius": 1.0}, "x": 0, "y": 0.1}
    code, _ = _run(capsys, ["distance", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 2


def test_membership_failure_is_a_hypothesis_exit(tmp_path, capsys):
    spec = {"domain": {"kind": "unit_disk"}, "x": 0, "y": [1.0, 0]}
    code, _ = _run(capsys, ["distance", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 3


def test_unbounded_nesting_is_a_hypothesis_exit(tmp_path, capsys):
    spec = {"ambient": {"kind": "unit_disk"}, "inner": {"kind": "unit_disk"}}
    code, _ = _run(capsys, ["diameter", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 3


def test_numeric_blowup_is_a_numeric_exit(tmp_path, capsys):
    spec = {
        "ambient": {"kind": "unit_disk"},
        "inner": {"kind": "scaled_disk", "radius": 0.5},
        "map": {"kind": "polynomial", "coeffs": [[1e308, 1e308]]},
        "start": [0.9, 0],
        "tolerance": 1e-9,
    }
    code, _ = _run(capsys, ["solve", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 4


def test_nonconvergence_exit(tmp_path, capsys):
    spec = {
        "ambient": {"kind": "unit_disk"},
        "inner": {"kind": "affine_disk", "center": [0.25, 0], "radius": 0.55},
        "map": {"kind": "polynomial", "coeffs": [[0.25, 0.5]]},
        "start": [0, 0],
        "tolerance": 1e-12,
        "max_iter": 2,
    }
    code, _ = _run(capsys, ["solve", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 5


def test_csv_is_only_for_sweep(tmp_path, capsys):
    spec = {"domain": {"kind": "unit_disk"}, "x": 0, "y": 0.1}
    code, _ = _run(
        capsys,
        ["distance", "--input", _write(tmp_path / "d.json", spec), "--format", "csv"],
    )
    assert code == 2


def test_failed_run_leaves_existing_output_untouched(tmp_path):
    out_path = tmp_path / "report.json"
    out_path.write_text("sentinel", encoding="utf-8")
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2", encoding="utf-8")
    code = main(["distance", "--input", str(bad), "--out", str(out_path)])
    assert code == 2
    assert out_path.read_text(encoding="utf-8") == "sentinel"


# -- diameter / verify-nesting / solve ---------------------------------------------


def test_diameter_closed_form_report(tmp_path, capsys):
    spec = {"ambient": {"kind": "unit_disk"}, "inner": {"kind": "scaled_disk", "radius": 0.5}}
    code, out = _run(capsys, ["diameter", "--input", _write(tmp_path / "d.json", spec)])
    assert code == 0
    cert = json.loads(out)["certificate"]
    assert cert["M"] == "1.0986122886681098"
    assert float(cert["k"]) == 0.8
    assert cert["method"] == "closed_form" and cert["sample_count"] == 0


def test_diameter_sampled_report(tmp_path, capsys):
    spec = {
        "ambient": {"kind": "unit_disk"},
        "inner": {"kind": "scaled_disk", "radius": 0.5},
        "method": "sampled",
        "boundary_margin": 1e-5,
    }
    code, out = _run(
        capsys,
        [
            "diameter",
            "--input",
            _write(tmp_path / "d.json", spec),
            "--seed",
            "7",
            "--samples",
            "20000",
        ],
    )
    assert code == 0
    cert = json.loads(out)["certificate"]
    assert cert["method"] == "sampled"
    assert cert["sample_count"] == 20000 and cert["seed"] == 7
    assert float(cert["M"]) <= 1.0986122886681098 + 1e-12


def test_verify_nesting_report(tmp_path, capsys):
    spec = {"ambient": {"kind": "unit_disk"}, "inner": {"kind": "scaled_disk", "radius": 0.5}}
    code, out = _run(
        capsys,
        ["verify-nesting", "--input", _write(tmp_path / "v.json", spec), "--samples", "2000"],
    )
    assert code == 0
    report = json.loads(out)["report"]
    assert float(report["max_violation"]) <= 1e-10
    assert report["pairs_checked"] == 2000


def test_solve_report(tmp_path, capsys):
    spec = {
        "ambient": {"kind": "unit_disk"},
        "inner": {"kind": "affine_disk", "center": [0.25, 0], "radius": 0.55},
        "map": {"kind": "polynomial", "coeffs": [[0.25, 0.5]]},
        "start": [0, 0],
        "tolerance": 1e-11,
    }
    code, out = _run(capsys, ["solve", "--input", _write(tmp_path / "s.json", spec)])
    assert code == 0
    report = json.loads(out)
    assert abs(report["fixed_point"][0][0] - 0.5) <= 1e-10
    assert report["fixed_point"][0][1] == 0.0
    assert report["iterations"] == len(report["trace"])
    assert report["certified_bound"] <= 1e-11


def test_solve_accepts_composed_map_specs(tmp_path, capsys):
    mapping = {
        "kind": "compose",
        "outer": {"kind": "mobius", "a": [-0.3, 0]},
        "inner": {
            "kind": "compose",
            "outer": {"kind": "scale", "factor": 0.5},
            "inner": {"kind": "mobius", "a": [0.3, 0]},
        },
    }
    center = (-0.2 / 0.85 + 0.8 / 1.15) / 2
    spec = {
        "ambient": {"kind": "unit_disk"},
        "inner": {"kind": "affine_disk", "center": [center, 0], "radius": 0.47},
        "map": mapping,
        "start": [-0.5, 0.1],
        "tolerance": 1e-10,
    }
    code, out = _run(capsys, ["solve", "--input", _write(tmp_path / "s.json", spec)])
    assert code == 0
    b = json.loads(out)["fixed_point"][0]
    assert abs(complex(b[0], b[1]) - 0.3) <= 1e-9


# -- sweep --------------------------------------------------------------------------


def test_sweep_json_rows(tmp_path, capsys):
    spec = {"radii": [0.1, 0.5, 0.9]}
    code, out = _run(
        capsys,
        ["sweep", "--input", _write(tmp_path / "sw.json", spec), "--samples", "500"],
    )
    assert code == 0
    report = json.loads(out)
    rows = report["rows"]
    assert [row["config"] for row in rows] == ["000", "001", "002"]
    for row in rows:
        assert abs(row["k"] - math.tanh(row["M"])) <= 1e-15
        assert row["max_violation"] <= 1e-10
        assert row["pairs"] == 500


def test_sweep_csv_format_and_values(tmp_path, capsys):
    spec = {"radii": [0.5]}
    code, out = _run(
        capsys,
        [
            "sweep",
            "--input",
            _write(tmp_path / "sw.json", spec),
            "--samples",
            "200",
            "--format",
            "csv",
        ],
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "config,r,M,k,max_violation,pairs"
    assert lines[1].startswith("000,0.5,1.0986122886681098,0.8,")
    assert lines[1].endswith(",200")


def test_sweep_csv_is_deterministic(tmp_path):
    spec_path = _write(tmp_path / "sw.json", {"radii": [0.1, 0.3, 0.5, 0.7, 0.9]})
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out_path in (out_a, out_b):
        code = main(
            [
                "sweep",
                "--input",
                spec_path,
                "--seed",
                "42",
                "--samples",
                "300",
                "--format",
                "csv",
                "--out",
                str(out_path),
            ]
        )
        assert code == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    assert b"\r" not in out_a.read_bytes()  # LF line endings


def test_emit_csv_empty_report_is_header_only():
    assert emit_csv({"rows": []}) == "config,r,M,k,max_violation,pairs\n"


def test_emit_csv_same_report_is_byte_identical():
    report = {
        "rows": [
            {"config": "000", "r": 0.5, "M": 1.0986122886681098, "k": 0.8,
             "max_violation": -1.25e-3, "pairs": 10}
        ]
    }
    assert emit_csv(report).encode() == emit_csv(report).encode()


def test_module_entry_point_runs(tmp_path):
    spec_path = _write(tmp_path / "d.json", {"domain": {"kind": "unit_disk"}, "x": 0, "y": 0.25})
    proc = subprocess.run(
        [sys.executable, "-m", "cmetric", "distance", "--input", spec_path],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "distance"
