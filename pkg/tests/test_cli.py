"""CLI: tasks, exit codes, artifact determinism."""

import json

import numpy as np
import pytest

from confmap.cli import main
from confmap.geometry import domain_to_json, polygon
from conftest import HEXAGON

SQUARE = {
    "outer": [
        {"type": "line", "from": [0, 0], "to": [1, 0]},
        {"type": "line", "from": [1, 0], "to": [1, 1]},
        {"type": "line", "from": [1, 1], "to": [0, 1]},
        {"type": "line", "from": [0, 1], "to": [0, 0]},
    ],
    "quad": [0, 1, 2, 3],
}
BLOB = {"outer": [{"type": "trig", "coeffs": [[0, 0], [1, 0], [0, 0], [0.2, 0]]}]}


@pytest.fixture()
def square_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps(SQUARE))
    return str(path)


@pytest.fixture()
def blob_file(tmp_path):
    path = tmp_path / "blob.json"
    path.write_text(json.dumps(BLOB))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMapTask:
    def test_disk_map_report(self, capsys, blob_file):
        code, out, _ = run(capsys, "map", "--domain", blob_file,
                           "--target", "disk", "--tol", "1e-9")
        assert code == 0
        report = json.loads(out)
        assert report["target"] == "disk"
        assert report["residual"] < 1e-9
        assert {"dof", "version", "timing_ms"} <= set(report)

    def test_svg_artifact(self, capsys, blob_file, tmp_path):
        svg = tmp_path / "grid.svg"
        code, _, _ = run(capsys, "map", "--domain", blob_file,
                         "--svg", str(svg), "--tol", "1e-8")
        assert code == 0
        assert svg.read_text().startswith("<svg")


class TestModulusTask:
    def test_unit_square(self, capsys, square_file):
        code, out, _ = run(capsys, "modulus", "--domain", square_file,
                           "--target", "rectangle", "--tol", "1e-9")
        assert code == 0
        assert json.loads(out)["modulus"] == pytest.approx(1.0, abs=1e-8)


class TestProbeTask:
    def test_csv_columns(self, capsys, blob_file, tmp_path):
        pts = tmp_path / "pts.csv"
        pts.write_text("x,y\n0.1,0.1\n-0.2,0.3\n")
        code, out, _ = run(capsys, "probe", "--domain", blob_file,
                           "--points", str(pts), "--tol", "1e-8")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x_in,y_in,x_out,y_out,|f'|"
        assert len(lines) == 3


class TestCompressTask:
    def test_artifact_schema(self, capsys, blob_file, tmp_path):
        out_file = tmp_path / "approx.json"
        code, out, _ = run(capsys, "compress", "--domain", blob_file,
                           "--tol", "1e-8", "--out", str(out_file))
        assert code == 0
        obj = json.loads(out_file.read_text())
        assert set(obj) == {"direction", "support", "values", "weights",
                            "accuracy"}
        assert json.loads(out)["converged"] is True


class TestErrors:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "map", "--domain", "no-such-file.json")
        assert code == 2 and "error" in err

    def test_malformed_json_names_byte_offset(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"outer": [')
        code, _, err = run(capsys, "map", "--domain", str(bad))
        assert code == 2
        assert "byte" in err

    def test_geometry_error_exit_code(self, capsys, tmp_path):
        open_chain = tmp_path / "open.json"
        open_chain.write_text(json.dumps({"outer": [
            {"type": "line", "from": [0, 0], "to": [1, 0]},
            {"type": "line", "from": [1, 0], "to": [1, 1]},
        ]}))
        code, _, _ = run(capsys, "map", "--domain", str(open_chain))
        assert code == 3

    def test_tolerance_error_exit_code(self, capsys, tmp_path):
        hexfile = tmp_path / "hex.json"
        hexfile.write_text(json.dumps(domain_to_json(polygon(HEXAGON))))
        code, _, _ = run(capsys, "map", "--domain", str(hexfile),
                         "--tol", "1e-14", "--max-dof", "200")
        assert code == 5


class TestDeterminism:
    def strip_timing(self, text):
        report = json.loads(text)
        report.pop("timing_ms", None)
        return report

    def test_map_reports_identical(self, capsys, blob_file):
        _, out1, _ = run(capsys, "map", "--domain", blob_file, "--tol", "1e-8")
        _, out2, _ = run(capsys, "map", "--domain", blob_file, "--tol", "1e-8")
        assert self.strip_timing(out1) == self.strip_timing(out2)

    def test_svg_bytes_identical(self, capsys, square_file, tmp_path):
        svgs = []
        for k in (1, 2):
            svg = tmp_path / f"field{k}.svg"
            run(capsys, "field", "--domain", square_file,
                "--svg", str(svg), "--tol", "1e-8")
            svgs.append(svg.read_bytes())
        assert svgs[0] == svgs[1]
