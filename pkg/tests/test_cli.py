import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from fidelity_balance.cli import main
from fidelity_balance.frontier import extremal_operation
from fidelity_balance.operations import (
    QuantumOperation,
    dumps_operation,
    identity_operation,
    loads_operation,
    projective_operation,
    random_operation,
)


def write_op(path, op):
    path.write_text(dumps_operation(op))
    return str(path)


def parse_report(text):
    out = {}
    for token in text.split():
        if "=" in token:
            key, value = token.split("=", 1)
            try:
                out[key] = float(value)
            except ValueError:
                out[key] = value
    return out


class TestValidate:
    def test_identity(self, tmp_path, capsys):
        assert main(["validate", write_op(tmp_path / "id.json", identity_operation(2))]) == 0
        assert capsys.readouterr().out.startswith("residual 0.000e+00")

    def test_incomplete(self, tmp_path):
        path = write_op(tmp_path / "bad.json", QuantumOperation((0.9 * np.eye(2),)))
        assert main(["validate", path]) == 1

    def test_tolerance_flag(self, tmp_path):
        path = write_op(tmp_path / "bad.json", QuantumOperation((0.9 * np.eye(2),)))
        assert main(["validate", path, "--tol", "0.2"]) == 0

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"dim": 2,\n "kraus": [}')
        assert main(["validate", str(path)]) == 2
        assert "line 2 column" in capsys.readouterr().err

    def test_shape_error_has_context(self, tmp_path, capsys):
        path = tmp_path / "shape.json"
        path.write_text('{"dim": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0]]]]}')
        assert main(["validate", str(path)]) == 2
        assert "kraus[0][1]" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["validate", str(tmp_path / "nope.json")]) == 2


class TestFidelity:
    def test_projective(self, tmp_path, capsys):
        assert main(["fidelity", write_op(tmp_path / "p.json", projective_operation(2))]) == 0
        r = parse_report(capsys.readouterr().out)
        assert r["F"] == pytest.approx(2 / 3, abs=1e-11)
        assert r["G"] == pytest.approx(2 / 3, abs=1e-11)
        assert abs(r["slack"]) < 1e-10

    def test_identity(self, tmp_path, capsys):
        assert main(["fidelity", write_op(tmp_path / "i.json", identity_operation(2))]) == 0
        r = parse_report(capsys.readouterr().out)
        assert (r["F"], r["G"]) == pytest.approx((1, 0.5), abs=1e-11)
        assert abs(r["slack"]) < 1e-10

    def test_with_mc(self, tmp_path, capsys):
        op = random_operation(3, 4, 7)
        assert main(["fidelity", write_op(tmp_path / "r.json", op), "--mc-samples", "100000", "--seed", "7"]) == 0
        out = capsys.readouterr().out
        r = parse_report(out)
        lines = {line.split("=")[0]: line for line in out.splitlines()}
        for name in ("F", "G"):
            se = float(lines[f"{name}_mc"].split("+-")[1])
            assert abs(r[f"{name}_mc"] - r[name]) <= 4 * se

    def test_invalid_operation(self, tmp_path):
        path = write_op(tmp_path / "bad.json", QuantumOperation((0.9 * np.eye(2),)))
        assert main(["fidelity", path]) == 1


class TestFrontier:
    def read(self, path):
        with open(path) as fh:
            rows = list(csv.reader(fh))
        return rows[0], [tuple(float(x) for x in row) for row in rows[1:]]

    def test_two_points(self, tmp_path):
        out = tmp_path / "c.csv"
        assert main(["frontier", "--dim", "2", "--points", "2", "--out", str(out)]) == 0
        header, rows = self.read(out)
        assert header == ["G", "F_max"]
        assert rows[0] == (0.5, 1.0)
        assert rows[1] == pytest.approx((2 / 3, 2 / 3), abs=1e-12)

    def test_twelve_significant_digits(self, tmp_path):
        out = tmp_path / "c.csv"
        main(["frontier", "--dim", "3", "--points", "5", "--out", str(out)])
        for line in out.read_text().splitlines()[1:]:
            for field in line.split(","):
                assert len(field.replace(".", "").replace("-", "").lstrip("0")) <= 12

    def test_ellipse_residual_report(self, tmp_path, capsys):
        assert main(["frontier", "--dim", "8", "--points", "101", "--out", str(tmp_path / "c.csv")]) == 0
        line = [l for l in capsys.readouterr().out.splitlines() if l.startswith("max |ellipse")][0]
        assert float(line.split()[-1]) < 1e-10

    def test_sorted_ascending(self, tmp_path):
        out = tmp_path / "c.csv"
        main(["frontier", "--dim", "4", "--points", "50", "--out", str(out)])
        _, rows = self.read(out)
        G = [r[0] for r in rows]
        assert G == sorted(G)

    def test_bad_dim(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["frontier", "--dim", "1", "--out", str(tmp_path / "c.csv")])
        assert exc.value.code == 2

    def test_unwritable(self, tmp_path):
        assert main(["frontier", "--dim", "2", "--out", str(tmp_path / "no" / "c.csv")]) == 2


class TestExtremal:
    def test_projectors(self, tmp_path):
        out = tmp_path / "e.json"
        assert main(["extremal", "--dim", "2", "--g", "2", "--out", str(out)]) == 0
        op = loads_operation(out.read_text())
        np.testing.assert_array_equal(op.kraus[0], np.diag([1, 0]))
        np.testing.assert_array_equal(op.kraus[1], np.diag([0, 1]))

    def test_identity_halves(self, tmp_path):
        out = tmp_path / "e.json"
        assert main(["extremal", "--dim", "2", "--g", "1", "--out", str(out)]) == 0
        for a in loads_operation(out.read_text()).kraus:
            np.testing.assert_allclose(a, np.eye(2) / np.sqrt(2), atol=1e-16)

    def test_round_trip_and_saturation(self, tmp_path, capsys):
        out = tmp_path / "e.json"
        assert main(["extremal", "--dim", "3", "--g", "2", "--out", str(out)]) == 0
        for a, b in zip(loads_operation(out.read_text()).kraus, extremal_operation(3, 2).kraus):
            np.testing.assert_array_equal(a, b)
        assert main(["validate", str(out)]) == 0
        capsys.readouterr()
        assert main(["fidelity", str(out)]) == 0
        assert abs(parse_report(capsys.readouterr().out)["slack"]) <= 1e-10

    def test_domain_error(self, tmp_path):
        assert main(["extremal", "--dim", "2", "--g", "3", "--out", str(tmp_path / "e.json")]) == 2

    def test_json_schema(self, tmp_path):
        out = tmp_path / "e.json"
        main(["extremal", "--dim", "2", "--g", "1.5", "--out", str(out)])
        data = json.loads(out.read_text())
        assert set(data) == {"dim", "kraus"} and data["dim"] == 2
        assert all(len(entry) == 2 for mat in data["kraus"] for row in mat for entry in row)


class TestTeleport:
    def test_mu0(self, capsys):
        assert main(["teleport", "--dim", "2", "--mu0", "0.9"]) == 0
        r = parse_report(capsys.readouterr().out)
        assert r["F_tele"] == pytest.approx((1 + (0.9 + np.sqrt(0.19)) ** 2) / 3, abs=1e-11)
        assert r["G_tele"] == pytest.approx(1.81 / 3, abs=1e-11)
        assert abs(r["slack"]) < 1e-10

    def test_maximal(self, capsys):
        assert main(["teleport", "--dim", "4", "--schmidt", "0.5,0.5,0.5,0.5"]) == 0
        r = parse_report(capsys.readouterr().out)
        assert r["F_tele"] == pytest.approx(1, abs=1e-11)
        assert r["G_tele"] == pytest.approx(0.25, abs=1e-11)

    def test_sorting(self, capsys):
        assert main(["teleport", "--dim", "2", "--schmidt", "0.3,0.9"]) == 0
        r = parse_report(capsys.readouterr().out)
        assert float(r["mu"].split(",")[0]) == pytest.approx(0.9 / np.sqrt(0.9), abs=1e-11)

    @pytest.mark.parametrize("spec", ["0.5,-0.5", "a,b", "0,0", "0.5,0.5,0.5"])
    def test_invalid(self, spec):
        assert main(["teleport", "--dim", "2", "--schmidt", spec]) == 2

    def test_mu0_out_of_range(self):
        assert main(["teleport", "--dim", "2", "--mu0", "0.5"]) == 2

    def test_requires_one_source(self):
        with pytest.raises(SystemExit) as exc:
            main(["teleport", "--dim", "2"])
        assert exc.value.code == 2


class TestMcCheck:
    def test_identity(self, tmp_path, capsys):
        path = write_op(tmp_path / "i.json", identity_operation(3))
        assert main(["mc-check", "--input", path, "--samples", "5000", "--seed", "0"]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_extremal(self, tmp_path):
        path = write_op(tmp_path / "e.json", extremal_operation(2, 1.5))
        assert main(["mc-check", "--input", path, "--samples", "1000000", "--seed", "1"]) == 0

    def test_worker_independent(self, tmp_path, capsys):
        path = write_op(tmp_path / "r.json", random_operation(4, 3, 2))
        args = ["mc-check", "--input", path, "--samples", "100000", "--seed", "5"]
        main(args + ["--workers", "1"])
        one = capsys.readouterr().out
        main(args + ["--workers", "8"])
        assert capsys.readouterr().out == one

    def test_mismatch_detected(self, tmp_path, monkeypatch):
        # an operation file whose closed form is perturbed must fail the check
        import fidelity_balance.cli as cli

        monkeypatch.setattr(cli, "operation_fidelity", lambda op: 0.5)
        path = write_op(tmp_path / "i.json", projective_operation(2))
        assert main(["mc-check", "--input", path, "--samples", "100000", "--seed", "0"]) == 1


def test_module_entry_point(tmp_path):
    out = tmp_path / "c.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "fidelity_balance", "frontier", "--dim", "2", "--points", "3", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().startswith("G,F_max\n")
