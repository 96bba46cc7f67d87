"""Command-line interface: formats, determinism, exit codes."""
import csv
import io
import json

import numpy as np
import pytest

from g2ell.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCurveInfo:
    def test_derived_constants(self, capsys):
        code, out, _ = run_cli(capsys, "curve", "info", "--alpha", "2", "--beta", "3")
        assert code == 0
        doc = json.loads(out)
        assert doc["e1"] == [-5.0, 0.0]
        assert abs(doc["e2"][0] - 1.4) < 1e-12 and doc["e2"][1] == 0.0
        assert doc["lambda8"] == [1296.0, 0.0]
        assert abs(doc["E1_third_root"][0] - 1.0 / 25.0) < 1e-14
        assert abs(doc["E2_third_root"][0] - 25.0 / 49.0) < 1e-14

    def test_invalid_parameters_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "curve", "info", "--alpha", "2", "--beta", "1")
        assert code == 2
        assert "beta" in err

    def test_e_parameterization(self, capsys):
        code, out, _ = run_cli(capsys, "curve", "info", "--e1", "-5", "--e2", "1.4")
        assert code == 0
        doc = json.loads(out)
        alpha = complex(*doc["alpha"])
        assert abs(alpha**2 - 4.0) < 1e-10


class TestPeriods:
    def test_json_with_humbert(self, capsys):
        code, out, _ = run_cli(capsys, "periods", "--alpha", "2", "--beta", "3")
        assert code == 0
        doc = json.loads(out)
        assert "tau" in doc and "humbert" in doc
        assert doc["humbert"]["delta"] == 4
        tau = np.array([[complex(*c) for c in row] for row in doc["tau"]])
        assert np.max(np.abs(tau - tau.T)) < 1e-9


class TestEval:
    def test_wp_matches_library(self, capsys, ctx23):
        code, out, _ = run_cli(
            capsys, "eval", "wp", "--alpha", "2", "--beta", "3", "--jk", "11",
            "--u", "0.1,0.02,0.05,-0.01",
        )
        assert code == 0
        doc = json.loads(out)
        want = ctx23.sig_v.wp((1, 1), np.array([0.1 + 0.02j, 0.05 - 0.01j]))
        assert abs(complex(*doc["value"]) - want) < 1e-9 * max(1.0, abs(want))

    def test_sn_identities(self, capsys):
        code, out, _ = run_cli(
            capsys, "eval", "sn", "--alpha", "2", "--beta", "3", "--i", "1", "--v", "0.3,0.1"
        )
        assert code == 0
        doc = json.loads(out)
        sn, cn = complex(*doc["sn"]), complex(*doc["cn"])
        assert abs(sn**2 + cn**2 - 1.0) < 1e-9


class TestVerify:
    def test_fundamental_passes(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--alpha", "2", "--beta", "3",
            "--suite", "fundamental", "--samples", "8", "--seed", "42",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["pass"] is True
        names = [r["name"] for r in doc["suites"]["fundamental"]]
        assert len(names) == 6

    def test_negative_control(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--alpha", "2", "--beta", "3",
            "--suite", "fundamental", "--samples", "20", "--seed", "42",
            "--perturb-lambda4", "1e-3",
        )
        assert code == 1
        doc = json.loads(out)
        assert doc["pass"] is False

    def test_determinism(self, capsys):
        args = ("verify", "--alpha", "2", "--beta", "3", "--suite", "humbert", "--seed", "7")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2


class TestCSVOutputs:
    def test_kummer_csv(self, capsys):
        code, out, _ = run_cli(
            capsys, "kummer", "--alpha", "2", "--beta", "3", "--samples", "4", "--seed", "3"
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][:4] == ["u1_re", "u1_im", "u3_re", "u3_im"]
        assert "Z1_re" in rows[0] and "Z3_im" in rows[0]
        assert len(rows) == 5

    def test_kdv_csv_residuals_small(self, capsys):
        code, out, _ = run_cli(
            capsys, "kdv", "--alpha", "2", "--beta", "3", "--samples", "4", "--seed", "3"
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][-3:] == ["r_flow", "r_mixed", "r_compat"]
        for row in rows[1:]:
            assert float(row[-3]) < 1e-5
            assert float(row[-2]) < 1e-5

    def test_csv_determinism(self, capsys):
        args = ("kummer", "--alpha", "2", "--beta", "3", "--samples", "3", "--seed", "11")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2
