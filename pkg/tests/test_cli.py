"""Command-line interface: output schemas, exit codes, reproducibility."""

import csv
import io
import json
import math

import pytest

from threshcov import unknown_coverage, IntervalSpec, VarianceMode, reference_setup
from threshcov.cli import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    main,
)


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestTable:
    def test_fast_table_layout(self, capsys):
        rc, out, err = run_cli(capsys, "table1", "--fast")
        assert rc == EXIT_OK and err == ""
        header, rows = parse_csv(out)
        assert header == ["estimator", "eta", "length", "lower_bound",
                          "min_coverage", "upper_bound"]
        assert [r[0] for r in rows] == ["ls", "hard", "hard", "asoft", "asoft"]
        by_key = {(r[0], r[1]): r for r in rows}
        assert float(by_key[("ls", "")][2]) == pytest.approx(
            0.406444675623367, abs=1e-9)
        assert float(by_key[("hard", "0.05")][2]) == pytest.approx(
            0.43404986963978825, abs=1e-9)
        assert float(by_key[("asoft", "0.5")][2]) == pytest.approx(
            0.8207853917670102, abs=1e-9)
        # fast mode leaves the slow cells blank
        assert all(r[4] == "" for r in rows if r[0] != "ls")

    def test_check_reports_reference_mismatches(self, capsys):
        rc, out, err = run_cli(capsys, "table1", "--fast", "--check")
        assert rc == EXIT_CHECK_FAILED
        failures = [line for line in err.strip().splitlines() if line]
        assert len(failures) == 2
        assert all("length asoft" in line for line in failures)

    def test_byte_identical_reruns(self, capsys, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        rc1, _, _ = run_cli(capsys, "table1", "--fast", "--out", str(out_a))
        rc2, _, _ = run_cli(capsys, "table1", "--fast", "--out", str(out_b))
        assert rc1 == rc2 == EXIT_OK
        assert out_a.read_bytes() == out_b.read_bytes()


class TestFigure:
    def test_density_panel(self, capsys):
        rc, out, err = run_cli(capsys, "figure", "--which", "pdfH")
        assert rc == EXIT_OK
        header, rows = parse_csv(out)
        assert header == ["x", "density", "atom_mass"]
        assert len(rows) == 801
        assert float(rows[0][0]) == -4.0 and float(rows[-1][0]) == 4.0
        atoms = {r[2] for r in rows}
        assert len(atoms) == 1
        assert float(atoms.pop()) == pytest.approx(0.23539522321120737, abs=1e-9)
        mid = rows[400]
        assert float(mid[0]) == 0.0 and float(mid[1]) == 0.0

    def test_density_panel_nonzero_component(self, capsys):
        rc, out, _ = run_cli(capsys, "figure", "--which", "pdfS",
                             "--theta", "0.16")
        assert rc == EXIT_OK
        _, rows = parse_csv(out)
        assert all(float(r[2]) == 0.0 for r in rows)
        assert max(float(r[1]) for r in rows) > 0.1

    def test_coverage_panel(self, capsys):
        rc, out, _ = run_cli(capsys, "figure", "--which", "covH")
        assert rc == EXIT_OK
        header, rows = parse_csv(out)
        assert header == ["theta", "coverage"]
        assert len(rows) == 301
        values = [float(r[1]) for r in rows]
        assert min(values) == pytest.approx(0.9592, abs=2e-3)
        rc, out, _ = run_cli(capsys, "figure", "--which", "covAS")
        _, rows = parse_csv(out)
        assert min(float(r[1]) for r in rows) == pytest.approx(0.9574, abs=2e-3)

    def test_unknown_panel(self):
        # rejected by argument parsing, same exit status as other usage errors
        with pytest.raises(SystemExit) as exc:
            main(["figure", "--which", "pdfX"])
        assert exc.value.code == EXIT_USAGE

    def test_reruns_identical(self, capsys, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        run_cli(capsys, "figure", "--which", "pdfAS", "--theta", "0.16",
                "--out", str(out_a))
        run_cli(capsys, "figure", "--which", "pdfAS", "--theta", "0.16",
                "--out", str(out_b))
        assert out_a.read_bytes() == out_b.read_bytes()


class TestInterval:
    def test_default_request(self, capsys):
        rc, out, _ = run_cli(capsys, "interval")
        assert rc == EXIT_OK
        payload = json.loads(out)
        assert set(payload) == {"kind", "mode", "alpha", "half_length",
                                "lower_bound", "upper_bound"}
        assert payload["kind"] == "hard" and payload["mode"] == "estimated"
        assert payload["half_length"] == pytest.approx(0.43404986963978825,
                                                       abs=1e-9)
        assert payload["lower_bound"] == pytest.approx(0.95, abs=1e-9)
        assert payload["upper_bound"] > payload["lower_bound"]

    def test_wide_threshold_request(self, capsys):
        rc, out, _ = run_cli(capsys, "interval", "--kind", "hard",
                             "--eta", "0.5")
        payload = json.loads(out)
        assert rc == EXIT_OK
        assert payload["half_length"] == pytest.approx(0.8229652483480663,
                                                       abs=1e-9)

    def test_known_variance_request(self, capsys):
        rc, out, _ = run_cli(capsys, "interval", "--kind", "soft",
                             "--mode", "known")
        payload = json.loads(out)
        assert rc == EXIT_OK
        assert payload["half_length"] == pytest.approx(0.32478571063937384,
                                                       abs=1e-9)

    def test_bad_alpha(self, capsys):
        rc, _, err = run_cli(capsys, "interval", "--alpha", "1.5")
        assert rc == EXIT_USAGE
        assert "error:" in err

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "interval.json"
        rc, out, _ = run_cli(capsys, "interval", "--out", str(target))
        assert rc == EXIT_OK and out == ""
        payload = json.loads(target.read_text())
        assert payload["mode"] == "estimated"


class TestCoverageCurve:
    def test_fixed_half_length(self, capsys):
        rc, out, _ = run_cli(capsys, "coverage_curve", "--kind", "soft",
                             "--a", "0.42")
        assert rc == EXIT_OK
        header, rows = parse_csv(out)
        assert header == ["theta", "coverage"]
        assert len(rows) == 301
        setup = reference_setup()
        spec = IntervalSpec(0.42, 0.42, VarianceMode.ESTIMATED)
        expected = unknown_coverage("soft", 0.0, 1.0, spec, setup)
        assert float(rows[0][1]) == pytest.approx(expected, abs=1e-8)
        assert float(rows[0][0]) == 0.0 and float(rows[-1][0]) == 3.0


class TestLimitCheck:
    def test_fast_report(self, capsys):
        rc, out, _ = run_cli(capsys, "limit_check", "--fast")
        assert rc == EXIT_OK
        payload = json.loads(out)
        assert payload["all_pass"] is True
        suites = payload["suites"]
        assert len(suites) == 7
        names = {s["suite"] for s in suites}
        assert "conservative-hard" in names
        assert "consistent-soft" in names
        assert "conservative-hard-vanishing" in names
        for suite in suites:
            assert suite["sample_sizes"] == [5000]
            assert len(suite["gaps"]) == 1
            assert suite["final_gap"] <= suite["threshold"]
            assert suite["pass"] is True


class TestArgHandling:
    def test_missing_command(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["nonsense"])
        assert exc.value.code == 2

    def test_bad_kind_label(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["interval", "--kind", "ridge"])
        assert exc.value.code == 2
