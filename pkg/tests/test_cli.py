import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from spectral_tau.cli import JobSpec, run
from spectral_tau.serialize import ParseError, parse_matrix_polynomial

DOCS = Path(__file__).resolve().parent.parent / "docs"
G1 = DOCS / "examples" / "hyperelliptic-g1.json"
THREE = DOCS / "examples" / "three-sheet-m1.json"


class TestParsing:
    def test_valid_instance(self):
        with open(G1) as fh:
            w = parse_matrix_polynomial(json.load(fh))
        assert (w.n, w.m) == (2, 2)

    def test_float_entry_rejected(self):
        data = {"n": 2, "m": 1, "coefficients": [[["1", "0"], ["0", "-1"]], [["0.5", "0"], ["0", "0"]]]}
        with pytest.raises(ParseError, match="floats rejected"):
            parse_matrix_polynomial(data)

    def test_nondiagonal_leading_rejected(self):
        data = {"n": 2, "m": 1, "coefficients": [[["1", "1"], ["0", "2"]], [["0", "0"], ["0", "0"]]]}
        with pytest.raises(ParseError, match="diagonal"):
            parse_matrix_polynomial(data)

    def test_shape_mismatch_rejected(self):
        data = {"n": 2, "m": 1, "coefficients": [[["1", "0"], ["0", "-1"]]]}
        with pytest.raises(ParseError, match="m\\+1"):
            parse_matrix_polynomial(data)


class TestRun:
    def test_curve_info(self):
        status, report = run(JobSpec("curve-info", str(G1)))
        assert status == 0
        assert report["genus"] == 1
        assert all(d["passed"] for d in report["diagnostics"])

    def test_correlators_single_index(self):
        status, report = run(JobSpec("correlators", str(THREE), indices="1,0;2,0"))
        assert status == 0
        assert report["value"] == "10"

    def test_correlators_tables(self):
        status, report = run(JobSpec("correlators", str(G1), kmax=1, max_n=3))
        assert status == 0
        assert any(t["N"] == 3 for t in report["tables"])

    def test_divisor(self):
        status, report = run(JobSpec("divisor", str(G1)))
        assert status == 0
        assert report["d_degree"] == report["expected_degree"] == 2
        assert len(report["points"]) == 2

    def test_jet(self):
        status, report = run(JobSpec("jet", str(THREE)))
        assert status == 0
        assert report["constraints_failed"] == []

    def test_missing_file_is_input_error(self):
        status, report = run(JobSpec("curve-info", "no-such-file.json"))
        assert status == 2
        assert report["errors"]

    def test_bad_thread_env(self, monkeypatch):
        monkeypatch.setenv("SPECTRAL_TAU_THREADS", "zero")
        status, report = run(JobSpec("curve-info", str(G1)))
        assert status == 2

    def test_thread_env_accepted(self, monkeypatch):
        monkeypatch.setenv("SPECTRAL_TAU_THREADS", "1")
        status, _ = run(JobSpec("curve-info", str(G1)))
        assert status == 0

    def test_kmax_cap_enforced(self):
        status, report = run(JobSpec("correlators", str(G1), kmax=99))
        assert status == 2
        assert "caps" in report["errors"][0]

    def test_verify_theta_success(self):
        job = JobSpec("verify-theta", str(G1), kmax=1, tol=1e-6)
        job.extra["kmax_by_n"] = {3: 1, 4: 0}
        status, report = run(job)
        assert status == 0
        assert report["success"] is True
        assert report["shift_used"] is not None


class TestDeterminism:
    def test_byte_identical_reports(self, tmp_path):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for out in (out1, out2):
            status, report = run(JobSpec("correlators", str(G1), output_path=None, kmax=1))
            text = json.dumps(report, indent=2, sort_keys=True)
            out.write_text(text)
        assert out1.read_bytes() == out2.read_bytes()

    def test_cli_process_determinism(self, tmp_path):
        cmd = [sys.executable, "-m", "spectral_tau.cli", "divisor", "--input", str(G1)]
        r1 = subprocess.run(cmd, capture_output=True, text=True)
        r2 = subprocess.run(cmd, capture_output=True, text=True)
        assert r1.returncode == 0
        assert r1.stdout == r2.stdout


class TestDocsExamples:
    def test_usage_commands_run(self):
        """Every CLI invocation in docs/USAGE.md must execute successfully."""
        text = (DOCS / "USAGE.md").read_text()
        cmds = re.findall(r"^spectral-tau (.+)$", text, flags=re.M)
        assert cmds
        for cmd in cmds:
            argv = cmd.replace("docs/", str(DOCS) + "/").split()
            # shell-quoted index argument
            argv = [a.strip('"') for a in argv]
            proc = subprocess.run(
                [sys.executable, "-m", "spectral_tau.cli", *argv],
                capture_output=True, text=True, cwd=str(DOCS.parent),
            )
            assert proc.returncode == 0, f"{cmd!r} failed: {proc.stderr}"
            json.loads(proc.stdout)
