import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from scarf.cli import format_float, json_dumps, main


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args):
    return runner.invoke(main, args, catch_exceptions=False)


class TestSerialization:
    def test_float_format_fixed_17_digits(self):
        assert format_float(30.842513753404244) == "30.842513753404244"
        assert format_float(0.1) == "0.10000000000000001"
        assert format_float(2.0) == "2"
        with pytest.raises(ValueError):
            format_float(float("nan"))

    def test_json_round_trips(self):
        payload = {"a": 1, "b": [0.1, True, None], "c": {"d": "x"}, "e": []}
        text = json_dumps(payload)
        assert json.loads(text) == {"a": 1, "b": [0.1, True, None],
                                    "c": {"d": "x"}, "e": []}


class TestSpectrumCommand:
    def test_bound_json(self, runner):
        result = invoke(runner, ["spectrum", "--s", "2", "--n-max", "2",
                                 "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["regime"] == "bound_states"
        assert [lv["energy"] for lv in payload["levels"]] == pytest.approx(
            [30.8425138, 60.4513270, 99.9297446], abs=5e-7)
        assert all(lv["edge"] is None for lv in payload["levels"])

    def test_band_json_has_widths_and_gaps(self, runner):
        result = invoke(runner, ["spectrum", "--s", "0.4", "--n-max", "1"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        energies = sorted(lv["energy"] for lv in payload["levels"])
        assert energies == pytest.approx(
            [0.04934802, 3.99718978, 5.97111066, 17.81463594], abs=5e-7)
        assert len(payload["bands"]["widths"]) == 2
        assert len(payload["bands"]["gaps"]) == 1

    def test_free_particle_gap_is_zero(self, runner):
        result = invoke(runner, ["spectrum", "--s", "0.5", "--n-max", "1"])
        payload = json.loads(result.output)
        assert payload["regime"] == "free_particle"
        assert payload["bands"]["gaps"][0]["gap"] == 0.0

    def test_csv_format(self, runner):
        result = invoke(runner, ["spectrum", "--s", "2", "--n-max", "1",
                                 "--format", "csv"])
        lines = result.output.split("\n")
        assert lines[0] == "n,edge,lambda,energy,nu1,nu2"
        assert len(lines) == 4 and lines[3] == ""  # 2 rows + trailing LF
        assert lines[1].startswith("0,,2.5,30.842513753404244,")

    def test_invalid_s_exits_2(self, runner):
        for bad in ("-1", "0", "nan"):
            result = invoke(runner, ["spectrum", "--s", bad])
            assert result.exit_code == 2

    def test_missing_s_exits_2(self, runner):
        result = invoke(runner, ["spectrum"])
        assert result.exit_code == 2

    def test_unwritable_out_exits_3(self, runner):
        result = invoke(runner, ["spectrum", "--s", "2",
                                 "--out", "/nonexistent-dir/x.json"])
        assert result.exit_code == 3

    def test_bands_alias_requires_band_regime(self, runner):
        assert invoke(runner, ["bands", "--s", "2"]).exit_code == 2
        result = invoke(runner, ["bands", "--s", "0.4", "--n-max", "0"])
        assert result.exit_code == 0
        assert json.loads(result.output)["regime"] == "bands"

    def test_config_file_precedence(self, runner, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"s": 2.0, "n_max": 2}))
        result = invoke(runner, ["spectrum", "--config", str(cfg)])
        assert len(json.loads(result.output)["levels"]) == 3
        # explicit flag beats the config file
        result = invoke(runner, ["spectrum", "--config", str(cfg), "--n-max", "0"])
        assert len(json.loads(result.output)["levels"]) == 1

    def test_unknown_config_key_exits_2(self, runner, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"s": 2.0, "bogus": 1}))
        assert invoke(runner, ["spectrum", "--config", str(cfg)]).exit_code == 2

    def test_config_precedence_for_renamed_params(self, runner, tmp_path):
        # --n maps to a renamed click parameter; the flag must still win
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"s": 2.0, "n": 0}))
        result = invoke(runner, ["wavefunction", "--config", str(cfg),
                                 "--n", "1", "--samples", "16"])
        assert json.loads(result.output)["levels"][0]["n"] == 1


class TestWavefunctionCommand:
    def test_csv_output(self, runner, tmp_path):
        out = tmp_path / "psi.csv"
        result = invoke(runner, ["wavefunction", "--s", "2", "--n", "0",
                                 "--samples", "512", "--format", "csv",
                                 "--out", str(out)])
        assert result.exit_code == 0
        raw = out.read_bytes()
        assert b"\r" not in raw  # LF only
        lines = raw.decode().splitlines()
        assert lines[0] == "x,V,psi,psi_squared"
        assert len(lines) == 513
        psis = [float(line.split(",")[2]) for line in lines[1:]]
        assert all(p > 0 for p in psis)  # nodeless ground state
        assert max(psis) == pytest.approx(psis[255], rel=1e-3)

    def test_odd_state_changes_sign_at_midpoint(self, runner):
        result = invoke(runner, ["wavefunction", "--s", "0.4", "--n", "1",
                                 "--edge", "lower", "--samples", "64",
                                 "--format", "csv"])
        rows = result.output.splitlines()[1:]
        psis = [float(r.split(",")[2]) for r in rows]
        assert psis[0] * psis[-1] < 0

    def test_two_interior_sign_changes_for_n2(self, runner):
        result = invoke(runner, ["wavefunction", "--s", "2", "--n", "2",
                                 "--samples", "256", "--format", "csv"])
        psis = [float(r.split(",")[2]) for r in result.output.splitlines()[1:]]
        flips = sum(1 for p, q in zip(psis, psis[1:]) if p * q < 0)
        assert flips == 2

    def test_band_needs_edge(self, runner):
        assert invoke(runner, ["wavefunction", "--s", "0.4", "--n", "0"]).exit_code == 2

    def test_json_samples(self, runner):
        result = invoke(runner, ["wavefunction", "--s", "0.4", "--n", "0",
                                 "--edge", "upper", "--samples", "16"])
        payload = json.loads(result.output)
        assert len(payload["samples"]["x"]) == 16
        assert payload["levels"][0]["edge"] == "upper"


class TestVerifyCommand:
    def test_bound_all_pass(self, runner):
        result = invoke(runner, ["verify", "--s", "2", "--n-max", "1",
                                 "--oracle", "both", "--tol", "1e-8"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["summary"]["all_pass"] is True
        names = {c["name"] for c in payload["checks"]}
        assert "oracle_shooting_rel_err" in names
        assert "oracle_fd_rel_err" in names
        assert "residue_sum_rule_defect" in names

    def test_band_shooting(self, runner):
        result = invoke(runner, ["verify", "--s", "0.4", "--n-max", "0",
                                 "--oracle", "shooting"])
        assert result.exit_code == 0

    def test_unreachable_tolerance_exits_1(self, runner):
        result = invoke(runner, ["verify", "--s", "0.4", "--n-max", "1",
                                 "--oracle", "shooting", "--tol", "1e-15"])
        assert result.exit_code == 1
        payload = json.loads(result.stdout)  # report still written, data only
        failing = [c for c in payload["checks"] if not c["pass"]]
        assert failing and all("value" in c for c in failing)
        assert "FAILED" in result.stderr

    def test_fd_oracle_rejected_in_band_regime(self, runner):
        result = invoke(runner, ["verify", "--s", "0.4", "--oracle", "fd"])
        assert result.exit_code == 2

    def test_free_particle_regime(self, runner):
        result = invoke(runner, ["verify", "--s", "0.5", "--n-max", "1",
                                 "--oracle", "shooting"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["summary"]["all_pass"] is True

    def test_csv_report(self, runner):
        result = invoke(runner, ["verify", "--s", "2", "--n-max", "0",
                                 "--oracle", "shooting", "--format", "csv"])
        assert result.exit_code == 0
        header = result.output.splitlines()[0]
        assert header == "n,edge,name,value,threshold,pass,observed"

    def test_report_carries_observed_quantities(self, runner):
        result = invoke(runner, ["verify", "--s", "2", "--n-max", "0",
                                 "--oracle", "both"])
        checks = {c["name"]: c for c in json.loads(result.output)["checks"]}
        assert checks["oracle_shooting_rel_err"]["observed"] == pytest.approx(
            30.8425138, abs=5e-8)
        assert checks["oracle_fd_rel_err"]["observed"] == pytest.approx(
            30.8425138, rel=1e-4)
        assert checks["node_count_defect"]["observed"] == 0.0
        assert checks["boundary_exponent_defect"]["observed"] == pytest.approx(
            2.5, abs=1e-3)
        assert checks["b1_vs_closed_form"]["observed"] == pytest.approx(-0.75)


class TestTable1Command:
    def test_lambda_09(self, runner):
        result = invoke(runner, ["table1", "--s", "0.4", "--lambda", "0.9"])
        payload = json.loads(result.output)
        sets = {row["set"]: row for row in payload["sets"]}
        assert len(sets) == 4
        assert sets[1]["valid"] is True and sets[1]["n"] == pytest.approx(0.0, abs=1e-12)
        assert sets[2]["valid"] is False and sets[2]["n"] == pytest.approx(0.8)
        assert sets[3]["valid"] is False and sets[4]["valid"] is False
        assert "not valid" in sets[3]["remark"]

    def test_lambda_01(self, runner):
        payload = json.loads(invoke(
            runner, ["table1", "--s", "0.4", "--lambda", "0.1"]).output)
        valid = [row for row in payload["sets"] if row["valid"]]
        assert len(valid) == 1 and valid[0]["set"] == 2

    def test_bound_two_rows(self, runner):
        payload = json.loads(invoke(
            runner, ["table1", "--s", "2", "--lambda", "2.5"]).output)
        assert len(payload["sets"]) == 2
        assert sum(row["valid"] for row in payload["sets"]) == 1

    def test_lambda_from_level(self, runner):
        payload = json.loads(invoke(
            runner, ["table1", "--s", "0.4", "--n", "1", "--edge", "upper"]).output)
        assert payload["lambda"] == pytest.approx(1.9)

    def test_degenerate_s_exits_2(self, runner):
        assert invoke(runner, ["table1", "--s", "0.5", "--lambda", "1"]).exit_code == 2


class TestLogging:
    def test_diagnostics_go_to_stderr_only(self):
        import os
        cmd = [sys.executable, "-m", "scarf.cli", "spectrum", "--s", "2",
               "--n-max", "1"]
        env = dict(os.environ, SCARF_LOG="info")
        run = subprocess.run(cmd, capture_output=True, check=True, env=env)
        json.loads(run.stdout)  # data stream stays clean
        assert b"spectrum: s=2" in run.stderr

    def test_quiet_by_default(self, runner):
        result = invoke(runner, ["spectrum", "--s", "2", "--n-max", "0"])
        assert result.stderr == ""


class TestDeterminism:
    def test_spectrum_byte_identical(self, runner):
        args = ["spectrum", "--s", "0.4", "--n-max", "3", "--format", "json"]
        assert invoke(runner, args).output == invoke(runner, args).output

    def test_verify_byte_identical_subprocess(self):
        # full process isolation, the strongest reproducibility claim
        cmd = [sys.executable, "-m", "scarf.cli", "verify", "--s", "2",
               "--n-max", "1", "--oracle", "both", "--format", "json"]
        first = subprocess.run(cmd, capture_output=True, check=True)
        second = subprocess.run(cmd, capture_output=True, check=True)
        assert first.stdout == second.stdout
        assert first.stdout.strip()
