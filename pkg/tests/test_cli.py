import json
import pathlib

import numpy as np
import pytest

from normtest.cli import main
from conftest import make_rng

IRIS = pathlib.Path(__file__).parent / "data" / "iris.csv"


def _write_normal_csv(path, n=60, d=2, seed=1):
    np.savetxt(path, make_rng(seed).standard_normal((n, d)), delimiter=",")
    return str(path)


class TestTestCommand:
    def test_json_report(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(
            [
                "test",
                "--input", str(IRIS), "--header",
                "--a", "0.5",
                "--reps", "400",
                "--seed", "7",
                "--format", "json",
                "--output", str(out),
                "--workers", "1",
            ]
        )
        assert code == 0
        report = json.loads(out.read_text())[0]
        assert report["n"] == 150 and report["d"] == 4 and report["a"] == 0.5
        assert 0.0 < report["p_value"] <= 1.0
        assert report["reject"] == (report["p_value"] <= 0.05)
        stdout = capsys.readouterr().out
        assert json.loads(stdout) == [report]

    def test_rerun_byte_identical(self, tmp_path):
        data = _write_normal_csv(tmp_path / "x.csv")
        outs = []
        for run in (1, 2):
            out = tmp_path / f"r{run}.json"
            main(
                ["test", "--input", data, "--a", "1.0", "--reps", "300",
                 "--seed", "3", "--format", "json", "--output", str(out), "--workers", "2"]
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_workers_env_override_does_not_change_values(self, tmp_path, monkeypatch):
        data = _write_normal_csv(tmp_path / "x.csv")
        out1 = tmp_path / "a.json"
        main(["test", "--input", data, "--a", "1.0", "--reps", "200",
              "--seed", "3", "--format", "json", "--output", str(out1), "--workers", "1"])
        monkeypatch.setenv("NORMTEST_THREADS", "4")
        out2 = tmp_path / "b.json"
        main(["test", "--input", data, "--a", "1.0", "--reps", "200",
              "--seed", "3", "--format", "json", "--output", str(out2), "--workers", "1"])
        assert out1.read_bytes() == out2.read_bytes()

    def test_table_format_prints_aligned(self, tmp_path, capsys):
        data = _write_normal_csv(tmp_path / "x.csv", n=30, d=1)
        main(["test", "--input", data, "--a", "0.5", "--reps", "100", "--workers", "1"])
        out = capsys.readouterr().out
        assert "p_value" in out and "statistic" in out

    def test_missing_file_errors(self, capsys):
        assert main(["test", "--input", "/nonexistent.csv", "--a", "1"]) == 1
        assert "error:" in capsys.readouterr().err


class TestCritTable:
    def test_json_round_trip_and_rerun(self, tmp_path):
        out = tmp_path / "table.json"
        args = [
            "crit-table", "--d", "1", "--n", "15", "--a", "1.0", "--a", "2.0",
            "--reps", "500", "--seed", "11", "--format", "json", "--output", str(out),
            "--workers", "2",
        ]
        assert main(args) == 0
        first = out.read_bytes()
        obj = json.loads(first)
        assert {e["a"] for e in obj["entries"]} == {1.0, 2.0}
        # parse -> serialize -> parse fixed point
        from normtest import CriticalValueTable

        table = CriticalValueTable.from_json(first.decode())
        assert CriticalValueTable.from_json(table.to_json()).to_json() == table.to_json()
        assert main(args) == 0
        assert out.read_bytes() == first

    def test_inf_rows_via_limit_sampler(self, tmp_path, capsys):
        out = tmp_path / "table.csv"
        code = main(
            ["crit-table", "--d", "1", "--n", "inf", "--a", "1.0", "--m", "80",
             "--ell", "4000", "--format", "csv", "--output", str(out), "--workers", "1"]
        )
        assert code == 0
        text = out.read_text()
        assert text.splitlines()[0] == "d,n,a,alpha,quantile,replications,seed"
        assert ",inf," in text.splitlines()[1]

    def test_checkpoint_directory(self, tmp_path):
        out = tmp_path / "t.json"
        chk = tmp_path / "state"
        args = ["crit-table", "--d", "1", "--n", "14", "--a", "1.0", "--reps", "300",
                "--seed", "6", "--format", "json", "--output", str(out),
                "--checkpoint", str(chk), "--workers", "1"]
        assert main(args) == 0
        first = out.read_bytes()
        assert any(chk.iterdir())  # state file written
        assert main(args) == 0  # rerun resumes from the saved state
        assert out.read_bytes() == first

    def test_invalid_run_config(self, tmp_path):
        data = _write_normal_csv(tmp_path / "x.csv", n=20, d=1)
        assert main(["test", "--input", data, "--a", "1.0", "--reps", "0"]) == 1
        assert main(["test", "--input", data, "--a", "1.0", "--alpha", "1.5"]) == 1

    def test_resume_reuses_cells(self, tmp_path):
        out = tmp_path / "table.json"
        base = ["crit-table", "--d", "1", "--a", "1.0", "--reps", "400",
                "--seed", "2", "--format", "json", "--output", str(out), "--resume",
                "--workers", "1"]
        main(base + ["--n", "12"])
        first = json.loads(out.read_text())
        main(base + ["--n", "12", "--n", "16"])
        second = json.loads(out.read_text())
        assert len(second["entries"]) == 2
        e12 = [e for e in second["entries"] if e["n"] == 12][0]
        assert e12 == first["entries"][0]


class TestPowerCommand:
    def test_small_study(self, tmp_path):
        out = tmp_path / "power.csv"
        code = main(
            [
                "power", "--alt", "std", "--alt", "uniform",
                "--d", "1", "--n", "20", "--a", "1.0",
                "--competitor", "bhep:1",
                "--alpha", "0.05", "--reps", "400", "--crit-reps", "2000",
                "--seed", "5", "--format", "csv", "--output", str(out), "--workers", "2",
            ]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "alternative,t:1,bhep:1"
        null_row = dict(zip(lines[0].split(","), lines[1].split(",")))
        assert null_row["alternative"] == "std"
        assert 1.0 < float(null_row["t:1"]) < 10.0  # ~5% nominal size
        rerun = tmp_path / "power2.csv"
        main(
            [
                "power", "--alt", "std", "--alt", "uniform",
                "--d", "1", "--n", "20", "--a", "1.0",
                "--competitor", "bhep:1",
                "--alpha", "0.05", "--reps", "400", "--crit-reps", "2000",
                "--seed", "5", "--format", "csv", "--output", str(rerun), "--workers", "1",
            ]
        )
        assert rerun.read_bytes() == out.read_bytes()


class TestDeltaCi:
    def test_json_round_trip(self, tmp_path, capsys):
        data = _write_normal_csv(tmp_path / "x.csv", n=80, d=1, seed=9)
        out = tmp_path / "ci.json"
        code = main(
            ["delta-ci", "--input", data, "--a", "0.5", "--alpha", "0.05",
             "--format", "json", "--output", str(out)]
        )
        assert code == 0
        obj = json.loads(out.read_text())
        est, ci = obj["estimate"], obj["confidence_interval"]
        assert ci["lower"] <= est["delta_hat"] <= ci["upper"]
        assert json.loads(json.dumps(obj, indent=2, sort_keys=True)) == obj


class TestValidate:
    def test_exit_codes(self, tmp_path):
        near_normal = _write_normal_csv(tmp_path / "normal.csv", n=500, d=1, seed=13)
        # delta0 well above the tiny estimated distance: reject (= validated)
        assert main(
            ["validate", "--input", near_normal, "--a", "1.0", "--delta0", "0.5",
             "--format", "json"]
        ) == 2
        # uniform data is far from normal: retain against a tiny delta0
        rng = make_rng(14)
        far = tmp_path / "uniform.csv"
        np.savetxt(far, rng.uniform(-np.sqrt(3), np.sqrt(3), size=(400, 1)), delimiter=",")
        assert main(
            ["validate", "--input", str(far), "--a", "0.1", "--delta0", "0.05",
             "--format", "json"]
        ) == 0
        assert main(["validate", "--input", "/missing.csv", "--a", "1", "--delta0", "0.1"]) == 1


class TestLimitQuantileCommand:
    def test_runs_small(self, tmp_path):
        out = tmp_path / "lq.csv"
        code = main(
            ["limit-quantile", "--d", "1", "--a", "1.0", "--m", "60", "--ell", "3000",
             "--seed", "3", "--format", "csv", "--output", str(out)]
        )
        assert code == 0
        header, row = out.read_text().splitlines()
        assert header.startswith("d,a,alpha,m,ell,seed,quantile")
        assert float(row.split(",")[-1]) > 0.5
