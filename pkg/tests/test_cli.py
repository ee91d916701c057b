import json
import math
import subprocess
import sys

import numpy as np
import pytest

from spinflip.cli import main

FAST = ["--steps", "2000"]


def read_rows(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


class TestDesignCommand:
    def test_writes_chirp_and_metadata(self, tmp_path, capsys):
        out = tmp_path / "chirp.csv"
        rc = main(["design", "--h", "0.08", "--tf", "100", "--samples", "1001", "--out", str(out)])
        assert rc == 0
        header, rows = read_rows(out)
        assert header == ["t_over_t0", "omega_t0"]
        assert len(rows) == 1001
        mid_t, mid_w = rows[500]
        assert float(mid_t) == 50.0
        assert abs(float(mid_w)) <= 1e-9
        meta = json.loads((tmp_path / "chirp.json").read_text())
        assert len(meta["coefficients"]) == 6
        assert meta["omega_start"] == -meta["omega_end"]

    def test_infeasible_exits_2_with_minimum(self, tmp_path, capsys):
        rc = main(["design", "--h", "0.05", "--tf", "60", "--out", str(tmp_path / "x.csv")])
        assert rc == 2
        assert "62.832" in capsys.readouterr().err

    def test_single_sample_is_usage_error(self, tmp_path, capsys):
        rc = main(["design", "--h", "0.08", "--tf", "100", "--samples", "1", "--out", str(tmp_path / "x.csv")])
        assert rc == 1

    def test_missing_required_flag(self, tmp_path, capsys):
        rc = main(["design", "--tf", "100", "--out", str(tmp_path / "x.csv")])
        assert rc == 1
        assert "--h" in capsys.readouterr().err

    def test_byte_reproducible(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["design", "--h", "0.08", "--tf", "100", "--out", str(a)])
        main(["design", "--h", "0.08", "--tf", "100", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestSimulateCommand:
    def test_headline_point(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        rc = main(
            ["simulate", "--h", "0.08", "--tf", "100", "--d", "0.01", "--alpha", "0", "--N", "1", "--out", str(out)]
        )
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["P"] == pytest.approx(0.994, abs=0.003)
        assert doc["spec"]["N"] == 1
        assert doc["integrator"]["step_count"] == 20000

    def test_five_pulse_point(self, tmp_path):
        out = tmp_path / "r.json"
        rc = main(
            ["simulate", "--h", "0.08", "--tf", "100", "--d", "0.01", "--N", "5", "--out", str(out)]
        )
        assert rc == 0
        assert json.loads(out.read_text())["P"] == pytest.approx(0.999, abs=0.002)

    def test_trajectory_output(self, tmp_path):
        out = tmp_path / "r.json"
        traj = tmp_path / "t.csv"
        rc = main(
            ["simulate", "--h", "0.08", "--tf", "100", "--d", "0", "--N", "1",
             "--traj", str(traj), "--out", str(out)]
        )
        assert rc == 0
        header, rows = read_rows(traj)
        assert header == ["t_over_t0", "sx", "sy", "sz", "pulse_index"]
        assert rows[0] == ["0", "0", "0", "-1", "1"]
        assert float(rows[-1][3]) >= 0.9999
        assert rows[-1][0] == "100"

    def test_json_reproducible(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["simulate", "--h", "0.08", "--d", "0.01", "--N", "3", *FAST]
        main([*args, "--out", str(a)])
        main([*args, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestSweepCommands:
    def test_amplitude_flags_infeasible_rows(self, tmp_path):
        out = tmp_path / "amp.csv"
        rc = main(
            ["sweep", "amplitude", "--h-min", "0.01", "--h-max", "0.05", "--points", "9",
             "--tf", "100", *FAST, "--out", str(out)]
        )
        assert rc == 0
        header, rows = read_rows(out)
        assert header == ["h", "P", "status"]
        for h_str, p_str, status in rows:
            if float(h_str) * 100.0 < math.pi:
                assert status == "infeasible" and p_str == ""
            else:
                assert status == "ok" and float(p_str) > 0.99
        assert {r[2] for r in rows} == {"ok", "infeasible"}

    def test_amplitude_entirely_below_bound_is_not_fatal(self, tmp_path):
        out = tmp_path / "amp_low.csv"
        rc = main(
            ["sweep", "amplitude", "--h-min", "0.01", "--h-max", "0.03", "--points", "5",
             "--tf", "100", *FAST, "--out", str(out)]
        )
        assert rc == 0
        _, rows = read_rows(out)
        assert all(status == "infeasible" and p == "" for _, p, status in rows)

    def test_nd_grid(self, tmp_path):
        out = tmp_path / "nd.csv"
        rc = main(
            ["sweep", "nd", "--h", "0.05", "--tf", "100", "--n-max", "5",
             "--d-max", "0.02", "--d-points", "3", *FAST, "--out", str(out)]
        )
        assert rc == 0
        header, rows = read_rows(out)
        assert header == ["N", "d", "P", "status"]
        assert len(rows) == 3 * 3
        assert all(r[3] == "ok" for r in rows)
        assert [r[0] for r in rows] == ["1"] * 3 + ["3"] * 3 + ["5"] * 3
        sidecar = json.loads((tmp_path / "nd.json").read_text())
        assert sidecar["axes"][0]["name"] == "N"

    def test_alpha_multi_curve_table(self, tmp_path):
        out = tmp_path / "alpha.csv"
        rc = main(
            ["sweep", "alpha", "--alpha-max", "0.01", "--points", "3", "--h", "0.05",
             "--d", "0.005", "--N", "1,3,5", *FAST, "--out", str(out)]
        )
        assert rc == 0
        header, rows = read_rows(out)
        assert header == ["alpha", "P_N1", "P_N3", "P_N5", "status"]
        assert len(rows) == 3
        assert all(r[-1] == "ok" for r in rows)
        # strong damping hurts the longer protocol more
        last = rows[-1]
        assert float(last[3]) <= float(last[1])
        sidecar = json.loads((tmp_path / "alpha.json").read_text())
        assert sidecar["n_list"] == [1, 3, 5]

    def test_alpha_single_curve_uses_plain_format(self, tmp_path):
        out = tmp_path / "alpha1.csv"
        rc = main(
            ["sweep", "alpha", "--alpha-max", "0.01", "--points", "3", "--h", "0.05",
             "--N", "1", *FAST, "--out", str(out)]
        )
        assert rc == 0
        header, _ = read_rows(out)
        assert header == ["alpha", "P", "status"]

    def test_parallel_output_identical(self, tmp_path):
        args = ["sweep", "amplitude", "--h-min", "0.05", "--h-max", "0.1", "--points", "6",
                "--tf", "100", *FAST]
        a, b = tmp_path / "w1.csv", tmp_path / "w4.csv"
        assert main([*args, "--workers", "1", "--out", str(a)]) == 0
        assert main([*args, "--workers", "4", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestConfigHandling:
    def test_config_file_supplies_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("h = 0.08\nd = 0.01\nN = 1\nsteps = 2000\n")
        out = tmp_path / "r.json"
        rc = main(["simulate", "--config", str(cfg), "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["spec"]["h"] == 0.08
        assert doc["integrator"]["step_count"] == 2000

    def test_cli_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("h = 0.05\n")
        rc = main(["simulate", "--config", str(cfg), "--h", "0.08", "--print-config"])
        assert rc == 0
        assert "h = 0.080000000000000002" in capsys.readouterr().out

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("amplitude = 0.08\n")
        rc = main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "r.json")])
        assert rc == 1
        assert "amplitude" in capsys.readouterr().err

    def test_comments_and_blank_lines(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# reversal run\n\nh = 0.08\n")
        rc = main(["simulate", "--config", str(cfg), "--print-config"])
        assert rc == 0

    def test_print_config_lists_resolved_values(self, tmp_path, capsys):
        rc = main(["simulate", "--h", "0.08", "--d", "0.01", "--print-config"])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        entries = dict(line.split(" = ") for line in lines)
        assert entries["d"].startswith("0.01")
        assert entries["N"] == "1"
        assert entries["tf"] == "100"

    def test_seedless_rejected(self, tmp_path, capsys):
        rc = main(["simulate", "--h", "0.08", "--seedless", "--out", str(tmp_path / "r.json")])
        assert rc == 1
        assert "seedless" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["simulate", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path / "r.json")])
        assert rc == 1

    def test_bad_value_type(self, tmp_path, capsys):
        rc = main(["simulate", "--h", "fast", "--out", str(tmp_path / "r.json")])
        assert rc == 1

    def test_config_file_drives_a_sweep(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("h_min = 0.05\nh_max = 0.1\npoints = 3\nsteps = 2000\n")
        out = tmp_path / "amp.csv"
        rc = main(["sweep", "amplitude", "--config", str(cfg), "--out", str(out)])
        assert rc == 0
        header, rows = read_rows(out)
        assert header == ["h", "P", "status"] and len(rows) == 3

    def test_numerical_failure_exits_3(self, tmp_path, capsys):
        rc = main(
            ["simulate", "--h", "0.08", "--alpha", "1e155", "--steps", "1000",
             "--out", str(tmp_path / "r.json")]
        )
        assert rc == 3
        assert "step" in capsys.readouterr().err


class TestUsageErrors:
    def test_unknown_flag_exits_1(self):
        with pytest.raises(SystemExit) as err:
            main(["design", "--frequency", "1"])
        assert err.value.code == 1

    def test_missing_subcommand_exits_1(self):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 1

    def test_console_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "spinflip.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "design" in proc.stdout and "sweep" in proc.stdout
