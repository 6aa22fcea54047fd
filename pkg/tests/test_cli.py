"""Config parsing and command-line behavior: exit codes, files, determinism."""

import csv
import json
import subprocess
import sys
from dataclasses import replace

import pytest

from floqnet import cli
from floqnet.config import (
    ConfigError,
    ExperimentConfig,
    config_from_mapping,
    dump_config,
    load_config,
    parse_config,
    parse_poly,
)
from floqnet.floquet import CheckSchedule
from floqnet.gf2 import BinaryMatrix


# ---------------------------------------------------------------------------
# config text parsing

class TestParseConfig:
    def test_comments_and_blanks_ignored(self):
        pairs = parse_config("# header\n\ncode = bb  # trailing\n\nseed = 3\n")
        assert pairs == {"code": "bb", "seed": "3"}

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate key 'seed'"):
            parse_config("seed = 1\nseed = 2\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config("seed = 1\nnonsense\n")

    def test_empty_value_rejected(self):
        with pytest.raises(ConfigError, match="empty key or value"):
            parse_config("seed =\n")


class TestPolynomials:
    def test_three_term(self):
        assert parse_poly("x3+y+y2") == ((3, 0), (0, 1), (0, 2))

    def test_identity_and_caret(self):
        assert parse_poly("1+x^3+y^2") == ((0, 0), (3, 0), (0, 2))

    def test_mixed_monomial(self):
        assert parse_poly("x2y3") == ((2, 3),)

    def test_bad_term_rejected(self):
        with pytest.raises(ConfigError, match="bad polynomial term"):
            parse_poly("x3+z")


class TestTypedConfig:
    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="unknown config key 'banana'"):
            config_from_mapping({"banana": "3"})

    def test_bad_int_named(self):
        with pytest.raises(ConfigError, match="'shots'"):
            config_from_mapping({"shots": "many"})

    def test_unit_scaling(self):
        cfg = config_from_mapping({"tau_attempt_ns": "250", "t2_n_ms": "5"})
        assert cfg.params.tau_attempt == pytest.approx(250e-9)
        assert cfg.params.t2_n == pytest.approx(5e-3)

    def test_noise_keys(self):
        cfg = config_from_mapping({"p_check": "0.02", "p_skip": "0.1"})
        assert cfg.noise.p_check == 0.02
        assert cfg.noise.p_skip == 0.1
        assert cfg.noise.p_bell == 0.0

    def test_zero_shots_rejected(self):
        with pytest.raises(ConfigError, match="shots"):
            config_from_mapping({"shots": "0"})

    def test_bad_code_kind_rejected(self):
        with pytest.raises(ConfigError, match="pentagon"):
            config_from_mapping({"code": "pentagon"})

    def test_bad_lattice_label_rejected(self):
        with pytest.raises(ConfigError, match="lattice size"):
            config_from_mapping({"lattices": "2x2,3by3"})

    def test_matrix_code_needs_files(self):
        with pytest.raises(ConfigError, match="hx_file"):
            config_from_mapping({"code": "matrix"})

    def test_out_of_range_probability_rejected(self):
        with pytest.raises(ConfigError):
            config_from_mapping({"p_check": "1.5"})

    def test_dump_round_trips(self):
        cfg = config_from_mapping({"code": "bb", "seed": "11", "eta": "0.6",
                                   "p_check": "0.004"})
        again = config_from_mapping(parse_config(dump_config(cfg)))
        # unit rescaling may cost one ulp on the hardware times
        for name in ("tau_attempt", "eta", "t2_n", "zfs_d"):
            assert getattr(again.params, name) == pytest.approx(
                getattr(cfg.params, name), rel=1e-12)
        assert again.noise == cfg.noise
        assert replace(again, params=cfg.params) == cfg

    def test_partition_auto_rules(self):
        single = config_from_mapping({"nodes": "1"})
        assert single.build_partition(12).node_count == 1
        two = config_from_mapping({"nodes": "2"})
        assert two.build_partition(12).node_count == 2
        three = config_from_mapping({"nodes": "3"})
        assert three.build_partition(12).node_count == 3

    def test_bisect_needs_two_honeycomb_nodes(self):
        cfg = config_from_mapping({"code": "bb", "partition": "bisect",
                                   "nodes": "2"})
        with pytest.raises(ConfigError, match="bisect"):
            cfg.build_partition(144)


# ---------------------------------------------------------------------------
# commands, in process

def write_cfg(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


HONEYCOMB_CFG = """
code = honeycomb
lx = 2
ly = 2
nodes = 2
partition = blocks
seed = 7
shots = 2000
out = {out}
"""


class TestBuildCommand:
    def test_honeycomb_pass(self, tmp_path):
        cfg = write_cfg(tmp_path, HONEYCOMB_CFG.format(out=tmp_path / "res"))
        assert cli.main(["build", "--config", cfg]) == 0
        report = json.loads((tmp_path / "res" / "build_report.json").read_text())
        assert report["verification"]["passed"] is True
        assert report["verification"]["period"] == 3
        assert report["verification"]["k_inst"] == 2
        loaded = CheckSchedule.load(tmp_path / "res" / "schedule.txt")
        assert (loaded.n, loaded.period) == (12, 3)
        assert loaded.check_count == 18

    def test_bb_reports_honest_outcome(self, tmp_path):
        cfg = write_cfg(tmp_path, f"code = bb\nout = {tmp_path / 'bb'}\n")
        code = cli.main(["build", "--config", cfg])
        report = json.loads((tmp_path / "bb" / "build_report.json").read_text())
        assert report["code"]["n"] == 144
        assert report["code"]["k"] == 12
        assert report["code"]["passed"] is True
        assert report["code"]["weight_histogram"] == {"6": 144}
        assert report["schedule"]["nominal_slots"] == 3
        # exit code must agree with the written verdict, whichever it is
        assert code == (0 if report["verification"]["passed"] else 3)
        hx = BinaryMatrix.load(tmp_path / "bb" / "hx.txt")
        assert (hx.rows, hx.cols) == (72, 144)

    def test_unknown_key_exits_2(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, "code = honeycomb\nbanana = 1\n")
        assert cli.main(["build", "--config", cfg]) == 2
        assert "banana" in capsys.readouterr().err

    def test_missing_file_exits_2(self, capsys):
        assert cli.main(["build", "--config", "/no/such/file.cfg"]) == 2
        assert "config error" in capsys.readouterr().err

    def test_shots_override_validates(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, "code = honeycomb\n")
        assert cli.main(["montecarlo", "--config", cfg, "--shots", "0"]) == 2
        assert "shots" in capsys.readouterr().err


class TestNetworkCommand:
    def test_summary_and_sweep(self, tmp_path):
        cfg = write_cfg(tmp_path, HONEYCOMB_CFG.format(out=tmp_path / "net"))
        assert cli.main(["network", "--config", cfg]) == 0
        summary = json.loads((tmp_path / "net" / "network_summary.json").read_text())
        assert summary["herald"]["t_herald_us"] == pytest.approx(6.7)
        assert 30.0 <= summary["tau_cycle_us"] <= 80.0
        assert summary["cycle"]["c_seq"] == 2
        with open(tmp_path / "net" / "herald_sweep.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        heralds = [float(r["t_herald_us"]) for r in rows]
        assert heralds == sorted(heralds, reverse=True)
        assert len(set(r["fidelity"] for r in rows)) == 1

    def test_histogram_written(self, tmp_path):
        cfg = write_cfg(tmp_path, HONEYCOMB_CFG.format(out=tmp_path / "net"))
        cli.main(["network", "--config", cfg, "--shots", "500"])
        with open(tmp_path / "net" / "herald_histogram.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert sum(int(r["count"]) for r in rows) == 500


MC_CFG = """
code = honeycomb
lattices = 2x2
p_checks = 0,0.02
shots = 50
cycles = 2
seed = 3
out = {out}
"""


class TestMontecarloCommand:
    def test_zero_noise_row_is_zero(self, tmp_path):
        cfg = write_cfg(tmp_path, MC_CFG.format(out=tmp_path / "mc"))
        assert cli.main(["montecarlo", "--config", cfg]) == 0
        with open(tmp_path / "mc" / "sweep.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2
        by_p = {float(r["p_check"]): float(r["rate"]) for r in rows}
        assert by_p[0.0] == 0.0
        summary = json.loads((tmp_path / "mc" / "mc_summary.json").read_text())
        assert summary["crossing_p_check"] is None  # single lattice, no crossing


class TestReportCommand:
    def test_throughput_files(self, tmp_path):
        cfg = write_cfg(tmp_path, HONEYCOMB_CFG.format(out=tmp_path / "rep")
                        + "distill_rounds = 1\n")
        assert cli.main(["report", "--config", cfg]) == 0
        with open(tmp_path / "rep" / "throughput.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        labels = [r["label"] for r in rows]
        assert "2x2" in labels and "2x2+distill1" in labels
        doubled = {r["label"]: int(r["bell_pairs_per_cycle"]) for r in rows}
        assert doubled["2x2+distill1"] == 2 * doubled["2x2"]
        report = json.loads((tmp_path / "rep" / "throughput.json").read_text())
        assert report["linear_scaling_ok"] is True


class TestDeterminism:
    def test_network_and_build_byte_identical(self, tmp_path):
        blobs = []
        for name in ("a", "b"):
            out = tmp_path / name
            cfg = write_cfg(tmp_path, HONEYCOMB_CFG.format(out=out), f"{name}.cfg")
            assert cli.main(["network", "--config", cfg]) == 0
            assert cli.main(["build", "--config", cfg]) == 0
            blobs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        assert blobs[0] == blobs[1]
        assert set(blobs[0]) >= {"network_summary.json", "herald_sweep.csv",
                                 "build_report.json", "schedule.txt"}

    def test_no_temp_files_left(self, tmp_path):
        out = tmp_path / "res"
        cfg = write_cfg(tmp_path, HONEYCOMB_CFG.format(out=out))
        cli.main(["network", "--config", cfg])
        assert not [p for p in out.iterdir() if p.name.endswith(".tmp~")]


class TestSubprocess:
    def test_module_entry_and_log_env(self, tmp_path):
        cfg = write_cfg(tmp_path, MC_CFG.format(out=tmp_path / "mc"))
        proc = subprocess.run(
            [sys.executable, "-m", "floqnet.cli", "montecarlo", "--config", cfg],
            capture_output=True, text=True, env={"FLOQNET_LOG": "info",
                                                 "PATH": "/usr/bin:/bin"},
        )
        assert proc.returncode == 0
        assert "montecarlo:" in proc.stdout
        assert "INFO" in proc.stderr  # per-point progress at info level

    def test_usage_error_is_exit_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "floqnet.cli", "frobnicate"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 2
