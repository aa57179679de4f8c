import json
import subprocess
import sys

import numpy as np
import pytest

from nlslab.artifacts import validate_artifacts
from nlslab.config import ConfigError, parse_config, parse_config_text
from nlslab.cli import main


class TestConfigGrammar:
    def test_minimal_simulate(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("experiment = simulate\ndim = 2\nn = 64\ndt = 1e-3\nt_end = 1\n")
        cfg = parse_config(str(path))
        assert cfg.experiment == "simulate"
        assert cfg.n == 64 and cfg.dt == 1e-3

    def test_comments_and_blank_lines(self):
        values = parse_config_text("# header\n\nn = 32  # trailing\n")
        assert values == {"n": 32}

    def test_unknown_key_is_error(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text("frobnicate = 3\n")

    def test_duplicate_key_is_error(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("n = 32\nn = 64\n")

    def test_list_values(self):
        values = parse_config_text("N_list = 2, 4, 8, 16\n")
        assert values["N_list"] == [2.0, 4.0, 8.0, 16.0]

    def test_s_out_of_range_names_bound(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("experiment = simulate\ns = 0.4\n")
        with pytest.raises(ConfigError, match=r"s in \(1/2, 1\)"):
            parse_config(str(path))

    def test_env_override(self, tmp_path, monkeypatch):
        path = tmp_path / "run.cfg"
        path.write_text("experiment = simulate\nseed = 1\n")
        monkeypatch.setenv("NLSLAB_SEED", "99")
        assert parse_config(str(path)).seed == 99

    def test_flag_overrides_env_and_file(self, tmp_path, monkeypatch):
        path = tmp_path / "run.cfg"
        path.write_text("experiment = simulate\nseed = 1\n")
        monkeypatch.setenv("NLSLAB_SEED", "99")
        assert parse_config(str(path), overrides={"seed": "7"}).seed == 7

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            parse_config("/nonexistent/q.cfg")

    def test_roundtrip_through_dict(self):
        cfg = parse_config(None, overrides={"experiment": "simulate", "n": "32"})
        echo = cfg.to_dict()
        assert echo["n"] == 32 and echo["experiment"] == "simulate"


class TestCliRuns:
    def test_simulate_zero_data_exit_zero(self, tmp_path):
        out = tmp_path / "run"
        code = main(["simulate", "--out", str(out), "--set", "data=zero",
                     "--set", "n=16", "--set", "dt=0.01", "--set", "t_end=0.05"])
        assert code == 0
        rows = (out / "diagnostics.csv").read_text().strip().splitlines()
        assert rows[0] == "t,mass,energy,energy_Iu,l4x,hs,h_half"
        assert all(float(v) == 0.0 for v in rows[1].split(",")[1:])
        validate_artifacts(out)

    def test_bilinear_separation_error_exit_one(self, tmp_path, capsys):
        code = main(["bilinear", "--out", str(tmp_path / "x"),
                     "--set", "n=64", "--set", "N=2", "--set", "M_list=15",
                     "--set", "t_end=0.01"])
        assert code == 1
        err = json.loads(capsys.readouterr().err.strip())
        assert "M >= 8N" in err["error"]["message"]

    def test_partition_artifact(self, tmp_path):
        out = tmp_path / "p"
        code = main(["partition", "--out", str(out), "--set", "n=32",
                     "--set", "dt=0.005", "--set", "t_end=0.2",
                     "--set", "amplitude=0.4", "--set", "epsilon=0.19"])
        assert code == 0
        doc = json.loads((out / "partition.json").read_text())
        assert doc["breakpoints"][0] == 0.0
        assert doc["breakpoints"][-1] == pytest.approx(0.2)
        assert len(doc["intervals"]) == len(doc["breakpoints"]) - 1

    def test_verify_i_report_and_determinism(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            code = main(["verify-i", "--out", str(out), "--seed", "3",
                         "--set", "n=32", "--set", "N_list=2,4,8",
                         "--set", "trials=10"])
            assert code == 0
            outs.append(out)
        assert (outs[0] / "report.json").read_bytes() == (outs[1] / "report.json").read_bytes()
        assert (outs[0] / "sweep.csv").read_bytes() == (outs[1] / "sweep.csv").read_bytes()
        doc = json.loads((outs[0] / "report.json").read_text())
        assert doc["fit"] is not None and "exponent" in doc["fit"]

    def test_almost_conservation_report_has_slope(self, tmp_path):
        out = tmp_path / "ac"
        code = main(["almost-conservation", "--out", str(out),
                     "--set", "n=32", "--set", "N_list=2,4,8,16",
                     "--set", "dt=0.001", "--set", "t_end=0.1",
                     "--set", "amplitude=0.3", "--set", "data_s=0.76"])
        doc = json.loads((out / "report.json").read_text())
        assert "exponent" in doc["fit"]
        assert code in (0, 2)  # band verdict is the exit status

    def test_smoothing_cli(self, tmp_path):
        out = tmp_path / "sm"
        code = main(["smoothing", "--out", str(out), "--set", "n=32",
                     "--set", "N_list=2,4,8", "--set", "dt=0.002",
                     "--set", "t_end=0.1", "--set", "amplitude=0.25",
                     "--set", "epsilon=0.4"])
        assert code in (0, 2)
        validate_artifacts(out)

    def test_scatter_cli(self, tmp_path):
        out = tmp_path / "sc"
        code = main(["scatter", "--out", str(out), "--set", "n=32",
                     "--set", "dt=0.002", "--set", "t_end=0.2",
                     "--set", "tail_start=0.1", "--set", "amplitude=0.25"])
        assert code == 0
        doc = json.loads((out / "report.json").read_text())
        assert "route_difference_l2" in doc["extras"]

    def test_strichartz_cli(self, tmp_path):
        out = tmp_path / "st"
        code = main(["strichartz", "--out", str(out), "--set", "n=32",
                     "--set", "t_end=0.5", "--set", "trials=3", "--set", "n_times=17"])
        assert code == 0
        validate_artifacts(out)

    def test_lwp_cli(self, tmp_path):
        out = tmp_path / "lwp"
        code = main(["lwp", "--out", str(out), "--set", "n=32", "--set", "dt=0.002",
                     "--set", "t_end=0.1", "--set", "amplitude=0.2",
                     "--set", "epsilon=0.4", "--set", "N=8"])
        assert code in (0, 2)
        validate_artifacts(out)

    def test_bands_cli(self, tmp_path):
        out = tmp_path / "bd"
        code = main(["bands", "--out", str(out), "--set", "n=32", "--set", "dt=0.002",
                     "--set", "t_end=0.1", "--set", "amplitude=0.25",
                     "--set", "M_list=2,4,8", "--set", "epsilon=0.5"])
        assert code in (0, 2)
        validate_artifacts(out)

    def test_console_entry_point(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "nlslab", "simulate", "--out", str(tmp_path / "m"),
             "--set", "data=zero", "--set", "n=16", "--set", "dt=0.01",
             "--set", "t_end=0.02"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0


class TestManifest:
    def test_manifest_contents(self, tmp_path):
        out = tmp_path / "run"
        main(["simulate", "--out", str(out), "--set", "data=zero", "--set", "n=16",
              "--set", "dt=0.01", "--set", "t_end=0.02", "--seed", "5"])
        doc = json.loads((out / "manifest.json").read_text())
        assert doc["seed"] == 5
        assert doc["config"]["n"] == 16
        assert "numpy" in doc["versions"]
        assert "cutoff" in doc["symbols"] and "taper" in doc["symbols"]
        assert "timestamp" in doc
