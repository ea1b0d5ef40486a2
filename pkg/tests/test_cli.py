import json
import subprocess
import sys

import numpy as np
import pytest

from polylp import parse_alist

CLI = [sys.executable, "-m", "polylp.cli"]


def run_cli(*args, stdin=None):
    return subprocess.run(
        CLI + list(args), input=stdin, capture_output=True, text=True, timeout=300
    )


@pytest.fixture(scope="module")
def code_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("codes") / "code.alist"
    res = run_cli("gen-code", "--n", "24", "--dv", "3", "--dc", "6",
                  "--seed", "7", "--out", str(path))
    assert res.returncode == 0
    return path


class TestGenCode:
    def test_writes_valid_alist(self, tmp_path):
        out = tmp_path / "code.alist"
        res = run_cli("gen-code", "--n", "48", "--dv", "3", "--dc", "6",
                      "--seed", "7", "--out", str(out))
        assert res.returncode == 0
        code = parse_alist(out.read_text())
        assert code.n_vars == 48 and code.n_checks == 24
        assert np.all(code.check_degrees == 6)
        assert np.all(code.var_degrees == 3)

    def test_invalid_parameters_are_usage_errors(self):
        res = run_cli("gen-code", "--n", "10", "--dv", "3", "--dc", "7")
        assert res.returncode == 1
        assert "divisible" in res.stderr

    def test_ensemble_scale_code(self, tmp_path):
        out = tmp_path / "big.alist"
        res = run_cli("gen-code", "--n", "1002", "--dv", "3", "--dc", "6",
                      "--seed", "7", "--out", str(out))
        assert res.returncode == 0
        code = parse_alist(out.read_text())
        assert (code.n_vars, code.n_checks) == (1002, 501)
        assert np.all(code.check_degrees == 6) and np.all(code.var_degrees == 3)


class TestProject:
    def test_reference_vector(self):
        res = run_cli("project", stdin="1 0 0")
        assert res.returncode == 0
        assert "0.666666666667 0.333333333333 0.333333333333" in res.stdout
        assert "beta_opt 0.333333333333" in res.stdout
        assert "r 0" in res.stdout

    def test_empty_input_is_runtime_error(self):
        res = run_cli("project", stdin="")
        assert res.returncode == 2


class TestDecode:
    def test_json_output(self, code_file):
        gamma = " ".join(["1.0"] * 24)
        res = run_cli("decode", "--code", str(code_file), "--llr", gamma)
        assert res.returncode == 0
        record = json.loads(res.stdout)
        assert record["status"] == "Converged"
        assert record["integral"] is True
        assert record["hard_decision"] == [0] * 24
        assert record["ml_certificate"] is True

    def test_llr_from_file(self, code_file, tmp_path):
        llr_path = tmp_path / "llr.txt"
        llr_path.write_text("\n".join(["0.5"] * 24))
        res = run_cli("decode", "--code", str(code_file), "--llr", str(llr_path),
                      "--algo", "bp")
        assert res.returncode == 0
        assert json.loads(res.stdout)["hard_decision"] == [0] * 24

    def test_missing_code_file_is_runtime_error(self):
        res = run_cli("decode", "--code", "missing.alist", "--llr", "1 1")
        assert res.returncode == 2
        assert "missing.alist" in res.stderr

    def test_unknown_flag_is_usage_error(self):
        res = run_cli("decode", "--code", "x", "--llr", "1", "--frobnicate")
        assert res.returncode == 1

    def test_bad_flag_value_is_usage_error(self, code_file):
        res = run_cli("decode", "--code", str(code_file), "--llr",
                      " ".join(["1"] * 24), "--mu", "-3")
        assert res.returncode == 1
        assert "mu" in res.stderr

    def test_wrong_llr_length(self, code_file):
        res = run_cli("decode", "--code", str(code_file), "--llr", "1 2 3")
        assert res.returncode == 1
        assert "24" in res.stderr

    def test_defaults_in_help(self):
        res = run_cli("decode", "--help")
        assert res.returncode == 0
        for token in ("3.0", "1e-05", "1000", "1.9"):
            assert token in res.stdout


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_win(self, code_file, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("tmax=2\nmu=3.0\n")
        gamma = " ".join(["0.01"] * 12 + ["-0.01"] * 12)
        res = run_cli("decode", "--code", str(code_file), "--llr", gamma,
                      "--config", str(cfg), "--epsilon", "1e-12")
        assert res.returncode == 0
        assert json.loads(res.stdout)["iterations"] == 2  # config tmax applied
        res2 = run_cli("decode", "--code", str(code_file), "--llr", gamma,
                       "--config", str(cfg), "--epsilon", "1e-12", "--tmax", "5")
        assert json.loads(res2.stdout)["iterations"] == 5  # flag beats config

    def test_unknown_config_key_rejected(self, code_file, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("volume=11\n")
        res = run_cli("decode", "--code", str(code_file), "--llr", "1",
                      "--config", str(cfg))
        assert res.returncode == 1
        assert "volume" in res.stderr


class TestSimulate:
    def test_csv_and_rerun_identical(self, code_file, tmp_path):
        args = ("simulate", "--code", str(code_file), "--channel", "bsc",
                "--points", "0.02,0.05", "--decoder", "admm", "--trials", "40",
                "--seed", "3", "--tmax", "150", "--no-timing")
        a = run_cli(*args)
        b = run_cli(*args)
        assert a.returncode == 0
        assert a.stdout == b.stdout
        lines = a.stdout.strip().split("\n")
        assert len(lines) == 3
        assert lines[0].startswith("decoder,channel_kind")

    def test_needs_exactly_one_budget(self, code_file):
        res = run_cli("simulate", "--code", str(code_file), "--channel", "bsc",
                      "--points", "0.02", "--decoder", "admm")
        assert res.returncode == 1

    def test_awgn_sweep_with_env_workers(self, code_file):
        import os
        env = dict(os.environ, POLYLP_WORKERS="2")
        args = CLI + ["simulate", "--code", str(code_file), "--channel", "awgn",
                      "--points", "8.0", "--decoder", "admm", "--trials", "25",
                      "--seed", "1", "--no-timing"]
        a = subprocess.run(args, env=env, capture_output=True, text=True, timeout=300)
        b = run_cli(*args[3:])  # default single worker
        assert a.returncode == 0
        assert a.stdout == b.stdout
        assert ",awgn,8," in a.stdout
