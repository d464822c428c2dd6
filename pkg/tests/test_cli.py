import json
import os
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "dfls.cli"]


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(CLI + list(args), capture_output=True, text=True, env=full_env)


class TestSolveCommand:
    def test_rosenbrock_reaches_minimum(self):
        proc = run_cli("solve", "rosenbrock", "--seed", "0")
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["f"] < 1e-10
        assert report["problem"] == "rosenbrock"

    def test_unknown_problem_is_usage_error(self):
        proc = run_cli("solve", "nosuch")
        assert proc.returncode == 2

    def test_unknown_flag_is_usage_error(self):
        proc = run_cli("solve", "rosenbrock", "--frobnicate")
        assert proc.returncode == 2

    def test_noisy_solve_is_deterministic_per_seed(self):
        args = ("solve", "osborne1", "--noise", "mult_gaussian:1e-2",
                "--restarts", "soft_moving", "--budget-mult", "100", "--seed", "4")
        a = run_cli(*args)
        b = run_cli(*args)
        assert a.returncode == 0
        assert a.stdout == b.stdout
        report = json.loads(a.stdout)
        assert report["exit_flag"] in ("budget", "restarts_exhausted", "small_trust_region",
                                       "slow_progress", "noise_level")

    def test_env_seed_fallback(self):
        a = run_cli("solve", "rosenbrock", env={"DFLS_SEED": "9"})
        b = run_cli("solve", "rosenbrock", "--seed", "9")
        assert json.loads(a.stdout) == json.loads(b.stdout)

    def test_reduced_initialization_flag(self):
        proc = run_cli("solve", "broyden_tridiagonal", "--pinit", "2", "--seed", "1")
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["f_true"] < 1e-6

    def test_growing_and_regression_flags(self):
        proc = run_cli("solve", "broyden_tridiagonal", "--pinit", "quartern",
                       "--growing", "perturb", "--seed", "1")
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["f_true"] < 1e-6
        proc = run_cli("solve", "rosenbrock", "--regression-points", "3",
                       "--noise", "add_gaussian:1e-3", "--nsamples", "const:2",
                       "--autodetect", "off", "--restarts", "hard",
                       "--budget-mult", "50", "--seed", "0")
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["n_evals"] <= 150


class TestBenchCommand:
    def config(self, tmp_path, **overrides):
        cfg = {
            "problems": ["rosenbrock", "bard"],
            "noise": {"kind": "mult_gaussian", "sigma": 1e-2},
            "solver": {"noisy": True},
            "seeds": 2,
            "budget_multiplier": 50,
            "tau": 1e-2,
            "measure": "both",
        }
        cfg.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_outputs_written(self, tmp_path):
        cfg = self.config(tmp_path)
        out = tmp_path / "out"
        proc = run_cli("bench", str(cfg), "--out", str(out), "--seed", "0")
        assert proc.returncode == 0, proc.stderr
        for name in ("records.csv", "profiles.csv", "summary.json", "profiles.svg"):
            assert (out / name).exists()
        summary = json.loads((out / "summary.json").read_text())
        assert summary["n_records"] == 4
        assert summary["failures"] == []
        header = (out / "records.csv").read_text().splitlines()[0]
        assert header == "problem,seed,eval_index,f_true,f_noisy"
        pheader = (out / "profiles.csv").read_text().splitlines()[0]
        assert pheader == "alpha,proportion,measure,tau_mode"

    def test_byte_identical_reruns(self, tmp_path):
        cfg = self.config(tmp_path)
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert run_cli("bench", str(cfg), "--out", str(out1), "--seed", "0").returncode == 0
        assert run_cli("bench", str(cfg), "--out", str(out2), "--seed", "0").returncode == 0
        assert (out1 / "records.csv").read_bytes() == (out2 / "records.csv").read_bytes()
        assert (out1 / "profiles.csv").read_bytes() == (out2 / "profiles.csv").read_bytes()

    def test_empty_problem_list_is_usage_error(self, tmp_path):
        cfg = self.config(tmp_path, problems=[])
        proc = run_cli("bench", str(cfg), "--out", str(tmp_path / "out"))
        assert proc.returncode == 2

    def test_unknown_problem_in_config(self, tmp_path):
        cfg = self.config(tmp_path, problems=["nosuch"])
        proc = run_cli("bench", str(cfg), "--out", str(tmp_path / "out"))
        assert proc.returncode == 2

    def test_smooth_suite_uses_true_measure(self, tmp_path):
        cfg = self.config(tmp_path, noise={"kind": "none", "sigma": 0.0}, measure="true",
                          solver={})
        out = tmp_path / "out"
        proc = run_cli("bench", str(cfg), "--out", str(out), "--seed", "0")
        assert proc.returncode == 0, proc.stderr
        summary = json.loads((out / "summary.json").read_text())
        assert summary["tau_mode"] == "fixed"
        assert summary["final_proportions"]["true"] == 1.0
