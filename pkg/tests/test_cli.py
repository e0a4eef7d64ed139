import json

import numpy as np
import pytest

import shocklab as sl
import shocklab.config
from shocklab.cli import main
from shocklab.config import load_config, preset
from shocklab.errors import ConfigError
from shocklab.runner import run, sweep

TINY = dict(scenario="custom", xi_min=-10.0, xi_max=10.0, dx=0.1,
            t_end=1.0, output_dt=0.5, p=1.0, amplitude=0.2)


class TestConfig:
    def test_presets_validate(self):
        for name in ("theorem1", "theorem2", "theorem3"):
            cfg = preset(name)
            cfg.validate()

    def test_scenario_constraints(self):
        with pytest.raises(ConfigError):
            preset("theorem1", p=1.0)
        with pytest.raises(ConfigError):
            preset("theorem2", p=1.5)
        with pytest.raises(ConfigError):
            preset("theorem3", flux="burgers")

    def test_toml_round_trip(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('scenario = "theorem2"\ndx = 0.05\nt_end = 5.0\n'
                        'output_dir = "x"\n')
        cfg = load_config(path)
        assert cfg.scenario == "theorem2"
        assert cfg.dx == 0.05
        assert cfg.p == 1.0  # preset default preserved

    def test_json_accepted(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"scenario": "custom", "p": 1.5,
                                    "dx": 0.1, "t_end": 1.0}))
        cfg = load_config(path)
        assert cfg.p == 1.5

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text("bogus_knob = 3\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_dx_must_divide_domain(self):
        with pytest.raises(ConfigError):
            preset("custom", xi_min=-1.0, xi_max=1.0, dx=0.3).n_cells()


class TestRunner:
    def test_tiny_run_artifacts(self, tmp_path):
        cfg = preset("custom", output_dir=str(tmp_path / "run"), **{
            k: v for k, v in TINY.items() if k != "scenario"})
        code = run(cfg)
        assert code == 0
        out = tmp_path / "run"
        for name in ("profile.csv", "profile_meta.json", "timeseries.csv",
                     "rate_report.json", "run_summary.json", "timing.json",
                     "diagnostics.csv"):
            assert (out / name).exists(), name
        summary = json.loads((out / "run_summary.json").read_text())
        assert summary["status"] == "ok"
        assert summary["config"]["dx"] == 0.1

    def test_exit_code_config_error(self, tmp_path):
        cfg = sl.config.ExperimentConfig(output_dir=str(tmp_path), dx=0.3,
                                         xi_min=-1.0, xi_max=1.0, t_end=1.0)
        assert run(cfg) == 2

    def test_determinism_byte_identical(self, tmp_path):
        cfg = preset("custom", output_dir=str(tmp_path / "run"), **{
            k: v for k, v in TINY.items() if k != "scenario"})
        assert run(cfg) == 0
        first = {f.name: f.read_bytes()
                 for f in (tmp_path / "run").iterdir()}
        assert run(cfg) == 0
        for f in sorted((tmp_path / "run").iterdir()):
            if f.name == "timing.json":
                continue
            assert f.read_bytes() == first[f.name], f.name

    def test_sweep_empty(self, tmp_path):
        assert sweep([]) == 0

    def test_sweep_duplicate_dirs_rejected(self, tmp_path):
        cfg = preset("custom", output_dir=str(tmp_path / "same"), **{
            k: v for k, v in TINY.items() if k != "scenario"})
        with pytest.raises(ConfigError):
            sweep([cfg, cfg])

    def test_sweep_two_runs(self, tmp_path):
        cfgs = [preset("custom", output_dir=str(tmp_path / f"r{i}"), **{
            k: v for k, v in TINY.items() if k != "scenario"})
            for i in range(2)]
        assert sweep(cfgs, parallelism=1) == 0
        report = json.loads((tmp_path / "sweep_report.json").read_text())
        assert len(report) == 2

    def test_sweep_parallel_children(self, tmp_path):
        cfgs = [preset("custom", output_dir=str(tmp_path / f"q{i}"),
                       backend="numpy", **{
            k: v for k, v in TINY.items() if k != "scenario"})
            for i in range(2)]
        assert sweep(cfgs, parallelism=2) == 0
        for i in range(2):
            assert (tmp_path / f"q{i}" / "run_summary.json").exists()

    def test_p_above_two_notes_theory_range(self, tmp_path):
        cfg = preset("custom", p=2.5, output_dir=str(tmp_path / "hp"), **{
            k: v for k, v in TINY.items() if k not in ("scenario", "p")})
        with pytest.warns(UserWarning, match="theory-out-of-range"):
            assert run(cfg) == 0
        summary = json.loads(
            (tmp_path / "hp" / "run_summary.json").read_text())
        assert any("theory-out-of-range" in n for n in summary["notes"])


class TestCli:
    def test_profile_subcommand(self, tmp_path, capsys):
        code = main(["profile", "--p", "2", "--u-minus", "1",
                     "--u-plus", "-1", "--xi-min", "-8", "--xi-max", "8",
                     "--dx", "0.01", "--out-dir", str(tmp_path)])
        assert code == 0
        meta = json.loads((tmp_path / "profile_meta.json").read_text())
        width = meta["x_R"] - meta["x_L"]
        assert width == pytest.approx(np.sqrt(2.0) * np.pi, abs=1e-6)

    def test_lemmas_p0(self, tmp_path, capsys):
        out = tmp_path / "cert.json"
        code = main(["lemmas", "--p0", "--out", str(out)])
        assert code == 0
        cert = json.loads(out.read_text())
        assert 39.0 / 20.0 < cert["p0_estimate"] < 59.0 / 30.0

    def test_simulate_subcommand(self, tmp_path):
        code = main(["simulate", "--scenario", "custom", "--p", "1",
                     "--xi-min", "-10", "--xi-max", "10", "--dx", "0.1",
                     "--t-end", "1", "--output-dt", "0.5",
                     "--amplitude", "0.2", "--out-dir", str(tmp_path / "s")])
        assert code == 0
        assert (tmp_path / "s" / "timeseries.csv").exists()

    def test_rates_subcommand(self, tmp_path):
        t = np.linspace(0.0, 2000.0, 801)
        y = 2.0 * (1.0 + t) ** -0.3
        path = tmp_path / "ts.csv"
        with open(path, "w") as fh:
            fh.write("t,X,Xdot,l1,l2,linf,dissipation,mass_residual\n")
            for k in range(t.size):
                fh.write(f"{float(t[k])!r},0.0,0.0,{float(y[k])!r},"
                         f"{float(y[k])!r},{float(y[k])!r},0.0,0.0\n")
        out = tmp_path / "rate.json"
        code = main(["rates", str(path), "--norm", "l2", "--r", "0.25",
                     "--out", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["pass"] is True
        assert rep["slope"] == pytest.approx(-0.3, abs=0.01)

    def test_poincare_subcommand(self, tmp_path):
        code = main(["poincare", "--n-funcs", "20", "--out",
                     str(tmp_path / "p.json")])
        assert code == 0
        rep = json.loads((tmp_path / "p.json").read_text())
        assert rep["pass"] and rep["n_checked"] == 21

    def test_sweep_subcommand(self, tmp_path):
        sweep_file = tmp_path / "sweep.toml"
        sweep_file.write_text(
            'xi_min = -10.0\nxi_max = 10.0\ndx = 0.1\nt_end = 1.0\n'
            'output_dt = 0.5\np = 1.0\namplitude = 0.2\n'
            '[[runs]]\noutput_dir = "%s"\n[[runs]]\noutput_dir = "%s"\n'
            % (tmp_path / "s1", tmp_path / "s2"))
        code = main(["sweep", str(sweep_file)])
        assert code == 0

    def test_output_root_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SHOCKLAB_OUT_ROOT", str(tmp_path))
        cfg = preset("custom", output_dir="rooted", **{
            k: v for k, v in TINY.items() if k != "scenario"})
        assert run(cfg) == 0
        assert (tmp_path / "rooted" / "run_summary.json").exists()
