"""Experiment orchestration: run one configuration, or sweep many.

Exit codes: 0 all enabled pass-criteria hold, 1 a rate/energy check failed,
2 invalid configuration, 3 numerical blow-up.
"""

from __future__ import annotations

import concurrent.futures
import json
import time
import warnings
from pathlib import Path

import numpy as np

from . import metrics
from .config import ExperimentConfig
from .errors import BlowUpError, ConfigError, ShockLabError
from .flux import ShockParams
from .lemmas import default_c0
from .profile import (build_profile, export_profile_csv,
                      export_profile_metadata, general_flux_profile)
from .shift import mass_shift
from .solver import InitialData, MetricsSchedule, SolverConfig, simulate

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


def _json_dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def build_problem(cfg: ExperimentConfig):
    """(params, profile, initial data, solver config, probes) for a config."""
    params = ShockParams(cfg.u_minus, cfg.u_plus, cfg.p, cfg.build_flux())
    n = cfg.n_cells()
    if params.flux.kind == "burgers":
        prof = build_profile(params, cfg.xi_min, cfg.xi_max, n, cfg.profile_tol)
    else:
        prof = general_flux_profile(params, cfg.xi_min, cfg.xi_max, n,
                                    cfg.profile_tol)
    init = InitialData(prof, kind=cfg.perturbation, amplitude=cfg.amplitude,
                       width=cfg.width, offset=cfg.offset, seed=cfg.seed)
    solver_cfg = SolverConfig(cfl=cfg.cfl, epsilon=cfg.epsilon,
                              scheme=cfg.scheme, frame=cfg.frame,
                              t_end=cfg.t_end, output_dt=cfg.output_dt)
    snapshot_times = cfg.snapshot_times or (0.0, cfg.t_end / 10.0, cfg.t_end)
    if cfg.scenario == "theorem3":
        y = mass_shift(init.build_state(), prof, params)
        probes = MetricsSchedule(mode="fixed-reference", ref_shift=y,
                                 c0=cfg.c0, antiderivative_r=cfg.antiderivative_r,
                                 snapshot_times=tuple(snapshot_times))
    else:
        probes = MetricsSchedule(mode="shift", c0=cfg.c0,
                                 antiderivative_r=cfg.antiderivative_r,
                                 snapshot_times=tuple(snapshot_times))
    return params, prof, init, solver_cfg, probes


def energy_checks(series: metrics.TimeSeries, params: ShockParams,
                  dx: float) -> dict:
    """Energy/dissipation suite on a shift-aligned Burgers run.

    d/dt ||v-U||_2^2 <= 0 between outputs (discretization tolerance),
    D(t) >= -1e-8, L1 contraction within factor 1.001, and the shift bound
    |X' - gamma| <= (u_- - u_+)^(1/p - 1/2) ||v-U||_2 at every output.
    """
    t = series.t
    l2sq = series.l2**2
    tol = 1e-8 + 10.0 * dx**2 * np.diff(t)
    l2_monotone = bool(np.all(np.diff(l2sq) <= tol))
    d_ok = bool(np.all(series.dissipation >= -1e-8))
    l1_lab = series.extras["l1_lab"]
    l1_ok = bool(np.all(l1_lab <= l1_lab[0] * 1.001 + 1e-12))
    bound = params.delta ** (1.0 / params.p - 0.5) * series.l2
    xprest_ok = bool(np.all(np.abs(series.Xdot - params.gamma)
                            <= bound * (1.0 + 1e-6) + 1e-10))
    return {"l2_squared_nonincreasing": l2_monotone,
            "dissipation_nonnegative": d_ok,
            "l1_contraction": l1_ok,
            "shift_bound_xprest": xprest_ok,
            "pass": l2_monotone and d_ok and l1_ok and xprest_ok}


def phi_check(series: metrics.TimeSeries, transient: float) -> dict:
    """||Phi||_r nonincreasing once past the initial transient."""
    phi = series.extras["phi_norm"]
    sel = series.t >= transient
    vals = phi[sel]
    ok = bool(np.all(np.diff(vals) <= 1e-8 + 1e-6 * vals[:-1]))
    return {"transient": transient, "nonincreasing": ok, "pass": ok}


def run(cfg: ExperimentConfig) -> int:
    """Execute one experiment; writes all artifacts into cfg.output_dir."""
    t_wall = time.time()
    try:
        cfg.validate()
        out = cfg.resolved_output_dir()
        out.mkdir(parents=True, exist_ok=True)
        params, prof, init, solver_cfg, probes = build_problem(cfg)
    except (ConfigError, ShockLabError, TypeError, ValueError) as exc:
        print(f"config error: {exc}")
        return EXIT_CONFIG

    notes = []
    if cfg.p > 2.0:
        notes.append("theory-out-of-range: the shift ODE well-posedness "
                     "argument covers 1 <= p <= 2 only")
        warnings.warn(notes[-1])

    try:
        series = simulate(init, params, solver_cfg, probes, backend=cfg.backend)
    except BlowUpError as exc:
        print(f"blow-up: {exc}")
        _json_dump({"status": "blow-up", "t": exc.t, "config": cfg.echo()},
                   out / "run_summary.json")
        return EXIT_BLOWUP

    export_profile_csv(prof, out / "profile.csv")
    export_profile_metadata(prof, out / "profile_meta.json")
    series.to_csv(out / "timeseries.csv")
    for t_snap, (xs, us) in sorted(series.snapshots.items()):
        tag = f"{t_snap:g}".replace(".", "_")
        with open(out / f"snapshot_t{tag}.csv", "w", encoding="utf-8") as fh:
            fh.write("x,u\n")
            for x, u in zip(xs, us):
                fh.write(f"{float(x)!r},{float(u)!r}\n")
    if series.extras:
        with open(out / "diagnostics.csv", "w", encoding="utf-8") as fh:
            names = sorted(series.extras)
            fh.write("t," + ",".join(names) + "\n")
            for k in range(len(series.t)):
                fh.write(repr(float(series.t[k])) + ","
                         + ",".join(repr(float(series.extras[nm][k]))
                                    for nm in names) + "\n")

    window = metrics.default_window(cfg.t_end)
    rate_report = []
    rates_pass = True
    for column, r in cfg.theorem_rate_checks():
        fit = metrics.fit_from_timeseries(series, column, r, window)
        entry = {"norm": column}
        entry.update(fit.to_dict())
        # diagnostic: the bound itself over the whole run; on desk-scale
        # domains the sup of norm*(1+t)^r is attained early, exhibiting the
        # finite constant C of the theorem even where the windowed
        # stability statistic sits on the discretization floor
        vals = series.column(column)
        pos = vals > 0.0
        ratio = vals[pos] * (1.0 + series.t[pos]) ** r
        k = int(np.argmax(ratio))
        entry["sup_ratio_global"] = float(ratio[k])
        entry["sup_ratio_argmax_t"] = float(series.t[pos][k])
        rate_report.append(entry)
        rates_pass = rates_pass and fit.passed
    _json_dump(rate_report, out / "rate_report.json")

    checks = {}
    if cfg.scenario in ("theorem1", "theorem2"):
        checks["energy"] = energy_checks(series, params, prof.dx)
    if cfg.scenario == "theorem3":
        checks["phi"] = phi_check(series, cfg.t_end / 10.0)
        l1_lab = series.extras["l1_lab"]
        checks["l1_contraction"] = {
            "pass": bool(np.all(l1_lab <= l1_lab[0] * 1.001 + 1e-12))}
    checks_pass = all(c["pass"] for c in checks.values()) if checks else True

    summary = {
        "config": cfg.echo(),
        "c0": probes.c0 if probes.c0 is not None else default_c0(cfg.p),
        "ref_shift": probes.ref_shift,
        "backend": series.metadata["backend"],
        "gamma": params.gamma,
        "final": {
            "t": float(series.t[-1]),
            "X": float(series.X[-1]),
            "Xdot": float(series.Xdot[-1]),
            "l1": float(series.l1[-1]),
            "l2": float(series.l2[-1]),
            "linf": float(series.linf[-1]),
        },
        "rates_pass": rates_pass,
        "checks": checks,
        "notes": notes + series.metadata["warnings"],
        "status": "ok",
    }
    _json_dump(summary, out / "run_summary.json")
    # wall time lives in a sidecar so result artifacts stay byte-reproducible
    _json_dump({"wall_time_seconds": time.time() - t_wall},
               out / "timing.json")

    if not (rates_pass and checks_pass):
        print(f"[{cfg.scenario}] rate/energy check failed in {out}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _run_child(cfg: ExperimentConfig) -> tuple:
    code = run(cfg)
    return cfg.scenario, cfg.p, str(cfg.output_dir), code


def sweep(configs: list[ExperimentConfig], parallelism: int = 1) -> int:
    """Run configs (optionally in parallel), merge rate reports; nonzero exit
    if any child failed, but every child still runs."""
    dirs = [str(c.resolved_output_dir()) for c in configs]
    if len(set(dirs)) != len(dirs):
        raise ConfigError("sweep configs must use pairwise-distinct output dirs")
    results = []
    if parallelism > 1 and len(configs) > 1:
        with concurrent.futures.ProcessPoolExecutor(parallelism) as pool:
            results = list(pool.map(_run_child, configs))
    else:
        results = [_run_child(c) for c in configs]
    merged = []
    for cfg, (scenario, p, outdir, code) in zip(configs, results):
        entry = {"scenario": scenario, "p": p, "output_dir": outdir,
                 "exit_code": code}
        report = cfg.resolved_output_dir() / "rate_report.json"
        if report.exists():
            entry["rates"] = json.loads(report.read_text())
        merged.append(entry)
    merged.sort(key=lambda e: (e["scenario"], e["p"], e["output_dir"]))
    if configs:
        root = Path(dirs[0]).parent
        _json_dump(merged, root / "sweep_report.json")
    return EXIT_OK if all(r[3] == EXIT_OK for r in results) else EXIT_CHECK_FAILED
