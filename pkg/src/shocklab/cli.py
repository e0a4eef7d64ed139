"""Batch command-line front end.

Subcommands: profile, simulate, rates, lemmas, poincare, sweep.  Flags
mirror ExperimentConfig fields; config files (TOML primary, JSON accepted)
supply the same keys.  The SHOCKLAB_OUT_ROOT environment variable prefixes
relative output directories.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import lemmas, metrics
from .config import ExperimentConfig, load_config, load_sweep, preset
from .errors import ShockLabError
from .flux import ShockParams
from .profile import (build_profile, export_profile_csv,
                      export_profile_metadata, general_flux_profile)
from .runner import EXIT_CONFIG, run, sweep


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, help="TOML/JSON config file")
    sub.add_argument("--scenario", choices=("theorem1", "theorem2",
                                            "theorem3", "custom"))
    for name, typ in (("u-minus", float), ("u-plus", float), ("p", float),
                      ("xi-min", float), ("xi-max", float), ("dx", float),
                      ("cfl", float), ("epsilon", float), ("t-end", float),
                      ("output-dt", float), ("amplitude", float),
                      ("width", float), ("offset", float), ("seed", int),
                      ("rate-delta", float), ("c0", float)):
        sub.add_argument(f"--{name}", type=typ, dest=name.replace("-", "_"))
    sub.add_argument("--flux", choices=("burgers", "quartic", "poly"))
    sub.add_argument("--scheme", choices=("engquist-osher", "lax-friedrichs"))
    sub.add_argument("--frame", choices=("fixed", "co-moving-gamma",
                                         "co-moving-shift"))
    sub.add_argument("--perturbation", choices=("gaussian", "square",
                                                "smooth-random"))
    sub.add_argument("--backend", choices=("numba", "numpy"))
    sub.add_argument("--out-dir", dest="output_dir")


def _config_from_args(args) -> ExperimentConfig:
    cli_overrides = {}
    for field in ExperimentConfig.__dataclass_fields__:
        if field == "scenario":
            continue
        if hasattr(args, field) and getattr(args, field) is not None:
            cli_overrides[field] = getattr(args, field)
    if args.config:
        base = load_config(args.config)
        merged = base.echo()
        merged["flux_coeffs"] = tuple(merged["flux_coeffs"])
        merged["rate_checks"] = tuple(tuple(rc) for rc in merged["rate_checks"])
        merged["snapshot_times"] = tuple(merged["snapshot_times"])
        merged.update(cli_overrides)
        scenario = args.scenario or merged["scenario"]
        merged.pop("scenario")
        return preset(scenario, **merged)
    scenario = args.scenario or "custom"
    return preset(scenario, **cli_overrides)


def cmd_profile(args) -> int:
    cfg = _config_from_args(args)
    params = ShockParams(cfg.u_minus, cfg.u_plus, cfg.p, cfg.build_flux())
    n = cfg.n_cells()
    if params.flux.kind == "burgers":
        prof = build_profile(params, cfg.xi_min, cfg.xi_max, n, cfg.profile_tol)
    else:
        prof = general_flux_profile(params, cfg.xi_min, cfg.xi_max, n,
                                    cfg.profile_tol)
    out = cfg.resolved_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    export_profile_csv(prof, out / "profile.csv")
    export_profile_metadata(prof, out / "profile_meta.json")
    print(f"profile: n={n} x_L={prof.x_L:.6g} x_R={prof.x_R:.6g} "
          f"width={prof.support_width():.6g}")
    return 0


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    return run(cfg)


def cmd_rates(args) -> int:
    series = metrics.read_timeseries_csv(args.timeseries)
    window = (args.window[0], args.window[1]) if args.window else None
    fit = metrics.fit_from_timeseries(series, args.norm, args.r, window)
    report = {"norm": args.norm}
    report.update(fit.to_dict())
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0 if fit.passed else 1


def cmd_lemmas(args) -> int:
    certificate = {}
    p0 = lemmas.estimate_p0(args.tolerance)
    certificate["p0_estimate"] = p0
    certificate["bracket"] = list(lemmas.P0_BRACKET)
    if not args.p0_only:
        scans = []
        for p in args.scan_p:
            c0 = lemmas.default_c0(p)
            scans.append(lemmas.scan_abm(p, c0).to_dict())
            rnd = lemmas.scan_abm_random(p, c0, n_pairs=args.n_random,
                                         seed=args.seed)
            scans[-1]["random_scan"] = rnd
        certificate["scans"] = scans
        ode_tests = []
        for alpha in (0.0, 0.5, 1.0):
            for beta in (0.5, 1.0, 2.0):
                for gamma_exp in (0.5, 1.0, 2.0):
                    params = lemmas.RateOdeParams(1.0, 1.0, alpha, beta,
                                                  gamma_exp)
                    rep = lemmas.ode_comparison_test(params, t_max=args.t_max)
                    ode_tests.append({"alpha": alpha, "beta": beta,
                                      "gamma": gamma_exp,
                                      "passed": rep["passed"],
                                      "mu": rep["mu"], "C0": rep["C0"]})
        certificate["ode_tests"] = ode_tests
        certificate["pass"] = all(s["pass"] and s["random_scan"]["passed"]
                                  for s in scans) \
            and all(t["passed"] for t in ode_tests)
    text = json.dumps(certificate, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    if args.p0_only:
        return 0
    return 0 if certificate["pass"] else 1


def cmd_poincare(args) -> int:
    rng = np.random.default_rng(args.seed)
    u_minus, u_plus = args.u_minus, args.u_plus
    results = []
    # the linear profile is the extremal direction: lhs = 2/3, rhs = 10/9 on (-1, 1)
    lhs, rhs, ok = metrics.weighted_poincare_check(lambda y: y, u_minus, u_plus)
    results.append({"w": "identity", "lhs": lhs, "rhs": rhs, "pass": ok})
    span = u_minus - u_plus
    for k in range(args.n_funcs):
        coeffs = rng.standard_normal((2, 5))

        def w(y, c=coeffs):
            s = np.zeros_like(y)
            for m in range(1, 6):
                phase = np.pi * m * (y - u_plus) / span
                s += c[0, m - 1] * np.cos(phase) + c[1, m - 1] * np.sin(phase)
            return s

        lhs, rhs, ok = metrics.weighted_poincare_check(w, u_minus, u_plus)
        results.append({"w": f"trig-{k}", "lhs": lhs, "rhs": rhs, "pass": ok})
    n_fail = sum(not r["pass"] for r in results)
    report = {"n_checked": len(results), "n_failed": n_fail,
              "pass": n_fail == 0, "results": results if args.verbose else
              [r for r in results if not r["pass"]]}
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(json.dumps({k: report[k] for k in ("n_checked", "n_failed", "pass")}))
    return 0 if report["pass"] else 1


def cmd_sweep(args) -> int:
    configs = load_sweep(args.sweep_config)
    return sweep(configs, parallelism=args.parallelism)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="shocklab",
        description="viscous shock profiles, perturbed-shock runs, "
                    "decay-rate and lemma verification")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("profile", help="tabulate and export a shock profile")
    _add_config_flags(sp)
    sp.set_defaults(fn=cmd_profile)

    ss = subs.add_parser("simulate", help="run a perturbed-shock experiment")
    _add_config_flags(ss)
    ss.set_defaults(fn=cmd_simulate)

    sr = subs.add_parser("rates", help="fit decay rates from a TimeSeries CSV")
    sr.add_argument("timeseries", type=Path)
    sr.add_argument("--norm", default="l2", choices=("l1", "l2", "linf"))
    sr.add_argument("--r", type=float, required=True,
                    help="theoretical exponent r in (1+t)^(-r)")
    sr.add_argument("--window", type=float, nargs=2, metavar=("TA", "TB"))
    sr.add_argument("--out", type=Path)
    sr.set_defaults(fn=cmd_rates)

    sl = subs.add_parser("lemmas", help="emit the lemma certificate JSON")
    sl.add_argument("--p0", dest="p0_only", action="store_true",
                    help="estimate the threshold p0 only")
    sl.add_argument("--tolerance", type=float, default=1e-8)
    sl.add_argument("--scan-p", type=float, nargs="*",
                    default=[1.0, 1.3, 1.6, 1.9])
    sl.add_argument("--n-random", type=int, default=100_000)
    sl.add_argument("--seed", type=int, default=20260810)
    sl.add_argument("--t-max", type=float, default=1000.0)
    sl.add_argument("--out", type=Path)
    sl.set_defaults(fn=cmd_lemmas)

    sq = subs.add_parser("poincare", help="weighted Poincare inequality checks")
    sq.add_argument("--n-funcs", type=int, default=200)
    sq.add_argument("--seed", type=int, default=7)
    sq.add_argument("--u-minus", type=float, default=1.0)
    sq.add_argument("--u-plus", type=float, default=-1.0)
    sq.add_argument("--verbose", action="store_true")
    sq.add_argument("--out", type=Path)
    sq.set_defaults(fn=cmd_poincare)

    sw = subs.add_parser("sweep", help="run a batch of configs")
    sw.add_argument("sweep_config", type=Path)
    sw.add_argument("--parallelism", type=int, default=1)
    sw.set_defaults(fn=cmd_sweep)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ShockLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
