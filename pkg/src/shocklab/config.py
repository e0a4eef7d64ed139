"""Experiment configuration: scenario presets, validation, TOML/JSON parsing."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .flux import FluxSpec, burgers_flux, polynomial_flux, quartic_flux

OUTPUT_ROOT_ENV = "SHOCKLAB_OUT_ROOT"

SCENARIOS = ("theorem1", "theorem2", "theorem3", "custom")

# threshold below which the degenerate-viscosity theory is claimed; keep a
# conservative cached value of the case-2 root (re-derived by lemmas.estimate_p0)
P0_CONSERVATIVE = 39.0 / 20.0


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str = "custom"
    # shock parameters
    u_minus: float = 1.0
    u_plus: float = -1.0
    p: float = 1.5
    flux: str = "burgers"  # "burgers" | "quartic" | "poly"
    flux_coeffs: tuple = ()
    flux_cf: float = 1.0
    # grid
    xi_min: float = -40.0
    xi_max: float = 40.0
    dx: float = 0.02
    profile_tol: float = 1e-10
    # solver
    cfl: float = 0.85
    epsilon: float = 0.0
    scheme: str = "engquist-osher"
    frame: str = "co-moving-shift"
    t_end: float = 2000.0
    output_dt: float = 2.0
    # initial data
    perturbation: str = "gaussian"
    amplitude: float = 0.3
    width: float = 1.0
    offset: float = 0.0
    seed: int = 0
    # metrics
    c0: Optional[float] = None
    rate_delta: float = 0.02
    antiderivative_r: Optional[float] = None
    rate_checks: tuple = ()  # ((column, r), ...) for custom scenarios
    snapshot_times: tuple = ()
    # output
    output_dir: str = "out"
    backend: Optional[str] = None

    def resolved_output_dir(self) -> Path:
        root = os.environ.get(OUTPUT_ROOT_ENV, "")
        base = Path(root) if root else Path(".")
        out = Path(self.output_dir)
        return out if out.is_absolute() else base / out

    def n_cells(self) -> int:
        n = round((self.xi_max - self.xi_min) / self.dx)
        if abs(self.xi_min + n * self.dx - self.xi_max) > 1e-9:
            raise ConfigError("dx must divide the domain length")
        return int(n) + 1

    def build_flux(self) -> FluxSpec:
        if self.flux == "burgers":
            return burgers_flux()
        if self.flux == "quartic":
            return quartic_flux()
        if self.flux == "poly":
            if not self.flux_coeffs:
                raise ConfigError("flux 'poly' requires flux_coeffs")
            return polynomial_flux(self.flux_coeffs, self.flux_cf)
        raise ConfigError(f"unknown flux {self.flux!r}")

    def theorem_rate_checks(self) -> tuple:
        """(column, theoretical exponent) pairs implied by the scenario."""
        if self.scenario == "theorem1":
            return (("l2", 1.0 / (4.0 * self.p)),
                    ("linf", 1.0 / (2.0 * self.p * (self.p + 3.0))))
        if self.scenario == "theorem2":
            return (("l2", 0.25), ("linf", 1.0 / 6.0))
        if self.scenario == "theorem3":
            return (("l2", 0.125 - self.rate_delta),
                    ("linf", 1.0 / 6.0 - self.rate_delta))
        return tuple(self.rate_checks)

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.scenario == "theorem1":
            if not (1.0 < self.p <= P0_CONSERVATIVE):
                raise ConfigError(
                    f"theorem1 requires 1 < p <= p0 (~{P0_CONSERVATIVE}), got {self.p}")
            if self.flux != "burgers":
                raise ConfigError("theorem1 is stated for the Burgers flux")
        elif self.scenario == "theorem2":
            if self.p != 1.0 or self.flux != "burgers":
                raise ConfigError("theorem2 requires p = 1 and the Burgers flux")
        elif self.scenario == "theorem3":
            if self.p != 1.0:
                raise ConfigError("theorem3 requires p = 1 (linear viscosity)")
            if self.flux == "burgers":
                raise ConfigError(
                    "theorem3 exercises a general convex flux; use 'quartic' or 'poly'")
        if not self.xi_min < 0.0 < self.xi_max:
            raise ConfigError("domain must contain the anchor xi = 0")
        self.n_cells()

    def echo(self) -> dict:
        d = asdict(self)
        d["flux_coeffs"] = list(self.flux_coeffs)
        d["rate_checks"] = [list(rc) for rc in self.rate_checks]
        d["snapshot_times"] = list(self.snapshot_times)
        return d


_PRESETS = {
    # stationary shock (gamma = 0), Gaussian bump; dx relaxed to 0.04 for the
    # degenerate-viscosity sweep so three runs fit the stated time budget
    "theorem1": dict(scenario="theorem1", p=1.5, dx=0.04, t_end=2000.0,
                     frame="co-moving-shift", amplitude=0.3),
    "theorem2": dict(scenario="theorem2", p=1.0, dx=0.02, t_end=2000.0,
                     frame="co-moving-shift", amplitude=0.3),
    "theorem3": dict(scenario="theorem3", p=1.0, flux="quartic", dx=0.04,
                     t_end=2000.0, frame="co-moving-gamma", amplitude=0.3,
                     antiderivative_r=2.0),
}


def preset(scenario: str, **overrides) -> ExperimentConfig:
    if scenario == "custom":
        cfg = ExperimentConfig(**overrides)
    else:
        if scenario not in _PRESETS:
            raise ConfigError(f"unknown scenario {scenario!r}")
        base = dict(_PRESETS[scenario])
        base.update(overrides)
        cfg = ExperimentConfig(**base)
    cfg.validate()
    return cfg


def _coerce(raw: dict) -> dict:
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("flux_coeffs", "rate_checks", "snapshot_times"):
        if key in raw:
            raw[key] = tuple(tuple(v) if isinstance(v, list) else v
                             for v in raw[key]) if key == "rate_checks" \
                else tuple(raw[key])
    return raw


def load_config(path) -> ExperimentConfig:
    """Load a single experiment config from TOML (primary) or JSON."""
    path = Path(path)
    if path.suffix == ".json":
        raw = json.loads(path.read_text())
    else:
        raw = tomllib.loads(path.read_text())
    scenario = raw.pop("scenario", "custom")
    return preset(scenario, **_coerce(raw))


def load_sweep(path) -> list[ExperimentConfig]:
    """Load a sweep file: a top-level `runs` list of config tables."""
    path = Path(path)
    if path.suffix == ".json":
        raw = json.loads(path.read_text())
    else:
        raw = tomllib.loads(path.read_text())
    runs = raw.get("runs")
    if not isinstance(runs, list):
        raise ConfigError("sweep file needs a top-level 'runs' array")
    shared = {k: v for k, v in raw.items() if k != "runs"}
    configs = []
    for entry in runs:
        merged = dict(shared)
        merged.update(entry)
        scenario = merged.pop("scenario", "custom")
        configs.append(preset(scenario, **_coerce(merged)))
    return configs
