"""Norms, functionals and decay-rate fits quantified by the theorems.

Everything here is a pure function of grid snapshots; the solver calls
these at output times and the rate machinery post-processes the resulting
TimeSeries.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, FitError
from .flux import BURGERS, ShockParams
from .lemmas import default_c0
from .profile import Profile

CSV_COLUMNS = ("t", "X", "Xdot", "l1", "l2", "linf", "dissipation",
               "mass_residual")


@dataclass
class TimeSeries:
    """Per-output-time record of the shift, perturbation norms and D(t)."""

    t: np.ndarray
    X: np.ndarray
    Xdot: np.ndarray
    l1: np.ndarray
    l2: np.ndarray
    linf: np.ndarray
    dissipation: np.ndarray
    mass_residual: np.ndarray
    extras: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        if name in CSV_COLUMNS:
            return getattr(self, name)
        return self.extras[name]

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            cols = [getattr(self, c) for c in CSV_COLUMNS]
            for row in zip(*cols):
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_timeseries_csv(path) -> TimeSeries:
    data = np.genfromtxt(path, delimiter=",", names=True)
    cols = {name: np.atleast_1d(data[name]) for name in CSV_COLUMNS}
    return TimeSeries(**cols)


# ---------------------------------------------------------------------------
# norms


def norm_of_samples(diff: np.ndarray, dx: float, q: float) -> float:
    """Trapezoidal L^q norm of grid samples; grid max for q = inf."""
    diff = np.abs(np.asarray(diff, dtype=float))
    if np.isinf(q):
        return float(np.max(diff))
    if q < 1.0:
        raise DomainError(f"norm order q must be >= 1, got {q}")
    w = diff**q
    integral = dx * (np.sum(w) - 0.5 * (w[0] + w[-1]))
    return float(integral ** (1.0 / q))


def interp_shifted(u: np.ndarray, dx: float, shift: float) -> np.ndarray:
    """Monotone-cubic samples of u(. + shift) on the same grid, clamped at
    the far-field boundary values."""
    n = u.size
    if abs(shift) >= (n - 1) * dx:
        raise DomainError(
            f"shift {shift} moves the evaluation outside the simulated domain")
    interp = PchipInterpolator(np.arange(n), u, extrapolate=False)
    pos = np.arange(n) + shift / dx
    out = interp(np.clip(pos, 0.0, n - 1.0))
    out = np.where(pos <= 0.0, u[0], out)
    out = np.where(pos >= n - 1.0, u[-1], out)
    return out


def _aligned_diff(state, profile: Profile, X: float) -> np.ndarray:
    if state.n != profile.xi.size or abs(state.dx - profile.dx) > 1e-12 \
            or abs(state.x0 - profile.xi[0]) > 1e-9:
        raise DomainError("state grid and profile grid are misaligned")
    if X == 0.0:
        return state.values - profile.U
    return interp_shifted(state.values, state.dx, X) - profile.U


def perturbation_norm(state, profile: Profile, X: float, q: float) -> float:
    """L^q norm of u(., + X) - U on the shared grid."""
    return norm_of_samples(_aligned_diff(state, profile, X), state.dx, q)


# ---------------------------------------------------------------------------
# dissipation functional


def face_profile_slopes(profile: Profile) -> np.ndarray:
    """Exact profile slope at cell faces (avoids differencing the table)."""
    face_x = profile.xi[:-1] + 0.5 * profile.dx
    return profile.slope_of_u(profile.exact_at(face_x))


def dissipation_of_samples(v: np.ndarray, profile: Profile,
                           Up_face: np.ndarray, Xdot: float,
                           params: ShockParams, c0: float) -> float:
    """D(t) from an aligned snapshot v; y-integrals via the substitution
    y = U(x), so they reduce to |U'|-weighted x-quadratures on the support."""
    dx = profile.dx
    p = params.p
    g = (v[1:] - v[:-1]) / dx
    e = g - Up_face
    grad_term = (5.0 / 3.0) * dx * float(
        np.sum(c0 * np.abs(e) ** (p + 1.0)
               + np.abs(Up_face) ** (p - 1.0) * e**2))
    w = v - profile.U
    absUp = np.abs(profile.Uprime)
    int_w = dx * float(np.dot(w, absUp))
    int_w2 = dx * float(np.dot(w * w, absUp))
    return grad_term + 2.0 * (Xdot - params.gamma) * int_w - int_w2


def dissipation(state, profile: Profile, X: float, Xdot: float,
                params: ShockParams, c0: Optional[float] = None) -> float:
    """Assemble D(t) = 5/3 int(c0|v_x - U'|^(p+1) + |U'|^(p-1)(v_x - U')^2)
    + 2(X' - gamma) int w dy - int w^2 dy for the aligned state."""
    if params.flux.kind != BURGERS:
        raise DomainError("the dissipation functional is a Burgers-frame object")
    if c0 is None:
        c0 = default_c0(params.p)
    diff = _aligned_diff(state, profile, X)
    v = diff + profile.U
    return dissipation_of_samples(v, profile, face_profile_slopes(profile),
                                  Xdot, params, c0)


# ---------------------------------------------------------------------------
# inequality checkers


def weighted_poincare_check(w: Callable, u_minus: float, u_plus: float,
                            n: int = 4001) -> tuple[float, float, bool]:
    """Both sides of int (w - wbar)^2 dy <= (5/6) int (u_- - y)(y - u_+) w_y^2 dy.

    w is sampled on a fine y-grid; the derivative uses second-order
    differences.  Returns (lhs, rhs, pass).
    """
    y = np.linspace(u_plus, u_minus, n)
    wv = np.asarray(w(y), dtype=float)
    wbar = np.trapezoid(wv, y) / (u_minus - u_plus)
    lhs = float(np.trapezoid((wv - wbar) ** 2, y))
    wy = np.gradient(wv, y)
    weight = (u_minus - y) * (y - u_plus)
    rhs = float(5.0 / 6.0 * np.trapezoid(weight * wy**2, y))
    return lhs, rhs, lhs <= rhs * (1.0 + 1e-6) + 1e-15


def change_of_variables_identity(state, profile: Profile, X: float,
                                 params: ShockParams) -> tuple[float, float, float]:
    """int (u_- - y)(y - u_+) w_y^2 dy  vs  2 int |U'|^(p-1)(v_x - U')^2 dx.

    The left side is integrated natively in y = U(x) (nonuniform grid), the
    right side in x with face differences; both converge to the same value.
    Returns (lhs, rhs, relative gap).
    """
    diff = _aligned_diff(state, profile, X)
    v = diff + profile.U
    mask = profile.Uprime < 0.0
    if np.count_nonzero(mask) < 5:
        return 0.0, 0.0, 0.0
    y = profile.U[mask]
    w = diff[mask]
    wy = np.gradient(w, y)
    weight = (params.u_minus - y) * (y - params.u_plus)
    lhs = float(abs(np.trapezoid(weight * wy**2, y)))
    Up_face = face_profile_slopes(profile)
    g = (v[1:] - v[:-1]) / profile.dx
    e = g - Up_face
    rhs = 2.0 * profile.dx * float(
        np.sum(np.abs(Up_face) ** (params.p - 1.0) * e**2))
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return lhs, rhs, abs(lhs - rhs) / scale


# ---------------------------------------------------------------------------
# antiderivative (Theorem 3) norms


class AntiderivativeNorm(NamedTuple):
    value: float
    boundary_residual: float


def antiderivative_from_samples(phi: np.ndarray, dx: float,
                                r: float) -> AntiderivativeNorm:
    """Cumulative-trapezoid primitive of phi, then its L^r norm; the value
    of the primitive at the right boundary is the mass-residual diagnostic."""
    if r < 2.0:
        raise DomainError("antiderivative norm is stated for r >= 2")
    mids = 0.5 * (phi[1:] + phi[:-1]) * dx
    Phi = np.concatenate(([0.0], np.cumsum(mids)))
    return AntiderivativeNorm(norm_of_samples(Phi, dx, r), float(abs(Phi[-1])))


def antiderivative_norm(state, profile: Profile, r: float,
                        ref_shift: float = 0.0,
                        mass_tol: float = 1e-3) -> AntiderivativeNorm:
    """L^r norm of Phi(xi) = int_{-inf}^xi (u - U(. - ref_shift)).

    The zero-mass shift should be applied first (ref_shift from mass_shift),
    otherwise Phi does not vanish at +inf; a residual above `mass_tol`
    triggers a warning attached to the returned diagnostic.
    """
    if ref_shift != 0.0:
        ref = profile.exact_at(profile.xi - ref_shift)
    else:
        ref = profile.U
    out = antiderivative_from_samples(state.values - ref, state.dx, r)
    if out.boundary_residual > mass_tol:
        warnings.warn(
            f"antiderivative boundary residual {out.boundary_residual:.3e} "
            f"exceeds {mass_tol:.1e}: zero-mass shift not in effect")
    return out


# ---------------------------------------------------------------------------
# decay-rate fitting


@dataclass(frozen=True)
class RateFit:
    """Least-squares slope of log norm vs log(1+t) plus the sup-ratio test.

    The theorems give upper bounds C (1+t)^(-r): the pass criterion is that
    norm(t) (1+t)^r stays bounded and non-growing (last-decade sup at most
    1.1x the window median), so faster observed decay passes.
    """

    t_a: float
    t_b: float
    C: float
    slope: float
    theoretical_r: float
    sup_ratio_median: float
    sup_ratio_last_decade: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "window": [self.t_a, self.t_b],
            "C": self.C,
            "slope": self.slope,
            "theoretical_r": self.theoretical_r,
            "sup_ratio_median": self.sup_ratio_median,
            "sup_ratio_last_decade": self.sup_ratio_last_decade,
            "pass": self.passed,
        }


def default_window(t_end: float) -> tuple[float, float]:
    """Fit window: the last temporal decade (transients excluded)."""
    return (t_end / 10.0, t_end)


def fit_decay_rate(t: np.ndarray, values: np.ndarray,
                   window: tuple[float, float],
                   theoretical_r: float) -> RateFit:
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    t_a, t_b = window
    sel = (t >= t_a) & (t <= t_b)
    if np.count_nonzero(sel) < 20:
        raise FitError(f"need >= 20 samples in window [{t_a}, {t_b}], "
                       f"got {np.count_nonzero(sel)}")
    tw = t[sel]
    vw = values[sel]
    if np.any(vw <= 0.0) or not np.all(np.isfinite(vw)):
        raise FitError("non-positive or non-finite norms in the fit window")
    lx = np.log1p(tw)
    ly = np.log(vw)
    A = np.vstack([np.ones_like(lx), lx]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    C = float(np.exp(coef[0]))
    slope = float(coef[1])
    ratio = vw * (1.0 + tw) ** theoretical_r
    med = float(np.median(ratio))
    last = ratio[tw >= t_b / 10.0]
    sup_last = float(np.max(last)) if last.size else float(np.max(ratio))
    passed = bool(np.all(np.isfinite(ratio)) and sup_last <= 1.1 * med)
    return RateFit(t_a=float(t_a), t_b=float(t_b), C=C, slope=slope,
                   theoretical_r=float(theoretical_r),
                   sup_ratio_median=med, sup_ratio_last_decade=sup_last,
                   passed=passed)


def fit_from_timeseries(series: TimeSeries, column: str,
                        theoretical_r: float,
                        window: Optional[tuple[float, float]] = None) -> RateFit:
    if window is None:
        window = default_window(float(series.t[-1]))
    return fit_decay_rate(series.t, series.column(column), window,
                          theoretical_r)
