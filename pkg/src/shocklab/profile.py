"""Viscous shock wave construction U(xi) by quadrature inversion.

The traveling wave satisfies U' = -G(U)^(1/p) with G vanishing at the
far-field states, so xi as a function of U is the singular integral

    xi(U) = -int_{U0}^{U} dw / G(w)^(1/p),        U(0) = U0 = (u_- + u_+)/2.

The integrand blows up at the endpoints.  Each half-profile is integrated
in a variable that removes the singularity exactly:

  * middle region: w itself (integrand smooth),
  * p > 1 endpoint (Burgers): w = u_end -/+ r^(p/(p-1)), which cancels the
    algebraic factor and leaves a smooth integrand down to r = 0, giving
    machine-accurate support endpoints x_L, x_R,
  * p = 1 endpoint (simple zero of G): log distance lambda = -ln|w - u_end|,
    in which the integrand tends to a constant; the tail is tabulated until
    |U - u_pm| < 1e-12 and extended by the constant states.

Grid values are then recovered by a vectorized Newton iteration on the
panel-wise quadrature, so the tabulation is limited only by the panel
quadrature error (estimated per panel and refined against `tol`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, ProfileToleranceError
from .flux import BURGERS, ShockParams

_GL_NODES, _GL_WEIGHTS = leggauss(16)
_GL_NODES_COARSE, _GL_WEIGHTS_COARSE = leggauss(8)

_TAIL_FRACTION = 1e-13  # |U - u_pm| cap (relative to half-strength) for p = 1 tails


def profile_slope(U_val: float, params: ShockParams) -> float:
    """Traveling-wave slope -(0.5*(u_- - U)*(U - u_+))^(1/p) (Burgers)."""
    if params.flux.kind != BURGERS:
        raise DomainError("profile_slope applies to the Burgers flux only")
    if U_val < params.u_plus or U_val > params.u_minus:
        raise DomainError(
            f"U = {U_val} outside the shock range [{params.u_plus}, {params.u_minus}]"
        )
    g = 0.5 * (params.u_minus - U_val) * (U_val - params.u_plus)
    if g <= 0.0:
        return 0.0
    return -(g ** (1.0 / params.p))


def _burgers_slope_array(U: np.ndarray, params: ShockParams) -> np.ndarray:
    g = 0.5 * (params.u_minus - U) * (U - params.u_plus)
    return -np.maximum(g, 0.0) ** (1.0 / params.p)


@dataclass(frozen=True)
class Profile:
    """Tabulated traveling wave on a uniform grid, with slope table and support."""

    xi: np.ndarray
    U: np.ndarray
    Uprime: np.ndarray
    x_L: float
    x_R: float
    params: ShockParams
    kind: str  # "burgers" | "general"
    sides: Optional[tuple] = None  # (right, left) half-profile integrators

    @property
    def U0(self) -> float:
        return self.params.u_mid

    @property
    def dx(self) -> float:
        return float(self.xi[1] - self.xi[0])

    def slope_of_u(self, U_vals: np.ndarray) -> np.ndarray:
        """Exact slope formula applied to given U values (used at cell faces)."""
        if self.kind == "burgers":
            return _burgers_slope_array(np.asarray(U_vals, dtype=float), self.params)
        return -_general_g(self.params)(np.asarray(U_vals, dtype=float))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Monotone cubic evaluation off the tabulated grid, constant outside."""
        interp = _pchip_of(self)
        x = np.asarray(x, dtype=float)
        out = interp(np.clip(x, self.xi[0], self.xi[-1]))
        out = np.where(x < self.xi[0], self.U[0], out)
        out = np.where(x > self.xi[-1], self.U[-1], out)
        return out

    def exact_at(self, x: np.ndarray) -> np.ndarray:
        """Re-run the quadrature inversion at arbitrary points (no interpolation)."""
        if self.sides is None:
            return self.evaluate(x)
        x = np.asarray(x, dtype=float)
        right, left = self.sides
        U = np.full_like(x, self.params.u_mid)
        pos = x > 0.0
        neg = x < 0.0
        U[pos] = self.params.u_plus + right.invert(x[pos])
        U[neg] = self.params.u_minus - left.invert(-x[neg])
        return U

    def support_width(self) -> float:
        return self.x_R - self.x_L


_pchip_cache: dict[int, PchipInterpolator] = {}


def _pchip_of(profile: Profile) -> PchipInterpolator:
    key = id(profile)
    if key not in _pchip_cache:
        if len(_pchip_cache) > 64:
            _pchip_cache.clear()
        _pchip_cache[key] = PchipInterpolator(profile.xi, profile.U, extrapolate=True)
    return _pchip_cache[key]


# ---------------------------------------------------------------------------
# half-profile integration machinery


class _Region:
    """One smooth region of a half-profile in its own integration variable v.

    `integrand(v)` is d(xi)/dv > 0 and `delta_of_v(v)` maps v to the distance
    |U - u_end| of the far-field state this side approaches.
    """

    def __init__(self, v_lo, v_hi, n_panels, integrand, delta_of_v):
        self.integrand = integrand
        self.delta_of_v = delta_of_v
        self.set_panels(v_lo, v_hi, n_panels)

    def set_panels(self, v_lo, v_hi, n_panels):
        self.bounds = np.linspace(v_lo, v_hi, n_panels + 1)

    def panel_integrals(self, nodes, weights):
        a = self.bounds[:-1]
        b = self.bounds[1:]
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        v = mid[:, None] + half[:, None] * nodes[None, :]
        vals = self.integrand(v)
        return half * (vals @ weights)


def _partial_gl(integrand, a, v):
    """Vectorized Gauss-Legendre of `integrand` over per-node intervals [a, v]."""
    half = 0.5 * (v - a)
    mid = 0.5 * (v + a)
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    return half * (integrand(pts) @ _GL_WEIGHTS)


class _HalfProfile:
    """One side of the wave: cumulative xi table plus vectorized inversion.

    g_reduced(delta) = G(U)/delta where delta is the distance to this side's
    far-field state; it stays positive and smooth down to delta = 0.
    """

    def __init__(self, g_reduced: Callable, p: float, delta0: float, tol: float,
                 endpoint_name: str):
        self.g_reduced = g_reduced
        self.p = p
        self.delta0 = delta0
        self.endpoint_name = endpoint_name
        self.finite_support = p > 1.0
        delta_c = 0.5 * delta0

        invp = 1.0 / p

        def lin_integrand(v):
            d = delta0 - v
            return (d * g_reduced(d)) ** (-invp)

        regions = [_Region(0.0, delta0 - delta_c, 16, lin_integrand, lambda v: delta0 - v)]

        if self.finite_support:
            ex = p / (p - 1.0)
            rc = delta_c ** (1.0 / ex)

            def pow_integrand(v):
                d = (rc - v) ** ex
                return ex * g_reduced(d) ** (-invp)

            regions.append(_Region(0.0, rc, 16, pow_integrand,
                                   lambda v: (rc - v) ** ex))
        else:
            lam_c = -np.log(delta_c)
            lam_max = -np.log(_TAIL_FRACTION * delta0)

            def log_integrand(v):
                d = np.exp(-(v + lam_c))
                return 1.0 / g_reduced(d)

            n_log = max(8, int(np.ceil(lam_max - lam_c)))
            regions.append(_Region(0.0, lam_max - lam_c, n_log, log_integrand,
                                   lambda v: np.exp(-(v + lam_c))))

        self.regions = regions
        self._tabulate(tol)

    def _tabulate(self, tol):
        for attempt in range(4):
            fine = [r.panel_integrals(_GL_NODES, _GL_WEIGHTS) for r in self.regions]
            coarse = [r.panel_integrals(_GL_NODES_COARSE, _GL_WEIGHTS_COARSE)
                      for r in self.regions]
            err = sum(float(np.sum(np.abs(f - c))) for f, c in zip(fine, coarse))
            if err <= tol:
                break
            if attempt == 3:
                raise ProfileToleranceError(self.endpoint_name, err, tol)
            for r in self.regions:
                r.set_panels(r.bounds[0], r.bounds[-1], 2 * (len(r.bounds) - 1))
        # cumulative xi at panel boundaries, flattened across regions
        cum = [np.zeros(1)]
        offset = 0.0
        self.region_offsets = []
        for f in fine:
            self.region_offsets.append(offset)
            cum.append(offset + np.cumsum(f))
            offset = float(cum[-1][-1])
        self.xi_total = offset
        self.cum = cum  # cum[k+1] aligns with regions[k].bounds[1:]

    def invert(self, xi_abs: np.ndarray) -> np.ndarray:
        """Distance-to-endpoint delta at each |xi| >= 0 (clamped past the support/tail)."""
        delta = np.empty_like(xi_abs)
        beyond = xi_abs >= self.xi_total
        delta[beyond] = 0.0
        for k, region in enumerate(self.regions):
            xi_lo_all = np.concatenate(([self.region_offsets[k]], self.cum[k + 1]))
            lo, hi = xi_lo_all[0], xi_lo_all[-1]
            sel = (~beyond) & (xi_abs >= lo) & (xi_abs < hi)
            if not np.any(sel):
                continue
            target = xi_abs[sel]
            idx = np.clip(np.searchsorted(xi_lo_all, target, side="right") - 1,
                          0, len(region.bounds) - 2)
            a = region.bounds[idx]
            b = region.bounds[idx + 1]
            xi_a = xi_lo_all[idx]
            xi_b = xi_lo_all[idx + 1]
            v = a + (b - a) * (target - xi_a) / (xi_b - xi_a)
            for _ in range(5):
                F = xi_a + _partial_gl(region.integrand, a, v) - target
                v = np.clip(v - F / region.integrand(v), a, b)
            delta[sel] = region.delta_of_v(v)
        return delta


def _burgers_g_reduced(params: ShockParams) -> Callable:
    delta = params.delta

    def g_reduced(d):
        return 0.5 * (delta - d)

    return g_reduced


def _general_g(params: ShockParams) -> Callable:
    """G(U) = f(u_-) + gamma*(U - u_-) - f(U), vectorized; positive on (u_+, u_-)."""
    flux = params.flux
    gamma = params.gamma
    fum = flux.f(params.u_minus)
    if flux.poly_coeffs is not None:
        poly = np.polynomial.Polynomial(flux.poly_coeffs)

        def g(U):
            return fum + gamma * (np.asarray(U) - params.u_minus) - poly(np.asarray(U))
    else:
        fvec = np.vectorize(flux.f, otypes=[float])

        def g(U):
            return fum + gamma * (np.asarray(U) - params.u_minus) - fvec(U)

    return g


def _general_g_reduced(params: ShockParams, side: str) -> Callable:
    """G(u_end -/+ delta)/delta without cancellation at small delta.

    Using the Rankine-Hugoniot identity G(u_end) = 0 exactly, the ratio
    reduces to gamma minus a difference quotient of f, which switches to the
    midpoint derivative once delta is too small for the quotient.
    """
    flux = params.flux
    gamma = params.gamma
    if flux.poly_coeffs is not None:
        poly = np.polynomial.Polynomial(flux.poly_coeffs)
        fvec, dfvec = poly, poly.deriv()
    else:
        fvec = np.vectorize(flux.f, otypes=[float])
        dfvec = np.vectorize(flux.df, otypes=[float])
    if side == "right":
        u_end, sgn = params.u_plus, 1.0
    else:
        u_end, sgn = params.u_minus, -1.0
    f_end = float(fvec(u_end))

    def g_reduced(d):
        d = np.asarray(d, dtype=float)
        safe = np.maximum(d, 1e-300)
        quot = (fvec(u_end + sgn * d) - f_end) / (sgn * safe)
        mid = dfvec(u_end + sgn * 0.5 * d)
        dfq = np.where(d > 1e-6, quot, mid)
        return sgn * (gamma - dfq)

    return g_reduced


def _make_grid(xi_min: float, xi_max: float, n: int) -> np.ndarray:
    if not xi_min < 0.0 < xi_max:
        raise DomainError("grid must straddle the anchor xi = 0")
    if n < 16:
        raise DomainError(f"need n >= 16 grid points, got {n}")
    return np.linspace(xi_min, xi_max, n)


def _assemble(params, xi, right: _HalfProfile, left: _HalfProfile, kind: str) -> Profile:
    U = np.full_like(xi, params.u_mid)
    pos = xi > 0.0
    neg = xi < 0.0
    U[pos] = params.u_plus + right.invert(xi[pos])
    U[neg] = params.u_minus - left.invert(-xi[neg])
    if kind == "burgers":
        Uprime = _burgers_slope_array(U, params)
    else:
        Uprime = -np.maximum(_general_g(params)(U), 0.0)
    if right.finite_support:
        x_R = right.xi_total
        x_L = -left.xi_total
        Uprime[(xi <= x_L) | (xi >= x_R)] = 0.0
    else:
        x_R = np.inf
        x_L = -np.inf
        # constant extension past the tabulated tails
        Uprime[U >= params.u_minus] = 0.0
        Uprime[U <= params.u_plus] = 0.0
    return Profile(xi=xi, U=U, Uprime=Uprime, x_L=x_L, x_R=x_R,
                   params=params, kind=kind, sides=(right, left))


def build_profile(params: ShockParams, xi_min: float, xi_max: float,
                  n: int, tol: float = 1e-10) -> Profile:
    """Tabulate the Burgers-flux shock wave for p >= 1 on a uniform grid."""
    if params.flux.kind != BURGERS:
        raise DomainError("build_profile requires the Burgers flux; "
                          "see general_flux_profile for p = 1 convex fluxes")
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    xi = _make_grid(xi_min, xi_max, n)
    g_red = _burgers_g_reduced(params)
    half = 0.5 * params.delta
    right = _HalfProfile(g_red, params.p, half, tol, "right (u_plus)")
    left = _HalfProfile(g_red, params.p, half, tol, "left (u_minus)")
    return _assemble(params, xi, right, left, "burgers")


def general_flux_profile(params: ShockParams, xi_min: float, xi_max: float,
                         n: int, tol: float = 1e-10) -> Profile:
    """Tabulate the p = 1 shock wave for a general convex flux.

    The once-integrated wave equation U' = f(U) - f(u_-) - gamma*(U - u_-)
    is inverted by the same endpoint-aware quadrature; G has simple zeros at
    u_pm so both tails are exponential.
    """
    if params.p != 1.0:
        raise DomainError("general_flux_profile is stated for p = 1 only")
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    pad = 0.05 * params.delta
    params.flux.check_convexity(params.u_plus - pad, params.u_minus + pad)
    xi = _make_grid(xi_min, xi_max, n)
    half = 0.5 * params.delta
    right = _HalfProfile(_general_g_reduced(params, "right"), 1.0, half, tol,
                         "right (u_plus)")
    left = _HalfProfile(_general_g_reduced(params, "left"), 1.0, half, tol,
                        "left (u_minus)")
    return _assemble(params, xi, right, left, "general")


# ---------------------------------------------------------------------------
# export


def export_profile_csv(profile: Profile, path) -> None:
    """Write `xi,U,Uprime` rows in round-trip decimal."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("xi,U,Uprime\n")
        for x, u, up in zip(profile.xi, profile.U, profile.Uprime):
            fh.write(f"{float(x)!r},{float(u)!r},{float(up)!r}\n")


def export_profile_metadata(profile: Profile, path) -> None:
    meta = {
        "u_minus": profile.params.u_minus,
        "u_plus": profile.params.u_plus,
        "p": profile.params.p,
        "gamma": profile.params.gamma,
        "x_L": profile.x_L if np.isfinite(profile.x_L) else "-inf",
        "x_R": profile.x_R if np.isfinite(profile.x_R) else "inf",
        "kind": profile.kind,
        "n": int(len(profile.xi)),
        "xi_min": float(profile.xi[0]),
        "xi_max": float(profile.xi[-1]),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
