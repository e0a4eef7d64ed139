"""Convex flux functions and the shock parameter bundle.

All solvers work with a normalized flux satisfying f(0) = f'(0) = 0 and
f''(v) >= c_f > 0 on the working range.  Burgers f(u) = u^2/2 is the
special case every degenerate-viscosity result is stated for; general
convex fluxes are admitted only with linear viscosity (p = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateShockError, DomainError

BURGERS = "burgers"
CUSTOM_CONVEX = "custom-convex"


@dataclass(frozen=True)
class FluxSpec:
    """A convex flux f with its derivative and a convexity floor c_f.

    ``poly_coeffs`` (ascending powers) is optional; when present the fast
    solver kernels evaluate the flux from the coefficients instead of
    calling back into Python.
    """

    kind: str
    f: Callable[[float], float]
    df: Callable[[float], float]
    c_f: float
    poly_coeffs: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in (BURGERS, CUSTOM_CONVEX):
            raise DomainError(f"unknown flux kind {self.kind!r}")
        if not self.c_f > 0.0:
            raise DomainError("convexity floor c_f must be positive")
        if abs(float(self.f(0.0))) > 1e-12 or abs(float(self.df(0.0))) > 1e-12:
            raise DomainError("flux must satisfy f(0) = f'(0) = 0")

    def check_convexity(self, lo: float, hi: float, n: int = 201) -> None:
        """Verify the second difference quotient stays above c_f on [lo, hi].

        Raises DomainError on the first sampled violation.
        """
        v = np.linspace(lo, hi, n)
        h = max(1e-5, 1e-5 * (hi - lo))
        fv = np.array([self.f(x) for x in v])
        fp = np.array([self.f(x + h) for x in v])
        fm = np.array([self.f(x - h) for x in v])
        quot = (fp - 2.0 * fv + fm) / h**2
        bad = quot < self.c_f * (1.0 - 1e-6)
        if np.any(bad):
            where = v[bad][0]
            raise DomainError(
                f"flux second difference quotient {quot[bad][0]:.6g} below "
                f"c_f = {self.c_f:.6g} at v = {where:.6g}"
            )


def burgers_flux() -> FluxSpec:
    """The quadratic Burgers flux f(u) = u^2/2."""
    return FluxSpec(
        kind=BURGERS,
        f=lambda u: 0.5 * u * u,
        df=lambda u: u,
        c_f=1.0,
        poly_coeffs=(0.0, 0.0, 0.5),
    )


def polynomial_flux(coeffs, c_f: float) -> FluxSpec:
    """Convex flux given by ascending polynomial coefficients.

    The constant and linear coefficients must vanish (f(0) = f'(0) = 0).
    """
    coeffs = tuple(float(c) for c in coeffs)
    poly = np.polynomial.Polynomial(coeffs)
    dpoly = poly.deriv()
    return FluxSpec(
        kind=CUSTOM_CONVEX,
        f=lambda u: float(poly(u)),
        df=lambda u: float(dpoly(u)),
        c_f=c_f,
        poly_coeffs=coeffs,
    )


def quartic_flux() -> FluxSpec:
    """f(u) = u^2/2 + u^4/12, the even strictly convex test flux (c_f = 1)."""
    return polynomial_flux((0.0, 0.0, 0.5, 0.0, 1.0 / 12.0), c_f=1.0)


def rankine_hugoniot_speed(flux: FluxSpec, u_minus: float, u_plus: float) -> float:
    """Shock speed gamma from gamma*(u_- - u_+) = f(u_-) - f(u_+)."""
    if u_minus == u_plus:
        raise DegenerateShockError(
            f"equal far-field states u_- = u_+ = {u_minus}: no shock speed"
        )
    if flux.kind == BURGERS:
        # exact arithmetic mean, avoids cancellation in (f(u-)-f(u+))/(u- - u+)
        return 0.5 * (u_minus + u_plus)
    return (flux.f(u_minus) - flux.f(u_plus)) / (u_minus - u_plus)


@dataclass(frozen=True)
class ShockParams:
    """Far-field states, viscosity exponent and wave speed: the (u_-, u_+, p, gamma) tuple."""

    u_minus: float
    u_plus: float
    p: float
    flux: FluxSpec = field(default_factory=burgers_flux)

    def __post_init__(self):
        if not self.u_minus > self.u_plus:
            raise DomainError(
                f"shock case requires u_- > u_+, got {self.u_minus} <= {self.u_plus}"
            )
        if not self.p >= 1.0:
            raise DomainError(f"viscosity exponent p must be >= 1, got {self.p}")

    @property
    def gamma(self) -> float:
        return rankine_hugoniot_speed(self.flux, self.u_minus, self.u_plus)

    @property
    def delta(self) -> float:
        """Shock strength u_- - u_+."""
        return self.u_minus - self.u_plus

    @property
    def u_mid(self) -> float:
        """Anchor value U(0) = (u_- + u_+)/2."""
        return 0.5 * (self.u_minus + self.u_plus)


def rescale_viscosity(mu: float, p: float) -> tuple[float, float]:
    """Scales (time, space) -> (mu, mu^(2/(p+1))) reducing viscosity mu to 1.

    All solvers in this package assume the equation has already been
    rescaled to unit viscosity.
    """
    if not mu > 0.0:
        raise DomainError(f"viscosity mu must be positive, got {mu}")
    if not p >= 1.0:
        raise DomainError(f"exponent p must be >= 1, got {p}")
    return (mu, mu ** (2.0 / (p + 1.0)))
