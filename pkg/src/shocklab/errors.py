"""Exception types shared across the package."""


class ShockLabError(Exception):
    """Base class for all shocklab errors."""


class DegenerateShockError(ShockLabError):
    """Far-field states coincide; no shock and no Rankine-Hugoniot speed."""


class DomainError(ShockLabError):
    """An argument lies outside its mathematical domain."""


class ConfigError(ShockLabError):
    """Invalid solver or experiment configuration."""


class ProfileToleranceError(ShockLabError):
    """Endpoint quadrature failed to reach the requested tolerance."""

    def __init__(self, endpoint: str, achieved: float, requested: float):
        self.endpoint = endpoint
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"profile quadrature at the {endpoint} endpoint reached "
            f"{achieved:.3e}, requested {requested:.3e}"
        )


class BlowUpError(ShockLabError):
    """NaN/Inf detected in the solution."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"solution blew up (NaN/Inf) at t = {t:.6g}")


class MassShiftError(ShockLabError):
    """Zero-mass shift verification residual above tolerance."""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"zero-mass shift residual {residual:.3e} exceeds tolerance {tol:.3e}"
        )


class FitError(ShockLabError):
    """Decay-rate fit could not be performed on the given window."""
