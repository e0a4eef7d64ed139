"""shocklab: viscous shock profiles, perturbed-shock simulation, and
decay-rate verification for scalar conservation laws with p-Laplacian
viscosity."""

from .errors import (BlowUpError, ConfigError, DegenerateShockError,
                     DomainError, FitError, MassShiftError,
                     ProfileToleranceError, ShockLabError)
from .flux import (FluxSpec, ShockParams, burgers_flux, polynomial_flux,
                   quartic_flux, rankine_hugoniot_speed, rescale_viscosity)
from .kernels import NUMBA_AVAILABLE, active_backend
from .lemmas import (LemmaScanReport, RateOdeParams, check_elementary,
                     default_c0, estimate_p0, ode_comparison_test,
                     ode_decay_exponent, power_gap_ratio, scan_abm,
                     scan_abm_random)
from .metrics import (RateFit, TimeSeries, antiderivative_norm,
                      change_of_variables_identity, dissipation,
                      fit_decay_rate, fit_from_timeseries,
                      perturbation_norm, weighted_poincare_check)
from .profile import (Profile, build_profile, export_profile_csv,
                      export_profile_metadata, general_flux_profile,
                      profile_slope)
from .shift import ShiftState, advance_shift, mass_shift, shift_rhs
from .solver import (GridState, InitialData, MetricsSchedule, SolverConfig,
                     cfl_dt, simulate, step, viscous_face_flux)

__version__ = "0.1.0"
