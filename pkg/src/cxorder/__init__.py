"""Complex-order derivatives, exact solutions of power-law ODE families, and
the numerical harness that checks them."""
from .errors import (
    CxOrderError,
    DomainError,
    PoleError,
    PrecisionError,
    SingularityError,
    SpecError,
)
from .fracop import (
    GaugeBasis,
    GenPowerSeries,
    SeriesEval,
    cos_series,
    deriv_constant,
    deriv_cos_closed,
    deriv_cos_series,
    deriv_series,
    deriv_sin_closed,
    deriv_sin_series,
    eval_series,
    exp_series,
    gauge_basis,
    power_rule,
    sin_series,
)
from .kernels import BACKEND
from .solvers import (
    AbelSpec,
    BesselSpec,
    OdeSpec,
    OscillatorSpec,
    PowerMap,
    PowerTerm,
    SolutionEvaluator,
    abel_ode,
    bessel_ode,
    eval_ode_residual,
    gen_oscillator_ode,
    solve_abel,
    solve_bessel,
    solve_oscillator,
    transform_ode,
)
from .specfun import bessel_j0, cpow, gamma, lgamma, recip_gamma
from .validate import (
    BoundaryResult,
    RkConfig,
    ValidationReport,
    phase_boundary,
    rk_integrate,
    series_identity_check,
    validate_solution,
)

__version__ = "0.1.0"
