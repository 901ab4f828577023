"""Three-level maser heat engine driven by relativistically moving thermal baths."""
from .bounds import (
    BoundInputs,
    asymptotic_power,
    curzon_ahlborn,
    emp_analytic,
    emp_numeric,
    generalized_carnot_bound,
    zero_power_efficiency,
)
from .dynamics import (
    EngineConfig,
    SteadyState,
    closed_form_coherence,
    liouvillian_steady_state,
    steady_state_linear,
)
from .errors import DomainError, InsufficientPointsError, NoRootError, NumericalError, OptimizationError
from .explorer import SampleSpec, eta_power_curve, mode_map, power_grid, sample_cloud, upper_frontier
from .occupation import (
    BathParams,
    directional_temperature,
    effective_temperature,
    planck_occupation,
    relativistic_occupation,
    solid_angle_average_factor,
)
from .thermo import Mode, Performance, classify_mode, compact_power, performance

__version__ = "0.1.0"
