"""Wilson and Racah orthogonal polynomials for tridiagonal quantum models."""

from .errors import (
    ConstraintError,
    ConvergenceError,
    DegenerateRecursionError,
    DomainError,
    FitDegenerateError,
    ParamError,
    PoleError,
    QuadratureError,
    RegimeError,
    WilsonRacahError,
)
from .physics import (
    BasisSpec,
    BoundSpectrum,
    EnergyMap,
    WavefunctionGrid,
    basis_eval,
    bound_spectrum,
    bound_state_count,
    mixed_orthogonality_check,
    phase_shift,
    synthesize_bound_state,
    synthesize_scattering_state,
)
from .quadrature import QuadResult, integrate_real_line, integrate_semiaxis
from .racah import (
    FIG2_PARAMS,
    RacahParams,
    RacahTable,
    map_racah_to_wilson,
    map_wilson_to_racah,
    racah_duality_constants,
    racah_generating_check,
    racah_normalize,
    racah_orthogonality_check,
    racah_recursion,
    racah_series,
    racah_weight,
)
from .special import log_gamma, log_pochhammer, pochhammer, rgamma
from .wilson import (
    FIG1_PARAMS,
    WilsonParams,
    WilsonValueTable,
    scattering_amplitude,
    wilson_asymptotic_fit,
    wilson_generating_check,
    wilson_normalize,
    wilson_recursion,
    wilson_series,
    wilson_weight,
)

__version__ = "0.1.0"
