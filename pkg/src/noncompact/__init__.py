"""Measures of noncompactness on l_p and the moduli of noncompact convexity."""

from .errors import BudgetError, DomainError, NoClosedFormError, NoncompactError, NumericError, ParseError
from .hull import HullDistanceResult, dual_bound, hull_distance
from .kernels import BACKEND
from .lp import SparseVector, SpaceSpec, basis, distance, norm
from .moduli import (
    CharacteristicEstimate,
    ModulusCurve,
    ModulusPoint,
    WitnessFamily,
    analytic_curve,
    characteristic,
    chi_reference,
    clarkson_delta,
    closed_form_modulus,
    estimate_modulus,
    make_grid,
    modulus_curve,
    witness_make,
)
from .oracles import OracleBudget, alpha_k, beta_m, chebyshev_radius, chi_k
from .sets import (
    BallTail,
    Finite,
    FinitePointSet,
    MeasureKind,
    SphereTail,
    TailFamily,
    Union,
    format_set,
    is_minimal,
    measure_exact,
    parse_set,
    scale_set,
    truncate,
    unit_ball_measure,
    validate_in_unit_ball,
)
from .verify import CheckResult, VerificationReport, VerifyConfig, run_all

__version__ = "0.1.0"
