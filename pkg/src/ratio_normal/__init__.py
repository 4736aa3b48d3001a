"""ratio_normal: the law of a quotient of correlated normal random variables.

Closed-form and quadrature-form densities (conditioned on sign quadrants,
half-planes, or unconditioned), bivariate-normal quadrant probabilities,
x^-2 tail asymptotics with explicit remainder bounds, a Monte-Carlo oracle
with KS and Hill diagnostics, and a supply/demand price-path simulator whose
returns inherit the fat tail.
"""

__version__ = "0.1.0"

from .density import (
    DensityCurve,
    cauchy_reference,
    const_denominator_error_bound,
    density_const_denominator,
    density_q1,
    density_quadrant,
    density_singular,
    density_unconditional,
    log_density_q1,
    numeric_cdf,
    sample_curve,
    singular_cdf,
    weighted_halfplane_quadrature,
    weighted_halftop,
)
from .errors import (
    CorrelationOutOfRange,
    DegenerateConditioning,
    InsufficientSamples,
    InsufficientTail,
    InvalidSingularParams,
    NonPositiveSigma,
    RatioNormalError,
    RegimeNotApplicable,
    SingularCorrelation,
    ThresholdNotAboveOne,
    UndefinedRatio,
    XBelowThreshold,
)
from .market import MarketConfig, PathSet, returns_distribution_check, simulate
from .oracle import (
    GofReport,
    SampleBatch,
    hill_estimator,
    ks_against_numeric,
    ks_statistic,
    sample_bivariate,
)
from .params import BivariateParams, QuadraticCoeffs, coeffs_at, validate
from .quadprob import (
    QuadrantProbs,
    bvn_orthant_f,
    quadrant_probs,
    quadrant_probs_any,
    quadrant_probs_singular,
)
from .specfun import (
    HBounds,
    cap_phi,
    erfc_scaled,
    h,
    h_bounds,
    h_prime,
    h_prime_bounds,
    log_h,
    phi,
)
from .tail import (
    RemainderBounds,
    TailReport,
    regime_approximation,
    remainder_bounds,
    tail_coefficient,
    tail_exponent_diagnostic,
    tail_report,
    x0_threshold,
)

__all__ = [
    "__version__",
    "BivariateParams",
    "QuadraticCoeffs",
    "validate",
    "coeffs_at",
    "HBounds",
    "phi",
    "cap_phi",
    "erfc_scaled",
    "h",
    "log_h",
    "h_prime",
    "h_bounds",
    "h_prime_bounds",
    "DensityCurve",
    "density_q1",
    "log_density_q1",
    "density_quadrant",
    "density_unconditional",
    "density_singular",
    "singular_cdf",
    "density_const_denominator",
    "const_denominator_error_bound",
    "cauchy_reference",
    "sample_curve",
    "numeric_cdf",
    "weighted_halftop",
    "weighted_halfplane_quadrature",
    "QuadrantProbs",
    "bvn_orthant_f",
    "quadrant_probs",
    "quadrant_probs_singular",
    "quadrant_probs_any",
    "TailReport",
    "RemainderBounds",
    "tail_coefficient",
    "tail_exponent_diagnostic",
    "remainder_bounds",
    "regime_approximation",
    "tail_report",
    "x0_threshold",
    "SampleBatch",
    "GofReport",
    "sample_bivariate",
    "ks_against_numeric",
    "ks_statistic",
    "hill_estimator",
    "MarketConfig",
    "PathSet",
    "simulate",
    "returns_distribution_check",
    "RatioNormalError",
    "NonPositiveSigma",
    "CorrelationOutOfRange",
    "SingularCorrelation",
    "DegenerateConditioning",
    "InvalidSingularParams",
    "XBelowThreshold",
    "ThresholdNotAboveOne",
    "UndefinedRatio",
    "RegimeNotApplicable",
    "InsufficientSamples",
    "InsufficientTail",
]
