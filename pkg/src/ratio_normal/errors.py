"""Semantic exception hierarchy.

Every domain failure raises a subclass of RatioNormalError so that callers
(and the CLI exit-code mapping) can distinguish usage problems from domain
problems without string matching.
"""


class RatioNormalError(Exception):
    """Base class for all library errors."""


class NonPositiveSigma(RatioNormalError, ValueError):
    """A standard deviation was zero or negative."""


class CorrelationOutOfRange(RatioNormalError, ValueError):
    """Correlation outside [-1, 1), or numerically indistinguishable from +-1."""


class SingularCorrelation(RatioNormalError):
    """Operation requires |rho| < 1 but the parameters have rho = -1."""


class DegenerateConditioning(RatioNormalError):
    """The conditioning event has mass below 1e-300; conditional law undefined."""


class InvalidSingularParams(RatioNormalError, ValueError):
    """The rho = -1 closed form requires all four parameters strictly positive."""


class XBelowThreshold(RatioNormalError, ValueError):
    """Tail diagnostics requested at x at or below the validity threshold x0."""


class ThresholdNotAboveOne(RatioNormalError, ValueError):
    """Remainder bounds need x0 > 1 so that log(x0) > 0."""


class UndefinedRatio(RatioNormalError):
    """b1/a1 in the third remainder term is undefined because a1 = 0."""


class RegimeNotApplicable(RatioNormalError):
    """Neither asymptotic regime's validity condition holds for these parameters."""


class InsufficientSamples(RatioNormalError, ValueError):
    """Too few samples remain after conditioning for the requested statistic."""


class InsufficientTail(RatioNormalError, ValueError):
    """Hill estimation needs k < n and strictly positive top-k order statistics."""
