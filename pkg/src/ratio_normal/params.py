"""Validated distribution parameters and the quadratic-form coefficients.

The quotient law of (X1, X2) bivariate normal is driven everywhere by the
quadratic Q(s) = A*s^2 + 2*B*s + C that appears in the exponent of the
weighted half-line integral, together with the large-x limit quantities
omega0, a1, b1, a2^2.  All coefficient formulas are evaluated in their
algebraically factored forms; re-expanding them destroys the cancellation
structure that the tail analysis relies on.
"""

import math
from dataclasses import dataclass

from .errors import CorrelationOutOfRange, NonPositiveSigma, SingularCorrelation

# |rho| this close to 1 makes 1/(1 - rho^2) dominate all downstream accuracy
_RHO_SINGULAR_WINDOW = 1e-12


@dataclass(frozen=True)
class BivariateParams:
    """Means, standard deviations and correlation of the (numerator, denominator) pair.

    rho = -1 is admitted (the pair degenerates to an affine image of one
    standard normal and has its own closed-form density); rho = +1 and
    correlations within 1e-12 of +-1 are rejected as numerically singular.
    """

    mu1: float
    mu2: float
    sigma1: float
    sigma2: float
    rho: float

    def __post_init__(self):
        if not (self.sigma1 > 0.0) or not (self.sigma2 > 0.0):
            raise NonPositiveSigma(
                f"sigma1 and sigma2 must be > 0, got ({self.sigma1}, {self.sigma2})"
            )
        if not (-1.0 <= self.rho < 1.0):
            raise CorrelationOutOfRange(f"rho must lie in [-1, 1), got {self.rho}")
        if self.rho != -1.0 and 1.0 - abs(self.rho) < _RHO_SINGULAR_WINDOW:
            raise CorrelationOutOfRange(
                f"|rho| = {abs(self.rho)} is numerically singular (within 1e-12 of 1)"
            )

    @property
    def is_singular(self) -> bool:
        return self.rho == -1.0

    def flipped_means(self) -> "BivariateParams":
        """Same spread and correlation with (mu1, mu2) -> (-mu1, -mu2)."""
        return BivariateParams(-self.mu1, -self.mu2, self.sigma1, self.sigma2, self.rho)


@dataclass(frozen=True)
class QuadraticCoeffs:
    """x-dependent A, B, C, omega plus the x-independent limit quantities."""

    a_of_x: float
    b_of_x: float
    c_const: float
    omega: float
    omega0: float
    a1: float
    b1: float
    a2sq: float


def validate(mu1: float, mu2: float, sigma1: float, sigma2: float, rho: float) -> BivariateParams:
    """Validate the five scalars and return an immutable parameter object."""
    return BivariateParams(
        float(mu1), float(mu2), float(sigma1), float(sigma2), float(rho)
    )


def coeffs_at(params: BivariateParams, x: float) -> QuadraticCoeffs:
    """Evaluate A(x), B(x), C, omega(x) = B/sqrt(2A) and the limit quantities.

    Raises SingularCorrelation for rho = -1, where 1/(1 - rho^2) is undefined
    and the caller must use the singular-case density instead.
    """
    if params.is_singular:
        raise SingularCorrelation("coefficients are undefined at rho = -1")
    mu1, mu2, s1, s2, rho = params.mu1, params.mu2, params.sigma1, params.sigma2, params.rho
    om = 1.0 - rho * rho
    t = x - rho * s1 / s2
    a_of_x = 1.0 / (s2 * s2) + t * t / (s1 * s1 * om)
    b_of_x = -mu2 / (s2 * s2) + t * (mu2 * rho * s1 / s2 - mu1) / (s1 * s1 * om)
    c_const = (mu2 / s2) ** 2 + (rho * mu2 / s2 - mu1 / s1) ** 2 / om
    omega = b_of_x / math.sqrt(2.0 * a_of_x)
    omega0 = (rho * mu2 / s2 - mu1 / s1) / math.sqrt(2.0 * om)
    a1 = (rho * mu2 / s2 - mu1 / s1) * (s2 / s1) / om
    b1 = -mu2 / s2
    a2sq = (s2 / s1) ** 2 / om
    return QuadraticCoeffs(a_of_x, b_of_x, c_const, omega, omega0, a1, b1, a2sq)
