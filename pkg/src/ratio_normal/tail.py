"""Tail asymptotics of the quadrant-conditional quotient density.

For x above the threshold x0 = max(2*sigma1/sigma2, 1) the log-density
decomposes as

    log f(x)/log x = -2 + (-C/2 + log[(2*pi)^-1/P(Q1)]
                     - log[sigma2/(sigma1*sqrt(1-rho^2))] + log h(omega0)) / log x + R4,

with |R4| bounded by three fully explicit terms, and the density itself
behaves like f0 * x^-2 with

    f0 = (sigma1/sigma2) * sqrt(1-rho^2) / (2*pi*P(Q1))
         * exp(-mu2^2/(2*sigma2^2)) * (exp(-omega0^2) - sqrt(pi)*omega0*erfc(omega0)).

The last factor is evaluated as exp(log h(omega0) - omega0^2); forming the
two pieces separately overflows/underflows for |omega0| beyond ~27 at
perfectly ordinary parameter values.
"""

import math
from dataclasses import dataclass

import numpy as np

from .density import _require_mass, log_density_q1
from .errors import (
    RegimeNotApplicable,
    SingularCorrelation,
    ThresholdNotAboveOne,
    UndefinedRatio,
    XBelowThreshold,
)
from .params import BivariateParams, coeffs_at
from .specfun import h_prime, h_prime_bounds, log_h


@dataclass(frozen=True)
class RemainderBounds:
    r1: float
    r2: float
    r3: float
    r4_total: float


@dataclass(frozen=True)
class TailReport:
    f0: float
    x0: float
    exponent_at: list
    remainder_bound_at: list


def x0_threshold(params: BivariateParams) -> float:
    """Validity threshold max(2*sigma1/sigma2, 1), nudged above 1 so that
    log(x0) stays positive in the bound formulas."""
    return max(2.0 * params.sigma1 / params.sigma2, 1.0 + 1e-6)


def tail_coefficient(params: BivariateParams) -> float:
    """The coefficient f0 of the x^-2 tail law of the Q1-conditional density."""
    if params.is_singular:
        raise SingularCorrelation("tail coefficient requires |rho| < 1")
    mass = _require_mass(params, "q1")
    c = coeffs_at(params, 1.0)
    s1, s2, rho = params.sigma1, params.sigma2, params.rho
    log_factor = log_h(c.omega0) - c.omega0**2 - 0.5 * (params.mu2 / s2) ** 2
    return (s1 / s2) * math.sqrt(1.0 - rho * rho) / (2.0 * math.pi * mass) * math.exp(log_factor)


def tail_exponent_diagnostic(params: BivariateParams, xs) -> list:
    """Pairs (x, log f(x|Q1) / log x); the values approach -2 as x grows."""
    x0 = x0_threshold(params)
    xs = [float(x) for x in np.atleast_1d(xs)]
    for x in xs:
        if x <= x0 or x <= 1.0:
            raise XBelowThreshold(f"diagnostic needs x > max(x0, 1) = {max(x0, 1.0)}, got {x}")
    return [(x, log_density_q1(params, x) / math.log(x)) for x in xs]


def _abs_h_prime_estimate(zeta: float) -> float:
    # |h'| at the bracket endpoint: the two-sided bounds apply for zeta >= 0;
    # negative zeta uses the exact formula (which may overflow to inf, in
    # which case the bound is reported as inf rather than fabricated)
    if zeta >= 0.0:
        b = h_prime_bounds(zeta)
        return max(abs(b.lower), abs(b.upper))
    with np.errstate(over="ignore"):
        return abs(h_prime(zeta))


def remainder_bounds(params: BivariateParams, x0: float) -> RemainderBounds:
    """The three explicit remainder terms of the tail decomposition at x0:

        R1 = 2*(sigma1/sigma2)*|rho| / (x0*log x0)
        R2 = 2*(sigma1/sigma2)^2 / x0^2
        R3 = |omega0| * (|b1/a1| + 1/(2*a2^2) + 1/(8*a2^4)) * |h'(zeta)| / (x0*log x0)

    with zeta resolved by taking the worse of |h'| at omega(2*x0) and at
    omega0.  R3 is undefined when a1 = 0 (UndefinedRatio).
    """
    x0 = float(x0)
    if x0 <= 1.0:
        raise ThresholdNotAboveOne(f"remainder bounds need x0 > 1, got {x0}")
    if params.is_singular:
        raise SingularCorrelation("remainder bounds require |rho| < 1")
    s_ratio = params.sigma1 / params.sigma2
    log_x0 = math.log(x0)
    r1 = 2.0 * s_ratio * abs(params.rho) / (x0 * log_x0)
    r2 = 2.0 * s_ratio * s_ratio / (x0 * x0)
    c = coeffs_at(params, 2.0 * x0)
    if c.a1 == 0.0:
        raise UndefinedRatio("R3 needs a1 != 0 (rho*mu2/sigma2 != mu1/sigma1)")
    hp = max(_abs_h_prime_estimate(c.omega), _abs_h_prime_estimate(c.omega0))
    bracket = abs(c.b1 / c.a1) + 1.0 / (2.0 * c.a2sq) + 1.0 / (8.0 * c.a2sq * c.a2sq)
    r3 = abs(c.omega0) * bracket * hp / (x0 * log_x0)
    return RemainderBounds(r1, r2, r3, r1 + r2 + r3)


def regime_approximation(params: BivariateParams, x: float) -> float:
    """Approximate log-density in the two extreme-omega0 regimes.

    Regime (i), omega0 <= -3 (small sigma1 relative to the mean scale):

        log f ~= -2*log x + 2*rho*sigma1/(sigma2*x) - mu2^2/(2*sigma2^2)
                 + log[(2*pi)^(-1/2) / P(Q1)] + log(mu1/sigma2 - rho*mu2*sigma1/sigma2^2)

    Regime (ii), omega0 >= 3 or a near-deterministic denominator
    (mu2/sigma2 >= 10 with omega0 > -3):

        log f ~= -2*log x + 2*rho*sigma1/(sigma2*x) + log[(2*pi)^-1 / P(Q1)]
                 + log h(omega0) - log[sigma2/(sigma1*sqrt(1-rho^2))]
                 - (mu2/sigma2)^2 / (2*(1-rho^2)) + rho*mu1*mu2/((1-rho^2)*sigma1*sigma2)
                 - (mu1/sigma1)^2 / (2*(1-rho^2))

    Anything else raises RegimeNotApplicable.
    """
    if params.is_singular:
        raise SingularCorrelation("regime approximations require |rho| < 1")
    x = float(x)
    x0 = x0_threshold(params)
    if x <= x0:
        raise XBelowThreshold(f"regime approximation needs x > x0 = {x0}, got {x}")
    mass = _require_mass(params, "q1")
    mu1, mu2, s1, s2, rho = params.mu1, params.mu2, params.sigma1, params.sigma2, params.rho
    om = 1.0 - rho * rho
    omega0 = coeffs_at(params, x).omega0
    vanishing = 2.0 * rho * s1 / (s2 * x)
    if omega0 <= -3.0:
        slope = mu1 / s2 - rho * mu2 * s1 / (s2 * s2)
        return (
            -2.0 * math.log(x)
            + vanishing
            - 0.5 * (mu2 / s2) ** 2
            - 0.5 * math.log(2.0 * math.pi)
            - math.log(mass)
            + math.log(slope)
        )
    if omega0 >= 3.0 or (params.mu2 / s2 >= 10.0 and omega0 > -3.0):
        return (
            -2.0 * math.log(x)
            + vanishing
            - math.log(2.0 * math.pi)
            - math.log(mass)
            + log_h(omega0)
            - math.log(s2 / (s1 * math.sqrt(om)))
            - 0.5 * (mu2 / s2) ** 2 / om
            + rho * mu1 * mu2 / (om * s1 * s2)
            - 0.5 * (mu1 / s1) ** 2 / om
        )
    raise RegimeNotApplicable(
        f"omega0 = {omega0:.4g} and mu2/sigma2 = {mu2 / s2:.4g}: neither regime applies"
    )


def tail_report(params: BivariateParams, xs=None) -> TailReport:
    """Assemble f0, x0, exponent diagnostics and remainder-bound values.

    When a1 = 0 the R3 term is undefined and the reported bound falls back
    to R1 + R2 alone.
    """
    if xs is None:
        xs = [1e2, 1e4, 1e6]
    x0 = x0_threshold(params)
    exponent_at = tail_exponent_diagnostic(params, xs)
    bounds = []
    for x, _ in exponent_at:
        try:
            bounds.append((x, remainder_bounds(params, x).r4_total))
        except UndefinedRatio:
            rb_partial = (
                2.0 * params.sigma1 / params.sigma2 * abs(params.rho) / (x * math.log(x))
                + 2.0 * (params.sigma1 / params.sigma2) ** 2 / (x * x)
            )
            bounds.append((x, rb_partial))
    return TailReport(
        f0=tail_coefficient(params),
        x0=x0,
        exponent_at=exponent_at,
        remainder_bound_at=bounds,
    )
