"""Quadrant and half-plane probabilities of the bivariate normal.

The lower-orthant CDF F(x1, x2) reduces to a single integral of a product of
normal CDFs against the standard normal density; quadrant masses follow by
inclusion-exclusion.  Q2..Q4 reuse the Q1 kernel through sign reflections of
the means and the correlation, so a single tested code path serves all four.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .errors import SingularCorrelation
from .params import BivariateParams
from .specfun import cap_phi


@dataclass(frozen=True)
class QuadrantProbs:
    """Masses of the four sign quadrants and the two X2 half-planes."""

    q1: float
    q2: float
    q3: float
    q4: float
    h_top: float
    h_bottom: float

    def as_dict(self) -> dict:
        return {
            "q1": self.q1,
            "q2": self.q2,
            "q3": self.q3,
            "q4": self.q4,
            "h_top": self.h_top,
            "h_bottom": self.h_bottom,
        }


def bvn_orthant_f(params: BivariateParams, x1: float, x2: float) -> float:
    """Lower-orthant probability F(x1, x2) = P(X1 <= x1, X2 <= x2).

    Either argument may be +inf, in which case the corresponding CDF factor
    is 1 and the integral collapses to a single Phi evaluation.
    """
    if params.is_singular:
        raise SingularCorrelation("orthant CDF integral requires |rho| < 1")
    inf1 = math.isinf(x1) and x1 > 0
    inf2 = math.isinf(x2) and x2 > 0
    if inf1 and inf2:
        return 1.0
    if inf1:
        return float(cap_phi((x2 - params.mu2) / params.sigma2))
    if inf2:
        return float(cap_phi((x1 - params.mu1) / params.sigma1))
    rho = params.rho
    a1 = (x1 - params.mu1) / params.sigma1
    a2 = (x2 - params.mu2) / params.sigma2
    if rho == 0.0:
        return float(cap_phi(a1) * cap_phi(a2))
    r = abs(rho)
    delta = 1.0 if rho > 0.0 else -1.0
    scale = math.sqrt(r) / math.sqrt(1.0 - r)
    val = quadrature.orthant_integral(
        scale, a1 / math.sqrt(1.0 - r), delta * scale, a2 / math.sqrt(1.0 - r)
    )
    return min(max(val, 0.0), 1.0)


def _q1_mass(params: BivariateParams) -> float:
    f0inf = bvn_orthant_f(params, 0.0, math.inf)
    finf0 = bvn_orthant_f(params, math.inf, 0.0)
    f00 = bvn_orthant_f(params, 0.0, 0.0)
    return min(max(1.0 - f0inf - finf0 + f00, 0.0), 1.0)


def quadrant_probs(params: BivariateParams) -> QuadrantProbs:
    """All four quadrant masses plus the X2 > 0 and X2 < 0 half-plane masses.

    Q2..Q4 are the Q1 mass of the reflected pairs (-X1, X2), (-X1, -X2) and
    (X1, -X2); reflecting X_i flips mu_i and, when only one is flipped, rho.
    """
    if params.is_singular:
        raise SingularCorrelation("use quadrant_probs_singular at rho = -1")
    mu1, mu2, s1, s2, rho = params.mu1, params.mu2, params.sigma1, params.sigma2, params.rho
    q1 = _q1_mass(params)
    q2 = _q1_mass(BivariateParams(-mu1, mu2, s1, s2, -rho))
    q3 = _q1_mass(BivariateParams(-mu1, -mu2, s1, s2, rho))
    q4 = _q1_mass(BivariateParams(mu1, -mu2, s1, s2, -rho))
    return QuadrantProbs(q1, q2, q3, q4, q1 + q2, q3 + q4)


def quadrant_probs_singular(params: BivariateParams) -> QuadrantProbs:
    """Quadrant masses at rho = -1, where (X1, X2) = (mu1 + s1*Y, mu2 - s2*Y).

    Each quadrant is the mass of a Y-interval: X1 > 0 means Y > -mu1/s1 and
    X2 > 0 means Y < mu2/s2.
    """
    lo = -params.mu1 / params.sigma1  # X1 > 0 above this
    hi = params.mu2 / params.sigma2  # X2 > 0 below this
    p_lo = float(cap_phi(lo))
    p_hi = float(cap_phi(hi))
    q1 = max(0.0, p_hi - p_lo)
    q2 = float(cap_phi(min(lo, hi)))
    q3 = max(0.0, p_lo - p_hi)
    q4 = 1.0 - float(cap_phi(max(lo, hi)))
    return QuadrantProbs(q1, q2, q3, q4, q1 + q2, q3 + q4)


def quadrant_probs_any(params: BivariateParams) -> QuadrantProbs:
    """Dispatch helper: singular route at rho = -1, integral route otherwise."""
    if params.is_singular:
        return quadrant_probs_singular(params)
    return quadrant_probs(params)


_QUADRANT_SIGNS = {
    "q1": (1, 1),
    "q2": (-1, 1),
    "q3": (-1, -1),
    "q4": (1, -1),
}


def empirical_quadrant_freqs(x1: np.ndarray, x2: np.ndarray) -> dict:
    """Sample frequencies of the four quadrants; plumbing for MC agreement tests."""
    n = x1.size
    return {
        name: float(np.count_nonzero((np.sign(x1) == s1) & (np.sign(x2) == s2))) / n
        for name, (s1, s2) in _QUADRANT_SIGNS.items()
    }
