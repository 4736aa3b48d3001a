"""Quotient densities: quadrant-conditional, half-plane, unconditional,
the rho = -1 closed form, the Cauchy reference and the constant-denominator
approximation.

The load-bearing object is the weighted top-half-plane integral

    wht(x) = integral_0^inf s * bvn(x*s, s) ds
           = (2*pi)^-1 / (sigma1*sigma2*sqrt(1-rho^2)) * A(x)^-1 * exp(-C/2) * h(omega(x)),

which equals f(x|Q1) * P(Q1) for x > 0 and f(x|Q2) * P(Q2) for x < 0.  The
closed form is evaluated with exp(-C/2) * h(omega) fused in log space: for a
wide range of perfectly ordinary parameters (|omega0| > 27) the two factors
individually leave the double range while their product is tame.

Q2/Q4 intentionally go through adaptive quadrature of the half-line integral
(with the |s| Jacobian weight) rather than the closed form; the mixture and
half-plane identities in the test suite then validate each route against the
other.
"""

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .errors import (
    DegenerateConditioning,
    InvalidSingularParams,
    RatioNormalError,
    SingularCorrelation,
)
from .params import BivariateParams
from .quadprob import QuadrantProbs, quadrant_probs, quadrant_probs_singular
from .specfun import _log_h_array, cap_phi

_UNDERFLOW_FLOOR = 1e-300
_MASS_FLOOR = 1e-300

DENSITY_KINDS = (
    "q1",
    "q2",
    "q3",
    "q4",
    "half_top",
    "half_bottom",
    "uncond",
    "singular",
    "cauchy",
    "constdenom",
)

_QUADRANTS = ("q1", "q2", "q3", "q4")


@dataclass(frozen=True)
class DensityCurve:
    """A sampled density with provenance: which formula, which conditioning."""

    xs: np.ndarray
    values: np.ndarray
    kind: str
    params: BivariateParams = field(repr=False)

    def __post_init__(self):
        if np.any(np.diff(self.xs) <= 0):
            raise RatioNormalError("curve grid must be strictly increasing")
        if np.any(self.values < 0):
            raise RatioNormalError("densities cannot be negative")


@functools.lru_cache(maxsize=256)
def _masses(params: BivariateParams) -> QuadrantProbs:
    if params.is_singular:
        return quadrant_probs_singular(params)
    return quadrant_probs(params)


def _require_mass(params: BivariateParams, name: str) -> float:
    mass = getattr(_masses(params), name)
    if mass < _MASS_FLOOR:
        raise DegenerateConditioning(
            f"P({name}) < 1e-300 for {params}; conditional density undefined"
        )
    return mass


def _log_weighted_halftop(params: BivariateParams, x: np.ndarray) -> np.ndarray:
    """log of wht(x), finite wherever the value is representable in logs."""
    mu1, mu2, s1, s2, rho = params.mu1, params.mu2, params.sigma1, params.sigma2, params.rho
    om = 1.0 - rho * rho
    t = x - rho * s1 / s2
    a_of_x = 1.0 / (s2 * s2) + t * t / (s1 * s1 * om)
    b_of_x = -mu2 / (s2 * s2) + t * (mu2 * rho * s1 / s2 - mu1) / (s1 * s1 * om)
    c_const = (mu2 / s2) ** 2 + (rho * mu2 / s2 - mu1 / s1) ** 2 / om
    omega = b_of_x / np.sqrt(2.0 * a_of_x)
    return (
        -math.log(2.0 * math.pi)
        - math.log(s1 * s2 * math.sqrt(om))
        - np.log(a_of_x)
        - 0.5 * c_const
        + _log_h_array(omega)
    )


def weighted_halftop(params: BivariateParams, x) -> np.ndarray:
    """wht(x) = f(x|H_T) * P(H_T) by the closed form, for any real x.

    Values that would land below 1e-300 are flushed to exactly 0 so that
    downstream log plots see clean zeros instead of subnormal noise.
    """
    if params.is_singular:
        raise SingularCorrelation("closed form requires |rho| < 1")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    with np.errstate(under="ignore"):
        out = np.exp(_log_weighted_halftop(params, xa))
    out[out < _UNDERFLOW_FLOOR] = 0.0
    return out if np.ndim(x) else float(out[0])


def weighted_halfplane_quadrature(params: BivariateParams, x, top: bool = True, tol_abs: float = 1e-12, tol_rel: float = 1e-10):
    """The same half-plane integral by adaptive quadrature (independent route).

    top=True integrates s over (0, inf) against s * bvn(x*s, s); top=False is
    the X2 < 0 half, which equals the top integral with both means flipped.
    """
    if params.is_singular:
        raise SingularCorrelation("quadrature route requires |rho| < 1")
    p = params if top else params.flipped_means()
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = quadrature.ratio_halfline_integral(
        xa, p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho, tol_abs=tol_abs, tol_rel=tol_rel
    )
    return out if np.ndim(x) else float(out[0])


def density_q1(params: BivariateParams, x):
    """Density of X1/X2 given X1 > 0, X2 > 0; zero for x <= 0."""
    if params.is_singular:
        raise SingularCorrelation("density_q1 requires |rho| < 1")
    mass = _require_mass(params, "q1")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xa)
    pos = xa > 0
    if pos.any():
        out[pos] = weighted_halftop(params, xa[pos]) / mass
    return out if np.ndim(x) else float(out[0])


def log_density_q1(params: BivariateParams, x):
    """Exact log of density_q1 through the four-term decomposition

        log f = -C/2 + log[(2*pi)^-1 / P(Q1)] + log h(omega) - log[sigma1*sigma2*sqrt(1-rho^2)*A],

    stable even where the density itself underflows.  Requires x > 0.
    """
    if params.is_singular:
        raise SingularCorrelation("log_density_q1 requires |rho| < 1")
    mass = _require_mass(params, "q1")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 0):
        raise ValueError("log_density_q1 is defined for x > 0 only")
    out = _log_weighted_halftop(params, xa) - math.log(mass)
    return out if np.ndim(x) else float(out[0])


def density_quadrant(params: BivariateParams, quadrant: str, x, tol_abs: float = 1e-12, tol_rel: float = 1e-10):
    """Conditional density given one sign quadrant.

    Q1 and Q3 use the closed form (Q3 through the sign-flip symmetry of both
    means); Q2 and Q4 integrate the half-line integral with the |s| weight by
    adaptive quadrature at the given tolerances.  Support: x > 0 for Q1/Q3,
    x < 0 for Q2/Q4.
    """
    quadrant = quadrant.lower()
    if quadrant not in _QUADRANTS:
        raise RatioNormalError(f"unknown quadrant {quadrant!r}")
    if params.is_singular:
        raise SingularCorrelation("quadrant densities require |rho| < 1")
    mass = _require_mass(params, quadrant)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xa)
    if quadrant in ("q1", "q3"):
        sel = xa > 0
        p = params if quadrant == "q1" else params.flipped_means()
        if sel.any():
            out[sel] = weighted_halftop(p, xa[sel]) / mass
    else:
        sel = xa < 0
        top = quadrant == "q2"
        if sel.any():
            out[sel] = (
                weighted_halfplane_quadrature(
                    params, xa[sel], top=top, tol_abs=tol_abs, tol_rel=tol_rel
                )
                / mass
            )
    np.maximum(out, 0.0, out=out)
    return out if np.ndim(x) else float(out[0])


def density_unconditional(params: BivariateParams, x):
    """Unconditioned density of X1/X2: the top-half closed form plus its
    mirror with (mu1, mu2) -> (-mu1, -mu2); defined for every real x."""
    if params.is_singular:
        raise SingularCorrelation("use density_singular at rho = -1")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = weighted_halftop(params, xa) + weighted_halftop(params.flipped_means(), xa)
    return out if np.ndim(x) else float(out[0])


def density_singular(params: BivariateParams, x):
    """Exact density of X1/X2 at rho = -1 for strictly positive parameters:

        f(x) = (mu1*sigma2 + mu2*sigma1)/sqrt(2*pi) * exp(-y^2/2) / (sigma2*x + sigma1)^2,
        y = (mu2*x - mu1)/(sigma2*x + sigma1),

    with f(-sigma1/sigma2) = 0 at the removable point.
    """
    _check_singular_params(params)
    mu1, mu2, s1, s2 = params.mu1, params.mu2, params.sigma1, params.sigma2
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    den = s2 * xa + s1
    out = np.zeros_like(xa)
    ok = den != 0.0
    with np.errstate(under="ignore", over="ignore", invalid="ignore"):
        y = (mu2 * xa[ok] - mu1) / den[ok]
        val = (
            (mu1 * s2 + mu2 * s1)
            / math.sqrt(2.0 * math.pi)
            * np.exp(-0.5 * y * y)
            / (den[ok] * den[ok])
        )
    val[~np.isfinite(val)] = 0.0
    out[ok] = val
    return out if np.ndim(x) else float(out[0])


def singular_cdf(params: BivariateParams, x):
    """CDF companion of density_singular, via the substitution
    y = (mu2*x - mu1)/(sigma2*x + sigma1):

        F(x) = Phi(y) - Phi(mu2/sigma2) + [x > -sigma1/sigma2].
    """
    _check_singular_params(params)
    mu1, mu2, s1, s2 = params.mu1, params.mu2, params.sigma1, params.sigma2
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    den = s2 * xa + s1
    pole = den == 0.0
    y = np.empty_like(xa)
    with np.errstate(divide="ignore"):
        y[~pole] = (mu2 * xa[~pole] - mu1) / den[~pole]
    out = np.empty_like(xa)
    m2 = mu2 / s2
    out[~pole] = cap_phi(y[~pole]) - cap_phi(m2) + (xa[~pole] > -s1 / s2)
    out[pole] = 1.0 - cap_phi(m2)
    np.clip(out, 0.0, 1.0, out=out)
    return out if np.ndim(x) else float(out[0])


def _check_singular_params(params: BivariateParams):
    if params.rho != -1.0:
        raise InvalidSingularParams("singular-case density requires rho = -1")
    if min(params.mu1, params.mu2, params.sigma1, params.sigma2) <= 0.0:
        raise InvalidSingularParams(
            "singular-case density requires mu1, mu2, sigma1, sigma2 > 0"
        )


def density_const_denominator(params: BivariateParams, x):
    """Leading term of the small-sigma2 limit: the density of X1/mu2, a
    normal with mean mu1/mu2 and standard deviation sigma1/mu2."""
    if params.mu2 <= 0.0:
        raise ValueError("constant-denominator approximation requires mu2 > 0")
    mu1, mu2, s1 = params.mu1, params.mu2, params.sigma1
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    with np.errstate(under="ignore"):
        out = mu2 / (math.sqrt(2.0 * math.pi) * s1) * np.exp(
            -0.5 * ((xa * mu2 - mu1) / s1) ** 2
        )
    return out if np.ndim(x) else float(out[0])


def const_denominator_error_bound(params: BivariateParams, m_bound: float) -> float:
    """Bound on the gap between the exact small-sigma2 density and its normal
    leading term, for an integrand factor with |g''| <= m_bound:

        sigma2^(1/2)/(2*pi*sigma1) * (sqrt(pi)*2^(3/2)/4) * M
          + sigma2/(2*pi*sigma1) * pi^(-1/2) * (2/mu2) * exp(-(2*sigma2^2)^(3/2) * mu2).

    Vanishes as sigma2 -> 0.
    """
    if params.sigma2 <= 0.0 or params.mu2 <= 0.0 or m_bound <= 0.0:
        raise ValueError("requires sigma2 > 0, mu2 > 0 and m_bound > 0")
    s1, s2, mu2 = params.sigma1, params.sigma2, params.mu2
    first = math.sqrt(s2) / (2.0 * math.pi * s1) * (math.sqrt(math.pi) * 2.0 ** 1.5 / 4.0) * m_bound
    second = (
        s2
        / (2.0 * math.pi * s1)
        / math.sqrt(math.pi)
        * (2.0 / mu2)
        * math.exp(-((2.0 * s2 * s2) ** 1.5) * mu2)
    )
    return first + second


def cauchy_reference(x, conditioned_positive: bool = True):
    """The standard-normal-quotient reference: (2/pi)/(1+x^2) on x > 0 when
    conditioned on the positive quadrant, halved on the whole line otherwise."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if conditioned_positive:
        if np.any(xa < 0):
            raise ValueError("conditioned Cauchy reference is supported on x > 0")
        out = (2.0 / math.pi) / (1.0 + xa * xa)
    else:
        out = (1.0 / math.pi) / (1.0 + xa * xa)
    return out if np.ndim(x) else float(out[0])


def _curve_values(params: BivariateParams, kind: str, xs: np.ndarray, tol_abs: float, tol_rel: float) -> np.ndarray:
    if kind in _QUADRANTS:
        return density_quadrant(params, kind, xs, tol_abs=tol_abs, tol_rel=tol_rel)
    if kind == "half_top":
        return weighted_halftop(params, xs) / _require_mass(params, "h_top")
    if kind == "half_bottom":
        return weighted_halftop(params.flipped_means(), xs) / _require_mass(params, "h_bottom")
    if kind == "uncond":
        return density_unconditional(params, xs)
    if kind == "singular":
        return density_singular(params, xs)
    if kind == "cauchy":
        return cauchy_reference(xs, conditioned_positive=bool(np.all(xs > 0)))
    if kind == "constdenom":
        return density_const_denominator(params, xs)
    raise RatioNormalError(f"unknown density kind {kind!r}")


def sample_curve(
    params: BivariateParams,
    kind: str,
    x_min: float,
    x_max: float,
    n_points: int,
    spacing: str = "linear",
    tol_abs: float = 1e-12,
    tol_rel: float = 1e-10,
) -> DensityCurve:
    """Evaluate the requested density kind on a linear or log grid."""
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    if not x_min < x_max:
        raise ValueError("x_min must be strictly below x_max")
    if spacing not in ("linear", "log"):
        raise ValueError(f"spacing must be 'linear' or 'log', got {spacing!r}")
    if spacing == "log":
        if x_min <= 0:
            raise ValueError("log spacing requires x_min > 0")
        xs = np.geomspace(x_min, x_max, n_points)
    else:
        xs = np.linspace(x_min, x_max, n_points)
    values = _curve_values(params, kind, xs, tol_abs, tol_rel)
    return DensityCurve(xs=xs, values=values, kind=kind, params=params)


# ---------------------------------------------------------------------------
# numeric CDFs (shared by the Monte-Carlo validation and the CLI)
# ---------------------------------------------------------------------------

_CDF_GRID_INTERVALS = 1200


def _cdf_support(conditioning: str):
    half_pi = 0.5 * math.pi
    if conditioning in ("q1", "q3"):
        return 0.0, half_pi
    if conditioning in ("q2", "q4"):
        return -half_pi, 0.0
    return -half_pi, half_pi  # none / half_top


def _conditional_density_fn(params: BivariateParams, conditioning: str):
    if conditioning == "none":
        return lambda xs: density_unconditional(params, xs)
    if conditioning == "half_top":
        mass = _require_mass(params, "h_top")
        return lambda xs: weighted_halftop(params, xs) / mass
    if conditioning in _QUADRANTS:
        return lambda xs: density_quadrant(params, conditioning, xs)
    raise RatioNormalError(f"unknown conditioning {conditioning!r}")


def _panel_masses(dens, edges):
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes_u = mid[:, None] + half[:, None] * quadrature._NODES15[None, :]
    f_u = dens(np.tan(nodes_u.ravel())).reshape(nodes_u.shape) / np.cos(nodes_u) ** 2
    vals = (f_u * quadrature._WK15).sum(axis=1) * half
    errs = np.abs((f_u * (quadrature._WK15 - quadrature._WG15)).sum(axis=1) * half)
    return vals, errs


@functools.lru_cache(maxsize=64)
def _cdf_table(params: BivariateParams, conditioning: str):
    # integrate the density on a grid in u = arctan(x); the x^-2 tail makes
    # the u-space integrand bounded so no tail extrapolation is needed.  A few
    # bisection sweeps on the worst panels guard against densities far
    # narrower than the base grid (tiny sigmas, extreme mean ratios).
    dens = _conditional_density_fn(params, conditioning)
    u_lo, u_hi = _cdf_support(conditioning)
    eps = 1e-9
    edges = np.linspace(u_lo + eps, u_hi - eps, _CDF_GRID_INTERVALS + 1)
    vals, errs = _panel_masses(dens, edges)
    for _ in range(6):
        if errs.sum() <= 1e-9 or edges.size > 8 * _CDF_GRID_INTERVALS:
            break
        split = errs > errs.sum() / (2.0 * errs.size)
        if not split.any():
            break
        mids = 0.5 * (edges[:-1][split] + edges[1:][split])
        edges = np.sort(np.concatenate([edges, mids]))
        vals, errs = _panel_masses(dens, edges)
    cum = np.concatenate([[0.0], np.cumsum(vals)])
    return edges, cum


def numeric_cdf(params: BivariateParams, conditioning: str = "none"):
    """CDF of X1/X2 under the given conditioning, as an interpolating callable.

    Built once per (params, conditioning) by panelwise Kronrod integration of
    the matching density and cached; rho = -1 parameters use the closed-form
    singular CDF (conditioning must be 'none' there).
    """
    if params.is_singular:
        if conditioning != "none":
            raise RatioNormalError("conditioned CDFs are not defined at rho = -1")
        return lambda x: singular_cdf(params, x)
    edges, cum = _cdf_table(params, conditioning)

    def cdf(x):
        xa = np.asarray(x, dtype=float)
        u = np.arctan(xa)
        out = np.interp(u, edges, cum, left=0.0, right=cum[-1])
        return out if np.ndim(x) else float(out)

    return cdf
