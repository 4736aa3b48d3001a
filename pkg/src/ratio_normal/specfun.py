"""Numerically stable scalar special functions.

The auxiliary function

    h(w) = 1 - sqrt(pi) * w * exp(w^2) * erfc(w)

carries the entire erfc content of the quotient density.  Its direct form
loses all significant digits for large positive w (the product tends to 1),
so above a switch point it is evaluated through the asymptotic series

    h(w) = 1/(2 w^2) - 3/(4 w^4) + 15/(8 w^6) - ...

For large negative w the function grows like 2*sqrt(pi)*|w|*exp(w^2) and
overflows beyond w ~ -26.6; log_h covers that regime in log space.

phi / Phi / erfcx are delegated to scipy.special, whose minimax kernels meet
the accuracy contract (<= 2 ulp on the primary range) out of the box.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx as _erfcx
from scipy.special import ndtr as _ndtr

from .errors import RatioNormalError

_SQRT_PI = math.sqrt(math.pi)
_ASYMPTOTIC_SWITCH = 6.0
_SERIES_TERMS = 30


@dataclass(frozen=True)
class HBounds:
    """A two-sided bracket; lower <= upper always."""

    lower: float
    upper: float


def phi(z):
    """Standard normal density. Underflows to 0 gracefully for |z| > ~38.6."""
    z = np.asarray(z, dtype=float)
    out = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    return float(out) if out.ndim == 0 else out


def cap_phi(z):
    """Standard normal CDF, accurate into the far tails."""
    out = _ndtr(np.asarray(z, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def erfc_scaled(w):
    """exp(w^2) * erfc(w).

    Finite for all w >= 0; for w below about -26.6 the true value exceeds the
    double range and the scipy kernel returns inf, in which case callers must
    work in log space (see log_h).
    """
    out = _erfcx(np.asarray(w, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def _h_series(w):
    # alternating asymptotic series in t = 1/(2 w^2); truncation error at the
    # switch point 6.0 is ~2e-14 relative after 30 terms
    t = 1.0 / (2.0 * w * w)
    term = t.copy()
    total = t.copy()
    for n in range(2, _SERIES_TERMS + 1):
        term = term * (-(2 * n - 1)) * t
        total += term
    return total


def _h_array(w):
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    big = w > _ASYMPTOTIC_SWITCH
    if big.any():
        out[big] = _h_series(w[big])
    rest = ~big
    if rest.any():
        with np.errstate(over="ignore"):
            v = 1.0 - _SQRT_PI * w[rest] * _erfcx(w[rest])
        if not np.isfinite(v).all():
            raise OverflowError(
                "h(omega) exceeds the double range (omega < -27); use log_h"
            )
        out[rest] = v
    return out


def h(omega):
    """h(omega) = 1 - sqrt(pi) * omega * exp(omega^2) * erfc(omega); always > 0.

    Raises OverflowError once the value leaves the double range (omega below
    about -27); log_h handles that regime.
    """
    out = _h_array(omega)
    return float(out) if np.ndim(omega) == 0 else out


def _log_h_array(w):
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    deep = w < -_ASYMPTOTIC_SWITCH
    if deep.any():
        wd = w[deep]
        aw = -wd
        lead = 2.0 * _SQRT_PI * aw
        # h(w) = 2*sqrt(pi)*|w|*exp(w^2) + h(|w|); the second term is a
        # relative 1e-18 correction at the switch and vanishes beyond it
        corr = _h_array(aw) * np.exp(-(wd * wd)) / lead
        out[deep] = wd * wd + np.log(lead) + np.log1p(corr)
    rest = ~deep
    if rest.any():
        out[rest] = np.log(_h_array(w[rest]))
    return out


def log_h(omega):
    """log h(omega), finite for every finite omega."""
    out = _log_h_array(omega)
    return float(out) if np.ndim(omega) == 0 else out


def h_prime(omega):
    """h'(omega) = 2*omega - sqrt(pi) * (1 + 2*omega^2) * exp(omega^2) * erfc(omega).

    Returns -inf where the value leaves the double range (omega << 0).
    """
    w = np.asarray(omega, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = 2.0 * w - _SQRT_PI * (1.0 + 2.0 * w * w) * _erfcx(w)
    return float(out) if np.ndim(omega) == 0 else out


def _bracket_value(omega, c):
    # stable form of 1 - 2/(1 + sqrt(1 + c/omega^2))
    u = c / (omega * omega)
    r = math.sqrt(1.0 + u)
    return u / ((1.0 + r) * (1.0 + r))


def h_bounds(omega: float) -> HBounds:
    """Two-sided bracket of h(omega) for omega > 0.

    Derived from the classical erfc bounds
    1/(w + sqrt(w^2 + 2)) < exp(w^2) * int_w^inf exp(-u^2) du <= 1/(w + sqrt(w^2 + 4/pi)),
    which place h between the 4/pi-expression (below) and the 2-expression
    (above); both tend to 1/(2 omega^2).
    """
    omega = float(omega)
    if not omega > 0.0:
        raise RatioNormalError(f"h_bounds requires omega > 0, got {omega}")
    return HBounds(_bracket_value(omega, 4.0 / math.pi), _bracket_value(omega, 2.0))


def h_prime_bounds(omega: float) -> HBounds:
    """Two-sided bracket of h'(omega) for omega >= 0 from the same erfc bounds."""
    omega = float(omega)
    if omega < 0.0:
        raise RatioNormalError(f"h_prime_bounds requires omega >= 0, got {omega}")
    num = 2.0 * (1.0 + 2.0 * omega * omega)
    lower = 2.0 * omega - num / (omega + math.sqrt(omega * omega + 4.0 / math.pi))
    upper = 2.0 * omega - num / (omega + math.sqrt(omega * omega + 2.0))
    return HBounds(lower, upper)
