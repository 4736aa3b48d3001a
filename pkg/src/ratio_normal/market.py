"""Supply/demand price-path simulator.

Each step draws a fresh (demand, supply) pair from the configured bivariate
normal; the relative price change for the step is demand/supply - 1 and the
price updates in log space,

    log P <- log P + r * dt,

which keeps prices strictly positive no matter how violent the ratio draw
is (the multiplicative update P *= 1 + r*dt differs at O(dt^2) but can go
nonpositive).  Per-step returns are therefore i.i.d. copies of X1/X2 - 1,
so their pooled distribution can be checked against the shifted quotient
CDF, and their absolute values carry the x^-2 fat tail.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .density import numeric_cdf
from .errors import InsufficientSamples
from .oracle import GofReport, _chunk_rng, _draw_pair, _thread_count, ks_statistic
from .params import BivariateParams


@dataclass(frozen=True)
class MarketConfig:
    params: BivariateParams
    dt: float
    n_steps: int
    n_paths: int = 1
    p0: float = 1.0
    seed: int = 0
    clamp: Optional[float] = None

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.p0 <= 0:
            raise ValueError("p0 must be positive")
        if self.n_steps < 1 or self.n_paths < 1:
            raise ValueError("n_steps and n_paths must be >= 1")
        if self.clamp is not None and self.clamp <= 0:
            raise ValueError("clamp, when given, must be positive")


@dataclass(frozen=True)
class PathSet:
    """Per-step relative changes and the strictly positive price paths."""

    returns: np.ndarray = field(repr=False)
    prices: np.ndarray = field(repr=False)


def _simulate_path(config: MarketConfig, path_index: int) -> np.ndarray:
    rng = _chunk_rng(config.seed, path_index)
    d, s = _draw_pair(rng, config.params, config.n_steps)
    zero = s == 0.0
    while zero.any():
        rd, rs = _draw_pair(rng, config.params, int(zero.sum()))
        d[zero], s[zero] = rd, rs
        zero = s == 0.0
    r = d / s - 1.0
    if config.clamp is not None:
        np.clip(r, -config.clamp, config.clamp, out=r)
    return r


def simulate(config: MarketConfig) -> PathSet:
    """Generate n_paths independent price paths of n_steps each.

    Paths use independently derived RNG streams keyed on (seed, path index),
    so output is identical whether paths run serially or on a thread pool.
    """
    returns = np.empty((config.n_paths, config.n_steps))
    threads = _thread_count()
    if threads > 1 and config.n_paths > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, r in enumerate(pool.map(lambda p: _simulate_path(config, p), range(config.n_paths))):
                returns[i] = r
    else:
        for i in range(config.n_paths):
            returns[i] = _simulate_path(config, i)
    log_prices = np.empty((config.n_paths, config.n_steps + 1))
    log_prices[:, 0] = np.log(config.p0)
    np.cumsum(returns * config.dt, axis=1, out=log_prices[:, 1:])
    log_prices[:, 1:] += np.log(config.p0)
    # returns have no finite moments, so log-price excursions are unbounded;
    # exp may saturate at the float range for large dt * n_steps
    with np.errstate(over="ignore", under="ignore"):
        prices = np.exp(log_prices)
    return PathSet(returns=returns, prices=prices)


def returns_distribution_check(pathset: PathSet, params: BivariateParams) -> GofReport:
    """KS test of the pooled per-step returns against the law of X1/X2 - 1.

    The reference CDF is the unconditional quotient CDF evaluated at r + 1
    (closed-form singular CDF when rho = -1).  Clamped simulations fail this
    check by design: truncation moves tail mass onto the clamp points.
    """
    pooled = pathset.returns.ravel()
    if pooled.size < 10_000:
        raise InsufficientSamples(f"need >= 1e4 pooled returns, got {pooled.size}")
    base = numeric_cdf(params, "none")
    ks = ks_statistic(pooled, lambda r: base(np.asarray(r) + 1.0))
    threshold = 1.358 / np.sqrt(pooled.size)
    return GofReport(
        ks_statistic=float(ks),
        ks_threshold_95=float(threshold),
        n_effective=int(pooled.size),
        passed=bool(ks <= threshold),
    )
