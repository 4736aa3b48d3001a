"""Monte-Carlo ground truth: bivariate sampling, KS goodness-of-fit against
numeric CDFs, and Hill tail-index estimation.

Sampling is chunked (fixed chunk size, one independently derived RNG stream
per chunk) so the merged output is a pure function of (n, seed) no matter
how many worker threads execute the chunks.  RATIO_NORMAL_THREADS caps the
thread pool; the default of 1 keeps everything strictly serial.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientSamples, InsufficientTail
from .params import BivariateParams

_CHUNK = 1 << 19

CONDITIONINGS = ("none", "q1", "q2", "q3", "q4", "half_top")


def _thread_count() -> int:
    raw = os.environ.get("RATIO_NORMAL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SampleBatch:
    """Ratios X1/X2 with per-sample quadrant labels (0..3 for Q1..Q4)."""

    x1: np.ndarray = field(repr=False)
    x2: np.ndarray = field(repr=False)
    ratios: np.ndarray = field(repr=False)
    quadrants: np.ndarray = field(repr=False)
    quadrant_counts: tuple
    n: int
    seed: int


@dataclass(frozen=True)
class GofReport:
    ks_statistic: float
    ks_threshold_95: float
    n_effective: int
    passed: bool


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed % (1 << 64), spawn_key=(index,))
    )


def _draw_pair(rng: np.random.Generator, params: BivariateParams, m: int):
    if params.is_singular:
        y = rng.standard_normal(m)
        x1 = params.mu1 + params.sigma1 * y
        x2 = params.mu2 - params.sigma2 * y
    else:
        z1 = rng.standard_normal(m)
        z2 = rng.standard_normal(m)
        x1 = params.mu1 + params.sigma1 * z1
        x2 = params.mu2 + params.sigma2 * (
            params.rho * z1 + math.sqrt(1.0 - params.rho**2) * z2
        )
    return x1, x2


def _fill_chunk(params, seed, index, x1_out, x2_out, lo, hi):
    rng = _chunk_rng(seed, index)
    m = hi - lo
    x1, x2 = _draw_pair(rng, params, m)
    # samples landing exactly on an axis have probability zero; redraw them
    # from the same stream so determinism is preserved
    bad = (x1 == 0.0) | (x2 == 0.0)
    while bad.any():
        r1, r2 = _draw_pair(rng, params, int(bad.sum()))
        x1[bad], x2[bad] = r1, r2
        bad = (x1 == 0.0) | (x2 == 0.0)
    x1_out[lo:hi] = x1
    x2_out[lo:hi] = x2


def sample_bivariate(params: BivariateParams, n: int, seed: int) -> SampleBatch:
    """Draw n correlated pairs and their ratios; deterministic in (n, seed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x1 = np.empty(n)
    x2 = np.empty(n)
    spans = [(i, lo, min(lo + _CHUNK, n)) for i, lo in enumerate(range(0, n, _CHUNK))]
    threads = _thread_count()
    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_fill_chunk, params, seed, i, x1, x2, lo, hi)
                for i, lo, hi in spans
            ]
            for f in futures:
                f.result()
    else:
        for i, lo, hi in spans:
            _fill_chunk(params, seed, i, x1, x2, lo, hi)
    pos1 = x1 > 0
    pos2 = x2 > 0
    quadrants = np.where(
        pos2, np.where(pos1, 0, 1), np.where(pos1, 3, 2)
    ).astype(np.int8)
    counts = tuple(int(c) for c in np.bincount(quadrants, minlength=4))
    return SampleBatch(
        x1=x1,
        x2=x2,
        ratios=x1 / x2,
        quadrants=quadrants,
        quadrant_counts=counts,
        n=n,
        seed=seed,
    )


def _conditioned_ratios(batch: SampleBatch, conditioning: str) -> np.ndarray:
    conditioning = conditioning.lower()
    if conditioning == "none":
        return batch.ratios
    if conditioning == "half_top":
        return batch.ratios[batch.quadrants <= 1]
    if conditioning in ("q1", "q2", "q3", "q4"):
        return batch.ratios[batch.quadrants == int(conditioning[1]) - 1]
    raise ValueError(f"unknown conditioning {conditioning!r}")


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance between the empirical CDF of the
    samples and a reference CDF callable."""
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    f = np.asarray(cdf(s), dtype=float)
    grid = np.arange(1, n + 1) / n
    return float(max(np.max(grid - f), np.max(f - (grid - 1.0 / n))))


def ks_against_numeric(batch: SampleBatch, cdf, conditioning: str = "none") -> GofReport:
    """KS test of the conditioned empirical distribution against a numeric CDF.

    The 95% acceptance threshold is 1.358/sqrt(n_effective).
    """
    samples = _conditioned_ratios(batch, conditioning)
    n_eff = samples.size
    if n_eff < 100:
        raise InsufficientSamples(
            f"need at least 100 samples after conditioning, got {n_eff}"
        )
    ks = ks_statistic(samples, cdf)
    threshold = 1.358 / math.sqrt(n_eff)
    return GofReport(
        ks_statistic=ks,
        ks_threshold_95=threshold,
        n_effective=int(n_eff),
        passed=bool(ks <= threshold),
    )


def hill_estimator(samples, k: int) -> float:
    """Hill tail-index estimate from the top k order statistics:

        alpha_hat = k / sum_{i=1}^{k} log(X_(n-i+1) / X_(n-k)).

    For a density with an x^-2 tail the survival exponent is 1, so values
    near 1 confirm the fat-tail law.
    """
    s = np.asarray(samples, dtype=float)
    n = s.size
    if k < 1 or k >= n:
        raise InsufficientTail(f"need 1 <= k < n, got k={k}, n={n}")
    part = np.partition(s, n - k - 1)
    threshold = part[n - k - 1]
    top = part[n - k:]
    if threshold <= 0.0 or np.any(top <= 0.0):
        raise InsufficientTail("top-k order statistics must be strictly positive")
    return float(k / np.sum(np.log(top / threshold)))
