import numpy as np
import pytest

from ratio_normal import quadrature, validate


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # JIT compilation (a few seconds, cached on disk afterwards) must not
    # pollute the timed acceptance criteria
    quadrature.warmup()


def random_param_sets(n, seed, rho_range=(-0.9, 0.9)):
    """The shared parameter suite: mu in [0.5, 3], sigma in [0.2, 2]."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        mu1, mu2 = rng.uniform(0.5, 3.0, 2)
        s1, s2 = rng.uniform(0.2, 2.0, 2)
        rho = rng.uniform(*rho_range)
        out.append(validate(mu1, mu2, s1, s2, rho))
    return out
