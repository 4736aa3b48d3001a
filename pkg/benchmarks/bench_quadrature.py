#!/usr/bin/env python3
"""Benchmark the numba-compiled quadrature kernels against the pure-numpy path.

The backend is fixed at import time by RATIO_NORMAL_NO_NUMBA, so the script
re-executes itself in a worker subprocess per backend and prints a small
comparison table.  Workloads mirror the hot paths: quadrature-route density
curves, numeric CDF construction, and orthant probabilities.
"""

import json
import os
import subprocess
import sys
import time

WORKLOADS = ("q2_curve", "cdf_table", "orthant_probs")


def run_workloads():
    import numpy as np

    import ratio_normal as rn
    from ratio_normal.quadrature import warmup

    warmup()
    p = rn.validate(1.0, 2.0, 3.0, 4.0, 0.5)
    results = {}

    t0 = time.perf_counter()
    xs = np.linspace(-40.0, -0.01, 2000)
    rn.density_quadrant(p, "q2", xs)
    results["q2_curve"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    rn.numeric_cdf(p, "q4")  # builds and caches the table (inner quadratures)
    results["cdf_table"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    rng = np.random.default_rng(12)
    for _ in range(200):
        mu1, mu2 = rng.uniform(0.5, 3, 2)
        s1, s2 = rng.uniform(0.2, 2, 2)
        rho = rng.uniform(-0.9, 0.9)
        rn.quadrant_probs(rn.validate(mu1, mu2, s1, s2, rho))
    results["orthant_probs"] = time.perf_counter() - t0

    from ratio_normal._jit import USE_NUMBA

    results["backend"] = "numba" if USE_NUMBA else "numpy"
    return results


def main():
    if len(sys.argv) > 1 and sys.argv[1] == "--worker":
        print(json.dumps(run_workloads()))
        return

    rows = {}
    for backend, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, RATIO_NORMAL_NO_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker"],
            capture_output=True,
            env=env,
            text=True,
        )
        if proc.returncode != 0:
            sys.stderr.write(proc.stderr)
            raise SystemExit(1)
        payload = json.loads(proc.stdout.strip().splitlines()[-1])
        assert payload.pop("backend") == backend
        rows[backend] = payload

    print(f"{'workload':<16}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name in WORKLOADS:
        tn, tp = rows["numba"][name], rows["numpy"][name]
        print(f"{name:<16}{tn:>12.4f}{tp:>12.4f}{tp / tn:>10.1f}x")


if __name__ == "__main__":
    main()
