"""Command-line surface: density curves, quadrant probabilities, tail
reports, Monte-Carlo validation and market simulation.

Output is CSV (shortest round-trip float formatting) or a JSON envelope
{command, params, rows, metadata}.  Exit codes: 0 success, 2 usage errors,
3 domain errors, 4 validation (KS) failure.  All randomness is seeded with
a fixed documented default so repeated invocations are byte-identical.
"""

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from ._jit import USE_NUMBA
from .density import numeric_cdf, sample_curve
from .errors import RatioNormalError
from .market import MarketConfig, simulate
from .oracle import hill_estimator, ks_against_numeric, sample_bivariate
from .params import BivariateParams, validate
from .quadprob import quadrant_probs_any
from .tail import tail_report

DEFAULT_SEED = 271828

QUAD_ABS_DEFAULT = 1e-12
QUAD_REL_DEFAULT = 1e-10


def _metadata(seed=None, quad_abs=QUAD_ABS_DEFAULT, quad_rel=QUAD_REL_DEFAULT):
    md = {
        "version": __version__,
        "backend": "numba" if USE_NUMBA else "numpy",
        "tolerances": {"quad_abs": quad_abs, "quad_rel": quad_rel},
    }
    if seed is not None:
        md["seed"] = seed
    return md


def _echo(args):
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(args, command, fields, rows, metadata):
    if args.format == "json":
        envelope = {
            "command": command,
            "params": _echo(args),
            "rows": rows,
            "metadata": metadata,
        }
        sys.stdout.write(json.dumps(envelope, indent=2) + "\n")
    else:
        sys.stdout.write(",".join(fields) + "\n")
        for row in rows:
            sys.stdout.write(",".join(_csv_cell(row[k]) for k in fields) + "\n")


def _params_from(args) -> BivariateParams:
    return validate(args.mu1, args.mu2, args.sigma1, args.sigma2, args.rho)


def _add_dist_flags(p):
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--sigma1", type=float, required=True)
    p.add_argument("--sigma2", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)


def _add_format_flag(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def cmd_density(args, parser):
    if args.points < 2:
        parser.error("--points must be at least 2")
    if args.x_min >= args.x_max:
        parser.error("--x-min must be strictly below --x-max")
    if args.log_grid and args.x_min <= 0:
        parser.error("--log-grid requires --x-min > 0")
    params = _params_from(args)
    curve = sample_curve(
        params,
        args.kind,
        args.x_min,
        args.x_max,
        args.points,
        spacing="log" if args.log_grid else "linear",
        tol_abs=args.quad_abs,
        tol_rel=args.quad_rel,
    )
    rows = [{"x": float(x), "density": float(v)} for x, v in zip(curve.xs, curve.values)]
    _emit(args, "density", ("x", "density"), rows, _metadata(quad_abs=args.quad_abs, quad_rel=args.quad_rel))
    return 0


def cmd_quadrants(args, parser):
    params = _params_from(args)
    probs = quadrant_probs_any(params)
    d = probs.as_dict()
    d["sum"] = probs.q1 + probs.q2 + probs.q3 + probs.q4
    rows = [{"name": k, "value": float(v)} for k, v in d.items()]
    _emit(args, "quadrants", ("name", "value"), rows, _metadata())
    return 0


def cmd_tail(args, parser):
    params = _params_from(args)
    xs = [float(t) for t in args.x_grid.split(",") if t.strip()]
    if not xs:
        parser.error("--x-grid must contain at least one value")
    report = tail_report(params, xs)
    rows = [
        {"key": "f0", "x": "", "value": report.f0},
        {"key": "x0", "x": "", "value": report.x0},
    ]
    rows += [{"key": "exponent", "x": x, "value": v} for x, v in report.exponent_at]
    rows += [
        {"key": "remainder_bound", "x": x, "value": v}
        for x, v in report.remainder_bound_at
    ]
    _emit(args, "tail", ("key", "x", "value"), rows, _metadata())
    return 0


def cmd_validate(args, parser):
    if args.samples < 100:
        parser.error("--samples must be at least 100")
    params = _params_from(args)
    batch = sample_bivariate(params, args.samples, args.seed)
    cdf_params = params
    if args.corrupt_cdf:
        # negative control: reference CDF built with the means swapped
        cdf_params = validate(args.mu2, args.mu1, args.sigma1, args.sigma2, args.rho)
    cdf = numeric_cdf(cdf_params, args.conditioning)
    report = ks_against_numeric(batch, cdf, args.conditioning)
    rows = [dict(conditioning=args.conditioning, **asdict(report))]
    fields = ("conditioning", "ks_statistic", "ks_threshold_95", "n_effective", "passed")
    _emit(args, "validate", fields, rows, _metadata(seed=args.seed))
    return 0 if report.passed else 4


def cmd_simulate(args, parser):
    params = _params_from(args)
    config = MarketConfig(
        params=params,
        dt=args.dt,
        n_steps=args.steps,
        n_paths=args.paths,
        p0=args.p0,
        seed=args.seed,
        clamp=args.clamp,
    )
    paths = simulate(config)
    if args.emit == "returns":
        rows = [
            {"path": p, "step": s, "value": float(paths.returns[p, s])}
            for p in range(config.n_paths)
            for s in range(config.n_steps)
        ]
        _emit(args, "simulate", ("path", "step", "value"), rows, _metadata(seed=args.seed))
    elif args.emit == "prices":
        rows = [
            {"path": p, "step": s, "price": float(paths.prices[p, s])}
            for p in range(config.n_paths)
            for s in range(config.n_steps + 1)
        ]
        _emit(args, "simulate", ("path", "step", "price"), rows, _metadata(seed=args.seed))
    else:
        pooled = np.abs(paths.returns.ravel())
        alpha = hill_estimator(pooled, args.hill_k)
        rows = [{"hill_alpha": float(alpha), "k": args.hill_k, "n": int(pooled.size)}]
        _emit(args, "simulate", ("hill_alpha", "k", "n"), rows, _metadata(seed=args.seed))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratio-normal",
        description=(
            "Quotient-of-correlated-normals toolkit: densities, quadrant "
            "probabilities, x^-2 tail reports, Monte-Carlo validation and a "
            "supply/demand price simulator."
        ),
        epilog=(
            "Defaults: quadrature tolerances abs=1e-12 rel=1e-10; KS level 95% "
            f"(threshold 1.358/sqrt(n)); seed {DEFAULT_SEED}. Environment: "
            "RATIO_NORMAL_THREADS caps worker threads (output is identical for "
            "any setting); RATIO_NORMAL_NO_NUMBA=1 selects the pure-numpy kernels."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="sample a density curve on a grid")
    _add_dist_flags(p)
    p.add_argument(
        "--kind",
        required=True,
        choices=("q1", "q2", "q3", "q4", "uncond", "singular", "cauchy", "constdenom"),
    )
    p.add_argument("--x-min", type=float, required=True)
    p.add_argument("--x-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log-grid", action="store_true")
    p.add_argument(
        "--quad-abs", type=float, default=QUAD_ABS_DEFAULT,
        help="absolute quadrature tolerance for q2/q4 kinds (default %(default)g)",
    )
    p.add_argument(
        "--quad-rel", type=float, default=QUAD_REL_DEFAULT,
        help="relative quadrature tolerance for q2/q4 kinds (default %(default)g)",
    )
    _add_format_flag(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("quadrants", help="quadrant and half-plane probabilities")
    _add_dist_flags(p)
    _add_format_flag(p)
    p.set_defaults(func=cmd_quadrants)

    p = sub.add_parser("tail", help="tail coefficient, exponent diagnostics, bounds")
    _add_dist_flags(p)
    p.add_argument("--x-grid", default="1e2,1e4,1e6", help="comma-separated x values")
    _add_format_flag(p)
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("validate", help="KS test of samples against the numeric CDF")
    _add_dist_flags(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument(
        "--conditioning", choices=("none", "q1", "q2", "q3", "q4"), default="none"
    )
    p.add_argument(
        "--corrupt-cdf",
        action="store_true",
        help="negative control: swap mu1/mu2 in the reference CDF",
    )
    _add_format_flag(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="supply/demand price-path simulation")
    _add_dist_flags(p)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--paths", type=int, default=1)
    p.add_argument("--p0", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--clamp", type=float, default=None)
    p.add_argument("--emit", choices=("returns", "prices", "hill"), default="hill")
    p.add_argument("--hill-k", type=int, default=10_000)
    _add_format_flag(p)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args, parser)
    except SystemExit as exc:  # parser.error inside a command
        return int(exc.code) if exc.code is not None else 0
    except (RatioNormalError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
