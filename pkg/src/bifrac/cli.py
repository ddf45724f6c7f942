"""Command-line front end.

Subcommands: cov, psd-check, sample, gap, counterexample, bernstein-gap,
series-check.  Exit codes are a stable contract for harnesses:

    0  success
    2  input or domain error
    3  an inequality nonnegativity assertion fired
    4  numerical factorization failure
    5  violation search exhausted

Every numeric field in JSON output is rendered with 17 significant digits,
and every seeded command is a deterministic function of its full argument
list (``BIFRAC_SEED`` supplies the seed when --seed is absent).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bernstein import bernstein_from_json, bernstein_gap_exact, series_identity_check
from .counterexample import find_violation, lower_bound_chain
from .dists import dist_from_json
from .errors import (
    BifracError,
    DegenerateFamilyError,
    InequalityViolationError,
    InsufficientSamplesError,
    NegativeArgumentError,
    NegativeTimeError,
    NonFiniteError,
    NotPSDError,
    NumericalFailureError,
    OutOfDomainError,
    SearchExhaustedError,
)
from .gpsim import build_cov_matrix, check_psd, sample_paths
from .inequality import gap_exact, gap_mc, gap_tail_integral, gap_via_variance
from .kernel import BifParams, TimeGrid, cov, validate_params

_INPUT_ERRORS = (
    OutOfDomainError,
    NonFiniteError,
    NegativeTimeError,
    NegativeArgumentError,
    DegenerateFamilyError,
    InsufficientSamplesError,
    ValueError,
    TypeError,
    OverflowError,
    OSError,
)


def _fmt(x) -> str:
    return format(x, ".17g")


def render_json(obj) -> str:
    """JSON with floats at 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {render_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render_json(v) for v in obj) + "]"
    raise TypeError(f"cannot render {type(obj)!r} as JSON")


def _parse_grid(spec: str) -> TimeGrid:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid spec must be start:step:count, got {spec!r}")
    return TimeGrid.regular(float(parts[0]), float(parts[1]), int(parts[2]))


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("BIFRAC_SEED")
    if env is not None:
        return int(env)
    raise ValueError("a seed is required: pass --seed or set BIFRAC_SEED")


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _params(H: float, K: float, force: bool) -> BifParams:
    try:
        return validate_params(H, K)
    except OutOfDomainError:
        if not force:
            raise
        print("warning: (H, K) outside existence domain; forced evaluation", file=sys.stderr)
        return BifParams(H, K)


def _cmd_cov(args) -> int:
    p = _params(args.H, args.K, args.force)
    print(_fmt(cov(p, args.t, args.s)))
    return 0


def _cmd_psd_check(args) -> int:
    p = _params(args.H, args.K, args.force)
    grid = _parse_grid(args.grid)
    verdict = check_psd(build_cov_matrix(p, grid), tol=args.tol)
    print(
        render_json(
            {"psd": verdict.is_psd, "min_eig": verdict.min_eig, "n": len(grid)}
        )
    )
    return 0


def _cmd_sample(args) -> int:
    p = validate_params(args.H, args.K)
    grid = _parse_grid(args.grid)
    batch = sample_paths(p, grid, args.m, _resolve_seed(args.seed))
    batch.to_csv(args.out)
    return 0


def _cmd_gap(args) -> int:
    d = dist_from_json(_load_json(args.dist))
    if args.route == "exact":
        report = gap_exact(d, args.alpha)
    elif args.route == "tail":
        if args.alpha != 1:
            raise ValueError("route=tail requires --alpha 1")
        report = gap_tail_integral(d)
    elif args.route == "variance":
        report = gap_via_variance(d, args.alpha)
    else:
        if args.n is None:
            raise ValueError("route=mc requires --n")
        report = gap_mc(
            d.sampler(), args.alpha, args.n, _resolve_seed(args.seed), workers=args.workers
        )
    print(render_json(report.as_json_dict()))
    return 0


def _cmd_counterexample(args) -> int:
    fam = find_violation(args.alpha)
    chain = lower_bound_chain(fam)
    print(
        render_json(
            {
                "alpha": fam.alpha,
                "c": fam.c,
                "M": fam.M,
                "violation": chain.exact,
                "bound1": chain.bound1,
                "bound2": chain.bound2,
                "threshold": fam.threshold,
                "below_threshold": fam.below_threshold,
            }
        )
    )
    return 0


def _cmd_bernstein_gap(args) -> int:
    d = dist_from_json(_load_json(args.dist))
    g = bernstein_from_json(_load_json(args.bernstein))
    report = bernstein_gap_exact(d, g)
    print(render_json(report.as_json_dict()))
    return 0


def _cmd_series_check(args) -> int:
    res = series_identity_check(args.x, args.y, args.t, args.n_terms)
    print(
        render_json(
            {
                "lhs": res.lhs,
                "rhs_partial": res.rhs_partial,
                "remainder_bound": res.remainder_bound,
            }
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bifrac", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cov", help="evaluate the covariance kernel at (t, s)")
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--force", action="store_true", help="allow (H, K) outside the domain")
    p.set_defaults(func=_cmd_cov)

    p = sub.add_parser("psd-check", help="eigenvalue PSD verdict for a grid covariance matrix")
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--grid", type=str, required=True, help="start:step:count")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--force", action="store_true", help="allow (H, K) outside the domain")
    p.set_defaults(func=_cmd_psd_check)

    p = sub.add_parser("sample", help="sample Gaussian paths to CSV")
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--grid", type=str, required=True, help="start:step:count")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("gap", help="moment gap of a discrete law by a chosen route")
    p.add_argument("-d", "--dist", type=str, required=True, help="distribution JSON file")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--route", choices=("exact", "tail", "variance", "mc"), required=True)
    p.add_argument("--n", type=int, default=None, help="Monte Carlo sample count")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_gap)

    p = sub.add_parser("counterexample", help="find a violating two-point family for alpha > 2")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=_cmd_counterexample)

    p = sub.add_parser("bernstein-gap", help="gap for F(x) = G(x^2) with G a Bernstein function")
    p.add_argument("-d", "--dist", type=str, required=True)
    p.add_argument("-g", "--bernstein", type=str, required=True)
    p.set_defaults(func=_cmd_bernstein_gap)

    p = sub.add_parser("series-check", help="pointwise product-expansion check")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n-terms", type=int, required=True)
    p.set_defaults(func=_cmd_series_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return 2
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InequalityViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NotPSDError, NumericalFailureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except SearchExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except BifracError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
