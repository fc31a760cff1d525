"""Command-line interface.

One subcommand per operation; every command takes ``--output json|csv``
and prints a single deterministic document to stdout.  Exit codes:
0 success, 1 analysis errors (empty level set, precondition failures,
escapes from the domain), 2 usage and parse errors.
"""

from __future__ import annotations

import argparse
import sys

from .delta import (
    GridConfig,
    build_profile,
    modulus_of_continuity,
    optimal_delta_closed_form,
    optimal_delta_grid,
    verify_largest_delta,
)
from .errors import EpsDeltaError, ParseError
from .extremum import certified_max_bound, envelope, first_maximizer, refine_extrema
from .functions import Interval, Polynomial, RealFunction, parse_function
from .intermediate import bisect_boundary, classical_ivt, fixed_point, parse_target_set
from .serialize import csv_text, json_text


def _eps_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("need at least one epsilon")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epsdelta",
        description="Optimal uniform-continuity tolerances, certified extrema, bisection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--fn", required=True, help="function spec, e.g. 'power(alpha=2,b=1)'")
        p.add_argument("--output", choices=("json", "csv"), default="json")
        p.add_argument("--lo", type=float, default=None, help="domain low end (poly only)")
        p.add_argument("--hi", type=float, default=None, help="domain high end (poly only)")
        return p

    p = add("delta-profile", "tolerance profile over a batch of epsilons")
    p.add_argument("--eps", type=_eps_list, required=True, help="comma-separated epsilons")
    p.add_argument("--resolution", type=int, default=4096)
    p.add_argument("--refine", type=int, default=2)

    p = add("delta", "optimal tolerance for one epsilon")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--resolution", type=int, default=4096)
    p.add_argument("--refine", type=int, default=2)
    p.add_argument("--closed-form", action="store_true", help="use the exact formula")

    p = add("modulus", "largest value gap over pairs at most delta apart")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--resolution", type=int, default=4096)

    p = add("verify-delta", "check a claimed tolerance for validity and maximality")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--resolution", type=int, default=4096)

    p = add("maximize", "dyadic extremum refinement with a certified bound")
    p.add_argument("--level", type=int, required=True, help="deepest net level")
    p.add_argument("--resolution", type=int, default=4096, help="modulus grid resolution")

    p = add("envelope", "running maximum of f along the domain")
    p.add_argument("--resolution", type=int, default=4096)

    p = add("bisect", "bracket a boundary crossing of a target set")
    p.add_argument("--target", required=True, help="target set, e.g. '(-inf,0)' or '(0,1)u(2,3)'")
    p.add_argument("--steps", type=int, required=True)

    p = add("ivt", "classical intermediate-value bisection for f(x) = c")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = add("fixpoint", "bracket a fixed point of a self-map")
    p.add_argument("--steps", type=int, required=True)
    return parser


def _resolve_function(args: argparse.Namespace) -> RealFunction:
    f = parse_function(args.fn)
    if args.lo is None and args.hi is None:
        return f
    if not isinstance(f.rule, Polynomial):
        raise argparse.ArgumentTypeError(
            "--lo/--hi only apply to poly functions; other families fix their own domain"
        )
    lo = args.lo if args.lo is not None else f.domain.lo
    hi = args.hi if args.hi is not None else f.domain.hi
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"need --lo < --hi, got {lo} and {hi}")
    return RealFunction(Interval(lo, hi), f.rule)


def _dispatch(args: argparse.Namespace) -> str:
    f = _resolve_function(args)
    out = args.output

    if args.command == "delta-profile":
        cfg = GridConfig(resolution=args.resolution, refine_rounds=args.refine)
        profile = build_profile(f, args.eps, cfg)
        return profile.to_json() if out == "json" else profile.to_csv()

    if args.command == "delta":
        if args.closed_form:
            sample = optimal_delta_closed_form(f, args.eps)
        else:
            cfg = GridConfig(resolution=args.resolution, refine_rounds=args.refine)
            sample = optimal_delta_grid(f, args.eps, cfg)
        if out == "json":
            return json_text(sample.to_json_dict())
        return csv_text(
            ["epsilon", "delta", "method", "bias"],
            [[sample.epsilon, sample.delta, sample.method, sample.bias]],
        )

    if args.command == "modulus":
        w = modulus_of_continuity(f, args.delta, args.resolution)
        if out == "json":
            return json_text({"delta": args.delta, "modulus": w})
        return csv_text(["delta", "modulus"], [[args.delta, w]])

    if args.command == "verify-delta":
        report = verify_largest_delta(f, args.eps, args.delta, args.resolution)
        return report.to_json() if out == "json" else report.to_csv()

    if args.command == "maximize":
        trace = refine_extrema(f, args.level)
        bound = certified_max_bound(f, trace, trace.levels[-1], args.resolution)
        if out == "json":
            doc = trace.to_json_dict()
            doc["certified_bound"] = bound
            doc["first_maximizer"] = first_maximizer(f, args.resolution)
            return json_text(doc)
        return trace.to_csv()

    if args.command == "envelope":
        pairs = envelope(f, args.resolution)
        if out == "json":
            return json_text({"points": [[float(x), float(g)] for x, g in pairs]})
        return csv_text(["x", "g"], ([float(x), float(g)] for x, g in pairs))

    if args.command == "bisect":
        target = parse_target_set(args.target)
        trace = bisect_boundary(f, target, args.steps)
        return trace.to_json() if out == "json" else trace.to_csv()

    if args.command == "ivt":
        trace = classical_ivt(f, args.c, args.steps)
        return trace.to_json() if out == "json" else trace.to_csv()

    if args.command == "fixpoint":
        result = fixed_point(f, args.steps)
        return result.to_json() if out == "json" else result.to_csv()

    raise AssertionError(f"unhandled command {args.command!r}")


def run(argv: list[str]) -> int:
    """Run one CLI invocation; returns the process exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        text = _dispatch(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EpsDeltaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
