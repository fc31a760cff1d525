"""Benchmark the numba kernel path against the pure-numpy fallback.

Runs each pair-scan kernel on a sawtooth sample grid and reports the
best-of-N wall time per backend plus the speedup.  Results are checked
for exact agreement before timing, so a reported speedup is never
bought with a different answer.

Usage: python benchmarks/bench_kernels.py [--resolution N] [--repeats K]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from epsdelta import _kernels
from epsdelta.delta import GridConfig, optimal_delta_grid
from epsdelta.functions import chainsaw_function, evaluate_many


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--resolution", type=int, default=2 ** 14)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    f = chainsaw_function()
    xs = np.linspace(0.0, 1.0, args.resolution)
    fx = evaluate_many(f, xs)
    eps = 0.5001  # forces a deep scan: the optimum sits on a long tooth
    delta = 0.16

    cases = [
        ("min_dist_pair", lambda impl: impl(xs, fx, eps),
         _kernels._min_dist_pair_nb, _kernels._min_dist_pair_np),
        ("max_gap_within", lambda impl: impl(xs, fx, delta),
         _kernels._max_gap_within_nb, _kernels._max_gap_within_np),
        ("find_violation", lambda impl: impl(xs, fx, eps, 0.2),
         _kernels._find_violation_nb, _kernels._find_violation_np),
        ("chainsaw_values", lambda impl: impl(xs),
         _kernels._chainsaw_nb, _kernels._chainsaw_np),
    ]

    have_numba = _kernels.backend() == "numba"
    print(f"resolution={args.resolution} repeats={args.repeats} backend={_kernels.backend()}")
    if not have_numba:
        print("numba unavailable or disabled; timing the numpy path only\n")

    header = f"{'kernel':<18}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, call, impl_nb, impl_np in cases:
        t_np = best_of(lambda: call(impl_np), args.repeats) * 1e3
        if have_numba:
            call(impl_nb)  # trigger compilation outside the timed region
            r_nb, r_np = call(impl_nb), call(impl_np)
            agree = np.array_equal(np.atleast_1d(r_nb), np.atleast_1d(r_np))
            if not agree:
                raise SystemExit(f"{name}: backends disagree, refusing to time")
            t_nb = best_of(lambda: call(impl_nb), args.repeats) * 1e3
            print(f"{name:<18}{t_nb:>12.3f}{t_np:>12.3f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<18}{'-':>12}{t_np:>12.3f}{'-':>10}")

    # end-to-end: one full grid search, active backend
    t0 = time.perf_counter()
    sample = optimal_delta_grid(f, eps, GridConfig(resolution=args.resolution))
    dt = (time.perf_counter() - t0) * 1e3
    print(f"\noptimal_delta_grid(eps={eps}) -> {sample.delta:.12g}  [{dt:.1f} ms end to end]")


if __name__ == "__main__":
    main()
