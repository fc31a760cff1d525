"""Optimal uniform-continuity tolerances.

For a function f on [a, b] and a value gap epsilon, the optimal
tolerance is

    delta(eps) = inf { |x - y| : |f(x) - f(y)| >= eps },

the largest delta that still works in the uniform-continuity game (any
smaller separation forces |f(x) - f(y)| < eps).  The infimum runs over a
nonempty set exactly when eps is at most the range spread of f.

Three routes compute it:

* a grid search (`optimal_delta_grid`), exact on the sample set and an
  upper bound for the true infimum, sharpened by zooming in around the
  best pair found;
* closed forms (`optimal_delta_closed_form`) for the power family and
  the sawtooth's jump points;
* an exhaustive scan over a finite metric space
  (`optimal_delta_finite`), which is the module's exact oracle.

The companion `modulus_of_continuity` runs the dual query: the largest
value gap over pairs at most delta apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import EmptyLevelSet, OutOfRange, UnsupportedFamily
from .functions import (
    Chainsaw,
    FiniteMetricSpace,
    PowerFamily,
    RealFunction,
    anchor_points,
    canonical_text,
    evaluate_many,
)
from .serialize import csv_text, format_float, json_text

# Pairs count toward the level set when their gap reaches
# eps * (1 - GAP_SLACK_REL): the float image of an exact boundary pair
# (gap == eps in exact arithmetic) can land a few ulp short, and a
# strict comparison would drop it.  The induced understatement of delta
# stays below the 1e-12 closed-form agreement budget.
GAP_SLACK_REL: float = 1e-12

METHOD_CLOSED_FORM = "closed_form"
METHOD_GRID = "grid"
METHOD_EXHAUSTIVE = "exhaustive"

BIAS_EXACT = "exact"
BIAS_UPPER_BOUND = "upper_bound"


@dataclass(frozen=True)
class DeltaSample:
    """One (epsilon, delta) point of a tolerance profile.

    ``method`` records how delta was computed and ``bias`` which side of
    the true value it sits on: grid searches only ever land on or above
    the infimum, closed forms and exhaustive scans hit it exactly.
    """

    epsilon: float
    delta: float
    method: str
    bias: str

    def __post_init__(self) -> None:
        if self.method not in (METHOD_CLOSED_FORM, METHOD_GRID, METHOD_EXHAUSTIVE):
            raise ValueError(f"unknown method {self.method!r}")
        if self.bias not in (BIAS_EXACT, BIAS_UPPER_BOUND):
            raise ValueError(f"unknown bias {self.bias!r}")
        if self.method == METHOD_GRID and self.bias != BIAS_UPPER_BOUND:
            raise ValueError("grid samples are upper bounds")
        if self.method in (METHOD_CLOSED_FORM, METHOD_EXHAUSTIVE) and self.bias != BIAS_EXACT:
            raise ValueError(f"{self.method} samples are exact")
        if not (self.epsilon > 0.0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.delta > 0.0):
            raise ValueError(f"delta must be positive, got {self.delta}")

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "method": self.method,
            "bias": self.bias,
        }


@dataclass(frozen=True)
class GridConfig:
    """Sampling plan for grid-based tolerance searches.

    The base pass scans a uniform grid of ``resolution`` points (plus
    the rule's anchor points unless ``include_anchors`` is off); each
    refinement round re-samples windows around the best pair so far,
    shrunk by ``zoom_factor`` per round.  ``gap_slack_rel`` overrides
    the boundary-pair admission slack; set it to 0.0 for strict
    level-set semantics.
    """

    resolution: int = 4096
    refine_rounds: int = 2
    zoom_factor: float = 16.0
    include_anchors: bool = True
    gap_slack_rel: float = GAP_SLACK_REL

    def __post_init__(self) -> None:
        if self.resolution < 2:
            raise ValueError(f"resolution must be at least 2, got {self.resolution}")
        if self.refine_rounds < 0:
            raise ValueError(f"refine_rounds must be nonnegative, got {self.refine_rounds}")
        if not (self.zoom_factor >= 2.0):
            raise ValueError(f"zoom_factor must be at least 2, got {self.zoom_factor}")
        if not (0.0 <= self.gap_slack_rel < 1.0):
            raise ValueError(f"gap_slack_rel must be in [0, 1), got {self.gap_slack_rel}")


@dataclass
class DeltaProfile:
    """Tolerance samples for one function, sorted by epsilon."""

    function_id: str
    M_estimate: float
    samples: list[DeltaSample] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "function_id": self.function_id,
            "M_estimate": self.M_estimate,
            "samples": [s.to_json_dict() for s in self.samples],
        }

    def to_json(self) -> str:
        return json_text(self.to_json_dict())

    def to_csv(self) -> str:
        rows = [[s.epsilon, s.delta, s.method, s.bias] for s in self.samples]
        return csv_text(["epsilon", "delta", "method", "bias"], rows)


@dataclass
class VerificationReport:
    """Outcome of checking a claimed tolerance against a sample grid.

    ``valid`` means no grid pair closer than the claim reaches the gap;
    ``maximal`` means some pair within 0.1% above the claim does, so the
    claim cannot be meaningfully enlarged.  Witnesses are (x, y, fx, fy).
    """

    epsilon: float
    delta_claimed: float
    valid: bool
    maximal: bool
    violation: tuple[float, float, float, float] | None = None
    threshold_witness: tuple[float, float, float, float] | None = None

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta_claimed": self.delta_claimed,
            "valid": self.valid,
            "maximal": self.maximal,
            "violation": list(self.violation) if self.violation else None,
            "threshold_witness": list(self.threshold_witness) if self.threshold_witness else None,
        }

    def to_json(self) -> str:
        return json_text(self.to_json_dict())

    def to_csv(self) -> str:
        row = [self.epsilon, self.delta_claimed, self.valid, self.maximal]
        return csv_text(["epsilon", "delta_claimed", "valid", "maximal"], [row])


# a violation needs to clear the claim by more than float noise
VALIDITY_MARGIN_REL: float = 1e-9

# how far above the claim the maximality probe is allowed to look
MAXIMALITY_MARGIN_REL: float = 1e-3


def base_grid_points(f: RealFunction, resolution: int, include_anchors: bool = True) -> np.ndarray:
    """Sorted unique sample abscissas: uniform grid plus rule anchors."""
    xs = np.linspace(f.domain.lo, f.domain.hi, int(resolution))
    if include_anchors:
        extra = anchor_points(f)
        if extra.size:
            xs = np.unique(np.concatenate((xs, extra)))
    return xs


def optimal_delta_grid(
    f: RealFunction, epsilon: float, cfg: GridConfig = GridConfig()
) -> DeltaSample:
    """Grid estimate of the optimal tolerance, exact on the sample set.

    Scans all pairs of the base grid for the closest one with value gap
    at least epsilon, then re-scans zoomed windows around it.  The
    result can only overestimate the true infimum (bias upper_bound).

    Raises EmptyLevelSet when epsilon exceeds the grid range spread, in
    which case no pair qualifies anywhere.
    """
    if not (epsilon > 0.0):
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    eps_eff = epsilon * (1.0 - cfg.gap_slack_rel)
    xs = base_grid_points(f, cfg.resolution, cfg.include_anchors)
    fx = evaluate_many(f, xs)
    spread = float(fx.max() - fx.min())
    if spread < eps_eff:
        raise EmptyLevelSet(
            f"no pair can reach gap {epsilon!r}: grid range spread is only {spread!r}"
        )

    best, bi, bj = _kernels.min_dist_pair(xs, fx, eps_eff)
    bx, by = float(xs[bi]), float(xs[bj])

    lo, hi = f.domain.lo, f.domain.hi
    width = f.domain.span
    for r in range(1, cfg.refine_rounds + 1):
        half = width / cfg.zoom_factor ** r
        windows = []
        for center in (bx, by):
            windows.append(
                np.linspace(max(lo, center - half), min(hi, center + half), cfg.resolution)
            )
        pts = np.unique(np.concatenate(windows))
        vals = evaluate_many(f, pts)
        dist, i, j = _kernels.min_dist_pair(pts, vals, eps_eff)
        if i >= 0 and dist < best:
            best, bx, by = dist, float(pts[i]), float(pts[j])

    return DeltaSample(epsilon=float(epsilon), delta=best, method=METHOD_GRID, bias=BIAS_UPPER_BOUND)


def optimal_delta_closed_form(f: RealFunction, epsilon: float) -> DeltaSample:
    """Exact optimal tolerance where a formula exists.

    Power family (x^alpha on [0, b], spread M = b^alpha, 0 < eps < M):

        alpha >= 1:  delta = b - (b^alpha - eps)^(1/alpha)
        alpha <= 1:  delta = eps^(1/alpha)

    Sawtooth, at the jump points eps = 1/n only:

        delta(1/n) = 1 / (n (2n + 1))

    Raises UnsupportedFamily for other rules, OutOfRange for epsilon
    outside the formula's validity.
    """
    if not (epsilon > 0.0):
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    rule = f.rule
    if isinstance(rule, PowerFamily):
        alpha, b = rule.alpha, rule.b
        spread = b ** alpha
        if not (epsilon < spread):
            raise OutOfRange(
                f"epsilon must be below the range spread {spread!r}, got {epsilon!r}"
            )
        if alpha >= 1.0:
            delta = b - (spread - epsilon) ** (1.0 / alpha)
        else:
            delta = epsilon ** (1.0 / alpha)
        return DeltaSample(float(epsilon), float(delta), METHOD_CLOSED_FORM, BIAS_EXACT)
    if isinstance(rule, Chainsaw):
        n = _chainsaw_jump_index(epsilon)
        if n is None:
            raise OutOfRange(
                f"sawtooth closed form needs epsilon = 1/n for a whole n >= 1, got {epsilon!r}"
            )
        delta = 1.0 / (n * (2.0 * n + 1.0))
        return DeltaSample(float(epsilon), float(delta), METHOD_CLOSED_FORM, BIAS_EXACT)
    raise UnsupportedFamily(f"no closed form for {type(rule).__name__}")


def _chainsaw_jump_index(epsilon: float) -> int | None:
    """n such that epsilon is 1/n up to rounding, else None."""
    if not (0.0 < epsilon <= 1.0):
        return None
    n = round(1.0 / epsilon)
    if n < 1:
        return None
    # accept the float nearest 1/n, reject anything a real offset away
    if abs(epsilon - 1.0 / n) > 4.0 * np.spacing(1.0 / n):
        return None
    return int(n)


def optimal_delta_finite(space: FiniteMetricSpace, epsilon: float) -> DeltaSample:
    """Exact optimal tolerance on a finite metric space.

    Exhaustive scan over all point pairs; this is the exact oracle the
    grid search is tested against.  Ties go to the first pair in
    row-major (i, j) order.
    """
    if not (epsilon > 0.0):
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    n = space.size
    gaps = np.abs(space.values[:, None] - space.values[None, :])
    iu, ju = np.triu_indices(n, k=1)
    qual = gaps[iu, ju] >= epsilon
    if not qual.any():
        spread = float(space.values.max() - space.values.min()) if n else 0.0
        raise EmptyLevelSet(
            f"no pair can reach gap {epsilon!r}: value spread is only {spread!r}"
        )
    dists = space.dist[iu, ju][qual]
    best = float(dists.min())
    return DeltaSample(float(epsilon), best, METHOD_EXHAUSTIVE, BIAS_EXACT)


def modulus_of_continuity(f: RealFunction, delta: float, resolution: int) -> float:
    """Largest grid value gap over pairs at most delta apart.

    A lower bound for the true modulus w(delta); exact for piecewise
    linear functions when the grid contains all breakpoints.  delta = 0
    gives 0 (the grid has no repeated abscissas).
    """
    if delta < 0.0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    xs = np.linspace(f.domain.lo, f.domain.hi, int(resolution))
    fx = evaluate_many(f, xs)
    return _kernels.max_gap_within(xs, fx, float(delta))


def build_profile(
    f: RealFunction, epsilons, cfg: GridConfig = GridConfig()
) -> DeltaProfile:
    """Tolerance profile over a batch of epsilon values, sorted ascending.

    Uses the closed form whenever the family and the epsilon allow it,
    falling back to the grid search otherwise.  An epsilon beyond the
    range spread aborts the whole profile with EmptyLevelSet naming the
    offending value.
    """
    eps_list = sorted(float(e) for e in epsilons)
    if not eps_list:
        raise ValueError("need at least one epsilon")
    if any(e <= 0.0 for e in eps_list):
        raise ValueError(f"epsilons must be positive, got {eps_list[0]}")
    lo_val, hi_val = _grid_range(f, cfg)
    spread = hi_val - lo_val
    if spread == 0.0:
        raise EmptyLevelSet(
            "range spread is 0 on the grid: every epsilon has an empty level set"
        )
    samples: list[DeltaSample] = []
    for eps in eps_list:
        try:
            samples.append(optimal_delta_closed_form(f, eps))
            continue
        except (UnsupportedFamily, OutOfRange):
            pass
        try:
            samples.append(optimal_delta_grid(f, eps, cfg))
        except EmptyLevelSet as exc:
            raise EmptyLevelSet(f"epsilon={eps!r}: {exc}") from exc
    return DeltaProfile(
        function_id=canonical_text(f), M_estimate=float(spread), samples=samples
    )


def _grid_range(f: RealFunction, cfg: GridConfig) -> tuple[float, float]:
    xs = base_grid_points(f, cfg.resolution, cfg.include_anchors)
    fx = evaluate_many(f, xs)
    return float(fx.min()), float(fx.max())


def verify_largest_delta(
    f: RealFunction, epsilon: float, delta_claimed: float, resolution: int
) -> VerificationReport:
    """Check a claimed tolerance two ways against a sample grid.

    Validity: no grid pair strictly closer than the claim (beyond float
    noise) may reach the gap.  Maximality: some pair within 0.1% above
    the claim must reach it, otherwise a larger delta would also have
    worked.  Both searches report the first witness found.
    """
    if not (epsilon > 0.0):
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not (delta_claimed > 0.0):
        raise ValueError(f"delta_claimed must be positive, got {delta_claimed}")
    xs = base_grid_points(f, resolution)
    fx = evaluate_many(f, xs)
    eps_eff = epsilon * (1.0 - GAP_SLACK_REL)

    vi, vj = _kernels.find_violation(xs, fx, eps_eff, delta_claimed * (1.0 - VALIDITY_MARGIN_REL))
    mi, mj = _kernels.find_violation(xs, fx, eps_eff, delta_claimed * (1.0 + MAXIMALITY_MARGIN_REL))

    violation = None
    if vi >= 0:
        violation = (float(xs[vi]), float(xs[vj]), float(fx[vi]), float(fx[vj]))
    witness = None
    if mi >= 0:
        witness = (float(xs[mi]), float(xs[mj]), float(fx[mi]), float(fx[mj]))
    return VerificationReport(
        epsilon=float(epsilon),
        delta_claimed=float(delta_claimed),
        valid=vi < 0,
        maximal=mi >= 0,
        violation=violation,
        threshold_witness=witness,
    )
