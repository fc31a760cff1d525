"""Generalized intermediate-value search by bisection.

Instead of a root of f(x) = c, the search tracks membership of f(x) in
a target set D (a finite union of intervals).  Starting from a bracket
with f(a) in D and f(b) not in D, halving keeps that invariant, so the
bracket always pins a point where f crosses the boundary of D.  The
classical IVT (D = (-inf, c)) and fixed-point search (g = f - x against
D = (0, inf)) are thin wrappers.

No continuity is assumed anywhere: for discontinuous f the bracket
still converges, it just may land on a jump across the boundary rather
than a boundary value.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import NotSelfMap, ParseError, PreconditionViolated
from .extremum import dyadic_net
from .functions import RealFunction, evaluate, evaluate_many
from .serialize import csv_text, format_float, json_text

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

# net level for the sampled self-map check in fixed_point
SELF_MAP_NET_LEVEL: int = 10


@dataclass(frozen=True)
class TargetSet:
    """Finite union of intervals, kept sorted, disjoint, non-adjacent.

    Each piece is (lo, hi, lo_open, hi_open); infinite ends are open by
    construction.  Construction merges overlapping or touching pieces,
    so equality of pieces is equality of the point sets they describe.
    """

    pieces: tuple[tuple[float, float, bool, bool], ...]

    def __post_init__(self) -> None:
        cleaned = []
        for lo, hi, lo_open, hi_open in self.pieces:
            lo, hi = float(lo), float(hi)
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError("interval endpoints cannot be NaN")
            if lo > hi:
                raise ValueError(f"interval endpoints out of order: ({lo}, {hi})")
            if lo == -math.inf:
                lo_open = True
            if hi == math.inf:
                hi_open = True
            if lo == hi and (lo_open or hi_open or not math.isfinite(lo)):
                continue  # empty piece
            cleaned.append((lo, hi, bool(lo_open), bool(hi_open)))
        cleaned.sort(key=lambda p: (p[0], p[1]))
        merged: list[tuple[float, float, bool, bool]] = []
        for piece in cleaned:
            if merged:
                lo0, hi0, lo0_open, hi0_open = merged[-1]
                lo1, hi1, lo1_open, hi1_open = piece
                touches = lo1 == hi0 and (not hi0_open or not lo1_open)
                if lo1 < hi0 or touches:
                    if hi1 > hi0:
                        hi0, hi0_open = hi1, hi1_open
                    elif hi1 == hi0:
                        hi0_open = hi0_open and hi1_open
                    merged[-1] = (lo0, hi0, lo0_open, hi0_open)
                    continue
            merged.append(piece)
        object.__setattr__(self, "pieces", tuple(merged))

    def contains(self, y: float) -> bool:
        for lo, hi, lo_open, hi_open in self.pieces:
            if lo < y < hi:
                return True
            if y == lo and not lo_open:
                return True
            if y == hi and not hi_open:
                return True
        return False

    def boundary_points(self) -> tuple[float, ...]:
        """Finite endpoints of the pieces, sorted; openness is irrelevant."""
        ends: set[float] = set()
        for lo, hi, _, _ in self.pieces:
            if math.isfinite(lo):
                ends.add(lo)
            if math.isfinite(hi):
                ends.add(hi)
        return tuple(sorted(ends))

    def __str__(self) -> str:
        if not self.pieces:
            return "()"
        parts = []
        for lo, hi, lo_open, hi_open in self.pieces:
            left = "(" if lo_open else "["
            right = ")" if hi_open else "]"
            lo_s = "-inf" if lo == -math.inf else format_float(lo)
            hi_s = "inf" if hi == math.inf else format_float(hi)
            parts.append(f"{left}{lo_s},{hi_s}{right}")
        return "u".join(parts)


_PIECE_RE = re.compile(r"\s*([\[(])\s*([^,()\[\]\s]+)\s*,\s*([^,()\[\]\s]+)\s*([\])])")


def _parse_endpoint(text: str, pos: int) -> float:
    low = text.lower()
    if low in ("inf", "+inf"):
        return math.inf
    if low == "-inf":
        return -math.inf
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"bad endpoint {text!r}", pos, expected="a number or -inf/inf") from None


def parse_target_set(text: str) -> TargetSet:
    """Parse e.g. ``(-inf,0)``, ``[0,1]``, or ``(0,1)u(2,3)``."""
    pieces = []
    pos = 0
    while True:
        m = _PIECE_RE.match(text, pos)
        if m is None:
            raise ParseError("expected an interval piece", pos, expected="'(' or '['")
        lo = _parse_endpoint(m.group(2), m.start(2))
        hi = _parse_endpoint(m.group(3), m.start(3))
        if lo > hi:
            raise ParseError(f"endpoints out of order: {m.group(0).strip()!r}", m.start())
        pieces.append((lo, hi, m.group(1) == "(", m.group(4) == ")"))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        if text[pos] in ("u", "U"):
            pos += 1
        else:
            raise ParseError(f"unexpected {text[pos]!r}", pos, expected="'u' between pieces")
    return TargetSet(tuple(pieces))


def classify(y: float, target: TargetSet, boundary_tol: float = 0.0) -> str:
    """Locate y relative to the target set: boundary beats interior.

    Boundary means within ``boundary_tol`` of any finite piece endpoint
    (openness does not matter there); otherwise interior when strictly
    inside a piece, exterior when outside all of them.
    """
    if boundary_tol < 0.0:
        raise ValueError(f"boundary_tol must be nonnegative, got {boundary_tol}")
    for lo, hi, _, _ in target.pieces:
        if math.isfinite(lo) and abs(y - lo) <= boundary_tol:
            return BOUNDARY
        if math.isfinite(hi) and abs(y - hi) <= boundary_tol:
            return BOUNDARY
    for lo, hi, _, _ in target.pieces:
        if lo < y < hi:
            return INTERIOR
    return EXTERIOR


@dataclass
class BisectionStep:
    k: int
    a: float
    b: float
    midpoint: float
    midpoint_class: str


@dataclass
class BisectionTrace:
    """Bracket history of one bisection run.

    Step k records the oriented bracket before its halving: f(a_k) is
    in the target set, f(b_k) is not.  ``error_bound`` is the exact
    |b_0 - a_0| * 2^-n after n completed halvings; ``boundary_hit`` is
    set when a midpoint classified as boundary stopped the run early.
    """

    steps: list[BisectionStep] = field(default_factory=list)
    final_bracket: tuple[float, float] = (0.0, 0.0)
    error_bound: float = 0.0
    boundary_hit: float | None = None

    @property
    def final_midpoint(self) -> float:
        a, b = self.final_bracket
        return a + (b - a) / 2.0

    def to_json_dict(self) -> dict:
        return {
            "steps": [
                {
                    "k": s.k,
                    "a_k": s.a,
                    "b_k": s.b,
                    "midpoint": s.midpoint,
                    "class": s.midpoint_class,
                }
                for s in self.steps
            ],
            "final_bracket": list(self.final_bracket),
            "final_midpoint": self.final_midpoint,
            "error_bound": self.error_bound,
            "boundary_hit": self.boundary_hit,
        }

    def to_json(self) -> str:
        return json_text(self.to_json_dict())

    def to_csv(self) -> str:
        rows = [[s.k, s.a, s.b, s.midpoint, s.midpoint_class] for s in self.steps]
        return csv_text(["k", "a_k", "b_k", "midpoint", "class"], rows)


def _run_bisection(value_at, a: float, b: float, target: TargetSet, steps: int,
                   boundary_tol: float) -> BisectionTrace:
    fa, fb = value_at(a), value_at(b)
    a_in, b_in = target.contains(fa), target.contains(fb)
    if a_in == b_in:
        state = "inside" if a_in else "outside"
        raise PreconditionViolated(
            f"need exactly one endpoint value in the target set; "
            f"f({a!r})={fa!r} and f({b!r})={fb!r} are both {state}"
        )
    if not a_in:
        a, b = b, a
    width0 = abs(b - a)
    trace = BisectionTrace(final_bracket=(a, b), error_bound=width0)
    halvings = 0
    for k in range(steps):
        mid = a + (b - a) / 2.0
        y = value_at(mid)
        cls = classify(y, target, boundary_tol)
        trace.steps.append(BisectionStep(k, a, b, mid, cls))
        if cls == BOUNDARY:
            trace.boundary_hit = mid
            break
        if target.contains(y):
            a = mid
        else:
            b = mid
        halvings += 1
    trace.final_bracket = (a, b)
    trace.error_bound = width0 * 2.0 ** (-halvings)
    return trace


def bisect_boundary(f: RealFunction, target: TargetSet, steps: int,
                    boundary_tol: float = 0.0) -> BisectionTrace:
    """Bisect the domain toward a point where f crosses the target boundary.

    Requires exactly one of f(a), f(b) to lie in the target set
    (PreconditionViolated otherwise).  A midpoint whose value classifies
    as boundary (within ``boundary_tol``) stops the run early and is
    reported as ``boundary_hit``.
    """
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    if not (f.domain.span > 0.0):
        raise ValueError("domain must have positive width")
    return _run_bisection(
        lambda x: evaluate(f, x), f.domain.lo, f.domain.hi, target, steps, boundary_tol
    )


def classical_ivt(f: RealFunction, c: float, steps: int) -> BisectionTrace:
    """Classical intermediate-value bisection for f(x) = c.

    Requires c strictly between f(a) and f(b); runs the target-set
    search against D = (-inf, c), whose boundary is exactly {c}.
    """
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    fa, fb = evaluate(f, f.domain.lo), evaluate(f, f.domain.hi)
    if not (fa < c < fb or fb < c < fa):
        raise PreconditionViolated(
            f"need c strictly between the endpoint values, got f(a)={fa!r}, f(b)={fb!r}, c={c!r}"
        )
    target = TargetSet(((-math.inf, float(c), True, True),))
    return _run_bisection(
        lambda x: evaluate(f, x), f.domain.lo, f.domain.hi, target, steps, 0.0
    )


@dataclass
class FixedPointResult:
    """Outcome of a fixed-point search: an endpoint hit or a bracket.

    ``endpoint`` is set when |f(e) - e| <= endpoint_tol at a domain
    endpoint e; otherwise ``trace`` holds the bisection run on
    g(x) = f(x) - x against the target (0, inf).
    """

    endpoint: float | None = None
    trace: BisectionTrace | None = None

    @property
    def estimate(self) -> float:
        if self.endpoint is not None:
            return self.endpoint
        assert self.trace is not None
        if self.trace.boundary_hit is not None:
            return self.trace.boundary_hit
        return self.trace.final_midpoint

    def to_json_dict(self) -> dict:
        return {
            "endpoint": self.endpoint,
            "estimate": self.estimate,
            "trace": self.trace.to_json_dict() if self.trace is not None else None,
        }

    def to_json(self) -> str:
        return json_text(self.to_json_dict())

    def to_csv(self) -> str:
        if self.trace is not None:
            return self.trace.to_csv()
        return csv_text(["endpoint"], [[self.endpoint]])


def fixed_point(f: RealFunction, steps: int, endpoint_tol: float = 0.0) -> FixedPointResult:
    """Bracket a fixed point of a self-map of its own domain.

    The self-map requirement is checked on a level-10 dyadic net;
    NotSelfMap (with a witness point) reports the first escape.  If an
    endpoint is already fixed up to ``endpoint_tol`` it is returned
    directly; otherwise g(x) = f(x) - x has g(a) > 0 >= g(b), and the
    boundary search on D = (0, inf) brackets a sign change of g.  A
    midpoint with g exactly 0 stops early as a boundary hit.
    """
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    if endpoint_tol < 0.0:
        raise ValueError(f"endpoint_tol must be nonnegative, got {endpoint_tol}")
    if not (f.domain.span > 0.0):
        raise ValueError("domain must have positive width")

    lo, hi = f.domain.lo, f.domain.hi
    net = dyadic_net(f.domain, SELF_MAP_NET_LEVEL)
    vals = evaluate_many(f, net.points)
    escaped = (vals < lo) | (vals > hi)
    if escaped.any():
        i = int(np.argmax(escaped))
        witness = (float(net.points[i]), float(vals[i]))
        raise NotSelfMap(
            f"f({witness[0]!r})={witness[1]!r} leaves the domain [{lo!r}, {hi!r}]", witness
        )

    if abs(evaluate(f, lo) - lo) <= endpoint_tol:
        return FixedPointResult(endpoint=lo)
    if abs(evaluate(f, hi) - hi) <= endpoint_tol:
        return FixedPointResult(endpoint=hi)

    target = TargetSet(((0.0, math.inf, True, True),))
    trace = _run_bisection(
        lambda x: evaluate(f, x) - x, lo, hi, target, steps, 0.0
    )
    return FixedPointResult(trace=trace)
