"""Extremum refinement on nested dyadic nets, with certified bounds.

Level n splits [a, b] into 2^n equal pieces; the net holds the 2^n + 1
split points.  Nets are nested (every level-n point reappears at level
n+1), so the running grid maximum M_n can only grow and the minimum m_n
can only shrink as the level increases.  Combining M_n with a modulus
of continuity estimate w gives a certified upper bound

    sup f  <=  M_n + w(mesh_n),

valid whenever w really bounds how much f moves across one mesh cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .delta import modulus_of_continuity
from .errors import LevelTooLarge
from .functions import Interval, RealFunction, canonical_text, evaluate_many
from .serialize import csv_text, json_text

# 2^24 + 1 points is the largest net we are willing to materialize
MAX_NET_LEVEL: int = 24


@dataclass
class DyadicNet:
    """Level-n split points of an interval: a + (b-a) * k / 2^n."""

    level: int
    points: np.ndarray

    @property
    def mesh(self) -> float:
        return float(self.points[1] - self.points[0]) if self.points.size > 1 else 0.0


def dyadic_net(domain: Interval, level: int) -> DyadicNet:
    """The 2^level + 1 dyadic split points of the domain.

    Fractions k / 2^level are exact in binary floating point, so nets at
    successive levels are exactly nested; the endpoints are the domain
    endpoints themselves.
    """
    if level < 0:
        raise ValueError(f"level must be nonnegative, got {level}")
    if level > MAX_NET_LEVEL:
        raise LevelTooLarge(f"level {level} exceeds the maximum {MAX_NET_LEVEL}")
    if not (domain.span > 0.0):
        raise ValueError("domain must have positive width")
    t = np.arange(2 ** level + 1, dtype=np.float64) / 2.0 ** level
    pts = domain.lo + domain.span * t
    pts[0] = domain.lo
    pts[-1] = domain.hi
    return DyadicNet(level=int(level), points=pts)


@dataclass
class RefinementTrace:
    """Per-level extremum record of a dyadic refinement run.

    ``max_values``/``min_values`` are the grid max/min at each level,
    ``argmax``/``argmin`` the points attaining them (ties resolved to
    the smallest net index, hence the leftmost point).  A slot of
    ``certified_gap`` is filled by :func:`certified_max_bound`.
    """

    function_id: str
    levels: list[int] = field(default_factory=list)
    mesh: list[float] = field(default_factory=list)
    max_values: list[float] = field(default_factory=list)
    min_values: list[float] = field(default_factory=list)
    argmax: list[float] = field(default_factory=list)
    argmin: list[float] = field(default_factory=list)
    certified_gap: list[float | None] = field(default_factory=list)

    def index_of_level(self, level: int) -> int:
        try:
            return self.levels.index(level)
        except ValueError:
            raise ValueError(f"level {level} was not recorded in this trace") from None

    def to_json_dict(self) -> dict:
        return {
            "function_id": self.function_id,
            "levels": [
                {
                    "level": self.levels[i],
                    "mesh": self.mesh[i],
                    "M_n": self.max_values[i],
                    "m_n": self.min_values[i],
                    "argmax": self.argmax[i],
                    "argmin": self.argmin[i],
                    "certified_gap": self.certified_gap[i],
                }
                for i in range(len(self.levels))
            ],
        }

    def to_json(self) -> str:
        return json_text(self.to_json_dict())

    def to_csv(self) -> str:
        rows = [
            [
                self.levels[i],
                self.mesh[i],
                self.max_values[i],
                self.min_values[i],
                self.argmax[i],
                self.argmin[i],
                self.certified_gap[i],
            ]
            for i in range(len(self.levels))
        ]
        return csv_text(
            ["level", "mesh", "M_n", "m_n", "argmax", "argmin", "certified_gap"], rows
        )


def refine_extrema(f: RealFunction, max_level: int, stall_tol: float = 0.0) -> RefinementTrace:
    """Track grid extrema over nested dyadic nets up to ``max_level``.

    Each level evaluates only the new midpoints, so the whole run costs
    one evaluation per point of the finest net.  With ``stall_tol > 0``
    the run stops early once both extrema moved less than the tolerance
    over two consecutive levels.
    """
    if max_level < 0:
        raise ValueError(f"max_level must be nonnegative, got {max_level}")
    if max_level > MAX_NET_LEVEL:
        raise LevelTooLarge(f"level {max_level} exceeds the maximum {MAX_NET_LEVEL}")
    if stall_tol < 0.0:
        raise ValueError(f"stall_tol must be nonnegative, got {stall_tol}")
    if not (f.domain.span > 0.0):
        raise ValueError("domain must have positive width")

    lo, span = f.domain.lo, f.domain.span
    trace = RefinementTrace(function_id=canonical_text(f))

    net0 = dyadic_net(f.domain, 0)
    v0 = evaluate_many(f, net0.points)
    # state: value, net index at the current level, abscissa
    if v0[0] >= v0[1]:
        cur_max, max_k, max_x = float(v0[0]), 0, float(net0.points[0])
    else:
        cur_max, max_k, max_x = float(v0[1]), 1, float(net0.points[1])
    if v0[0] <= v0[1]:
        cur_min, min_k, min_x = float(v0[0]), 0, float(net0.points[0])
    else:
        cur_min, min_k, min_x = float(v0[1]), 1, float(net0.points[1])
    _record(trace, 0, span, cur_max, cur_min, max_x, min_x)

    for n in range(1, max_level + 1):
        # new points of level n are the odd multiples of 2^-n
        j = np.arange(2 ** (n - 1), dtype=np.float64)
        t = (2.0 * j + 1.0) / 2.0 ** n
        pts = lo + span * t
        vals = evaluate_many(f, pts)

        max_k *= 2
        min_k *= 2
        i = int(np.argmax(vals))
        k_new = 2 * i + 1
        if vals[i] > cur_max or (vals[i] == cur_max and k_new < max_k):
            cur_max, max_k, max_x = float(vals[i]), k_new, float(pts[i])
        i = int(np.argmin(vals))
        k_new = 2 * i + 1
        if vals[i] < cur_min or (vals[i] == cur_min and k_new < min_k):
            cur_min, min_k, min_x = float(vals[i]), k_new, float(pts[i])

        _record(trace, n, span / 2.0 ** n, cur_max, cur_min, max_x, min_x)

        if stall_tol > 0.0 and len(trace.levels) >= 3:
            dmax1 = abs(trace.max_values[-1] - trace.max_values[-2])
            dmax2 = abs(trace.max_values[-2] - trace.max_values[-3])
            dmin1 = abs(trace.min_values[-1] - trace.min_values[-2])
            dmin2 = abs(trace.min_values[-2] - trace.min_values[-3])
            if max(dmax1, dmax2, dmin1, dmin2) < stall_tol:
                break

    return trace


def _record(
    trace: RefinementTrace,
    level: int,
    mesh: float,
    cur_max: float,
    cur_min: float,
    max_x: float,
    min_x: float,
) -> None:
    trace.levels.append(level)
    trace.mesh.append(float(mesh))
    trace.max_values.append(cur_max)
    trace.min_values.append(cur_min)
    trace.argmax.append(max_x)
    trace.argmin.append(min_x)
    trace.certified_gap.append(None)


def certified_max_bound(
    f: RealFunction, trace: RefinementTrace, level: int,
    modulus_resolution: int = 2 ** 12 + 1,
) -> float:
    """Certified upper bound M_n + w(mesh_n) for sup f.

    ``level`` must have been recorded in the trace.  The modulus is the
    grid estimate from :func:`modulus_of_continuity`; the bound is
    rigorous whenever that estimate really dominates the modulus.  The
    trace's ``certified_gap`` slot is filled with the bound minus M_n.
    The default resolution is 2^12 + 1 so the modulus grid contains
    every dyadic mesh width as an exact point spacing.
    """
    i = trace.index_of_level(level)
    w = modulus_of_continuity(f, trace.mesh[i], modulus_resolution)
    bound = trace.max_values[i] + w
    trace.certified_gap[i] = bound - trace.max_values[i]
    return float(bound)


def envelope(f: RealFunction, resolution: int) -> np.ndarray:
    """Running maximum g(x) = max of f over [a, x], sampled on a grid.

    Returned as an (resolution, 2) array of (x, g(x)) rows; g is
    nondecreasing and ends at the grid maximum of f.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    xs = np.linspace(f.domain.lo, f.domain.hi, int(resolution))
    g = np.maximum.accumulate(evaluate_many(f, xs))
    return np.column_stack((xs, g))


def first_maximizer(f: RealFunction, resolution: int, value_tol: float = 0.0) -> float:
    """Leftmost grid point whose value reaches the grid maximum.

    With ``value_tol > 0``, the first point within that tolerance of the
    maximum; useful when two peaks tie up to rounding.
    """
    if value_tol < 0.0:
        raise ValueError(f"value_tol must be nonnegative, got {value_tol}")
    pairs = envelope(f, resolution)
    g = pairs[:, 1]
    idx = int(np.argmax(g >= g[-1] - value_tol))
    return float(pairs[idx, 0])
