"""Fixed points of the 1D map and the dynamical core.

The map has at most three fixed points on [0, inf): up to two on the
increasing branch [0, 2) (they are born/destroyed in folds) and at most one
on the decreasing branch (2, inf), where g(x) = f(x) - x is strictly
decreasing.  The dynamical core is the invariant interval that absorbs all
nontrivial dynamics; which interval that is depends on the fixed-point
configuration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .core import (
    CRITICAL_POINT,
    BracketError,
    DomainError,
    MapParams,
    NumericRangeError,
    deriv_x,
    eval_map,
    map_step,
)

__all__ = [
    "Branch",
    "CoreCase",
    "DynamicalCore",
    "FixedPoint",
    "FixedPointConfiguration",
    "Stability",
    "classify_stability",
    "core_condition",
    "dynamical_core",
    "find_fixed_points",
    "right_branch_fixed_point",
    "right_preimage",
]

_GRID_N = 100_001          # scan resolution on the increasing branch [0, 2]
_ROOT_RESIDUAL = 1e-12     # |f(x) - x| after refinement
_MERGE_TOL = 1e-8          # roots closer than this are a degenerate pair
_NEUTRAL_TOL = 1e-9
_SUPER_TOL = 1e-12


class Stability(Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    NEUTRAL = "neutral"
    REPELLING = "repelling"


class Branch(Enum):
    LEFT = "left"
    CRITICAL = "critical"
    RIGHT = "right"


class CoreCase(Enum):
    TRIVIAL_GLOBAL_ATTRACTOR = "trivial_global_attractor"
    DECREASING_BRANCH_ONLY = "decreasing_branch_only"
    CORE_F2C_FC = "core_f2c_fc"
    CORE_X0_Y0 = "core_x0_y0"
    LEFT_FIXED_POINT_INSIDE = "left_fixed_point_inside"


@dataclass(frozen=True)
class FixedPoint:
    x: float
    multiplier: float
    stability: Stability
    branch: Branch
    degenerate: bool = False


@dataclass(frozen=True)
class FixedPointConfiguration:
    points: tuple[FixedPoint, ...]

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def degenerate(self) -> bool:
        return any(p.degenerate for p in self.points)

    @property
    def xs(self) -> tuple[float, ...]:
        return tuple(p.x for p in self.points)


@dataclass(frozen=True)
class DynamicalCore:
    lo: float
    hi: float
    case: CoreCase
    contains_unique_fixed_point: bool


def _g(p: MapParams, x: float) -> float:
    return eval_map(p, x) - x


def _make_fixed_point(p: MapParams, x: float, degenerate: bool = False) -> FixedPoint:
    mu = deriv_x(p, x)
    if abs(mu) <= _SUPER_TOL:
        stab = Stability.SUPERATTRACTING
    elif abs(1.0 - abs(mu)) <= _NEUTRAL_TOL:
        stab = Stability.NEUTRAL
    elif abs(mu) < 1.0:
        stab = Stability.ATTRACTING
    else:
        stab = Stability.REPELLING
    if abs(x - CRITICAL_POINT) <= 1e-12:
        branch = Branch.CRITICAL
    elif x < CRITICAL_POINT:
        branch = Branch.LEFT
    else:
        branch = Branch.RIGHT
    return FixedPoint(x, mu, stab, branch, degenerate)


def classify_stability(p: MapParams, x: float) -> FixedPoint:
    """Multiplier and stability class of a (numerically) fixed x.

    Rejects inputs that are not fixed to 1e-8 relative tolerance.  The
    neutral band is |1 - |mu|| <= 1e-9; neutral orbits of maps with
    negative Schwarzian derivative are attracting, which downstream
    attractor logic relies on.
    """
    if abs(eval_map(p, x) - x) > 1e-8 * max(1.0, abs(x)):
        raise DomainError(f"x={x!r} is not a fixed point at r={p.r}, k={p.k}")
    return _make_fixed_point(p, x)


def right_branch_fixed_point(p: MapParams) -> float:
    """The unique fixed point on the decreasing branch x > 2.

    Exists iff f(2) > 2 (g is strictly decreasing there).  Refined by
    bracketed solve and one Newton polish.
    """
    f2 = eval_map(p, CRITICAL_POINT)
    if f2 <= CRITICAL_POINT:
        raise BracketError(
            f"no fixed point above the critical point: f(2)={f2:.6g} <= 2"
        )
    # g(2) = f2 - 2 > 0 and g(f2 + 1) <= f2 - (f2 + 1) < 0.
    x = brentq(lambda t: _g(p, t), CRITICAL_POINT, f2 + 1.0, xtol=1e-13)
    gp = deriv_x(p, x) - 1.0
    if gp != 0.0:
        x -= _g(p, x) / gp
    return x


def find_fixed_points(p: MapParams) -> FixedPointConfiguration:
    """All roots of f(x) - x on [0, inf), sorted ascending.

    Simple roots come from a sign-change scan (dense grid on [0, 2], single
    bracketed solve on the decreasing branch).  Tangencies, where g touches
    zero without crossing, are found at interior extrema of g and reported
    once with the degenerate flag; two refined roots closer than 1e-8 are
    merged the same way.
    """
    if p.r > 700.0:
        raise NumericRangeError("r too large for fixed-point scan")
    r, k = p.r, p.k
    xs = np.linspace(0.0, 2.0, _GRID_N)
    ex = np.exp(r - xs)
    gs = xs * xs * ex + k - xs

    roots: list[float] = []
    degenerate: list[float] = []

    for x in xs[gs == 0.0]:
        roots.append(float(x))
    change = np.nonzero(gs[:-1] * gs[1:] < 0.0)[0]
    for i in change:
        roots.append(brentq(lambda t: _g(p, t), xs[i], xs[i + 1], xtol=1e-15))

    # Tangency hunt: extrema of g are roots of f'(x) - 1.
    gps = xs * (2.0 - xs) * ex - 1.0
    flip = np.nonzero(gps[:-1] * gps[1:] < 0.0)[0]
    for i in flip:
        xstar = brentq(
            lambda t: deriv_x(p, t) - 1.0, xs[i], xs[i + 1], xtol=1e-15
        )
        if abs(_g(p, xstar)) <= _ROOT_RESIDUAL:
            if all(abs(xstar - x) > _MERGE_TOL for x in roots):
                degenerate.append(xstar)

    f2 = map_step(r, k, CRITICAL_POINT)
    if f2 > CRITICAL_POINT:
        roots.append(right_branch_fixed_point(p))
    elif f2 == CRITICAL_POINT and all(
        abs(CRITICAL_POINT - x) > _MERGE_TOL for x in roots
    ):
        roots.append(CRITICAL_POINT)

    # Merge near-coincident simple roots into a single degenerate point.
    roots.sort()
    merged: list[tuple[float, bool]] = []
    for x in roots:
        if merged and abs(x - merged[-1][0]) <= _MERGE_TOL:
            merged[-1] = (0.5 * (x + merged[-1][0]), True)
        else:
            merged.append((x, False))
    for x in degenerate:
        merged.append((x, True))
    merged.sort(key=lambda t: t[0])

    # A root with multiplier within 1e-6 of +1 is a tangency in progress.
    points = tuple(
        _make_fixed_point(p, x, deg or abs(deriv_x(p, x) - 1.0) <= 1e-6)
        for x, deg in merged
    )
    return FixedPointConfiguration(points)


def core_condition(p: MapParams) -> bool:
    """True iff f(f(c)) < c < f(c) with c = 2."""
    f2 = eval_map(p, CRITICAL_POINT)
    return map_step(p.r, p.k, f2) < CRITICAL_POINT < f2


def right_preimage(p: MapParams, target: float) -> float:
    """The preimage of `target` on the decreasing branch, y > 2 with f(y) = target.

    Requires k < target <= f(2); f decreases from f(2) to k on [2, inf) so
    the solution is unique.  target == f(2) gives y = 2.
    """
    f2 = eval_map(p, CRITICAL_POINT)
    if target > f2:
        raise BracketError(f"target {target!r} exceeds the maximum f(2)={f2!r}")
    if target <= p.k:
        raise BracketError(f"target {target!r} not above the floor k={p.k!r}")
    if target == f2:
        return CRITICAL_POINT
    hi = 4.0
    while eval_map(p, hi) >= target:
        hi *= 2.0
    y = brentq(lambda t: eval_map(p, t) - target, CRITICAL_POINT, hi, xtol=1e-13)
    gp = deriv_x(p, y)
    if gp != 0.0:
        y -= (eval_map(p, y) - target) / gp
    return y


def _count_inside(cfg: FixedPointConfiguration, lo: float, hi: float) -> int:
    return sum(1 for q in cfg.points if lo - 1e-9 <= q.x <= hi + 1e-9)


def dynamical_core(p: MapParams) -> DynamicalCore:
    """Invariant interval absorbing the nontrivial dynamics.

    Case analysis:

    * k >= 2: the single fixed point sits on the decreasing branch and
      [f^2(c), f(c)] absorbs everything after one iterate (no scan needed).
    * one fixed point, on the increasing branch: it attracts globally; the
      absorbing interval [k, f(c)] is reported.
    * one fixed point above c: [f^2(c), f(c)].
    * three fixed points x0 < x1 < c < x2 (k > 0): if f^2(c) >= x1 the core
      is [f^2(c), f(c)]; otherwise the critical orbit falls below x1 and the
      core is [x0, y0] with y0 the right preimage of x0.
    * k = 0 analog: x0 = 0 has no finite right preimage, so when f^2(c) < x1
      the middle fixed point sits inside [0, f(c)] and that hull is reported.
    """
    c = CRITICAL_POINT
    f2 = eval_map(p, c)
    f2c = map_step(p.r, p.k, f2)
    if f2c < 0.0:
        raise NumericRangeError("f^2(c) < 0 cannot happen; numeric corruption")

    if p.k >= 2.0:
        return DynamicalCore(f2c, f2, CoreCase.DECREASING_BRANCH_ONLY, True)

    cfg = find_fixed_points(p)
    xs = cfg.xs

    if p.k == 0.0:
        # x = 0 is always fixed and superattracting.
        if cfg.count <= 2 or xs[-1] <= c:
            return DynamicalCore(
                0.0, f2, CoreCase.TRIVIAL_GLOBAL_ATTRACTOR, cfg.count == 1
            )
        x1 = xs[1]
        if f2c >= x1:
            return DynamicalCore(
                f2c, f2, CoreCase.CORE_F2C_FC, _count_inside(cfg, f2c, f2) == 1
            )
        return DynamicalCore(
            0.0, f2, CoreCase.LEFT_FIXED_POINT_INSIDE, False
        )

    if cfg.count == 1:
        x0 = xs[0]
        if x0 <= c:
            return DynamicalCore(p.k, f2, CoreCase.TRIVIAL_GLOBAL_ATTRACTOR, True)
        return DynamicalCore(
            f2c, f2, CoreCase.CORE_F2C_FC, _count_inside(cfg, f2c, f2) == 1
        )

    # Two fixed points only at a fold tangency; treat the tangent pair as
    # two coincident points and reuse the three-point logic.
    if cfg.count == 2:
        if cfg.points[0].degenerate:
            x0, x1, x2 = xs[0], xs[0], xs[1]
        else:
            x0, x1, x2 = xs[0], xs[1], xs[1]
    else:
        x0, x1, x2 = xs[0], xs[1], xs[2]

    if x2 <= c:
        return DynamicalCore(p.k, f2, CoreCase.TRIVIAL_GLOBAL_ATTRACTOR, False)
    if f2c >= x1:
        return DynamicalCore(
            f2c, f2, CoreCase.CORE_F2C_FC, _count_inside(cfg, f2c, f2) == 1
        )
    y0 = right_preimage(p, x0)
    return DynamicalCore(x0, y0, CoreCase.CORE_X0_Y0, False)
