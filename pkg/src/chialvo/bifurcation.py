"""Flip and fold bifurcations of fixed points, in r and in k.

Closed forms first: a flip requires multiplier -1 and a fold multiplier +1,
and combining either with the fixed-point equation reduces to a quadratic in
the bifurcating x.  The numerical detector cross-validates the closed forms
by bisecting transversal residuals.

Normal-form condition values are reported as raw reals (0 signals a
violation):

* fold: A1 = f''(x0), A2 = df/d(param);
* flip: B1 = (f'')^2/2 + f'''/3, B2 = d2f/(dx d param).

B1 equals -Sf(x0)/3 at a flip point, so negative Schwarzian derivative makes
every flip supercritical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy.optimize import brentq

from .core import (
    BracketError,
    DomainError,
    MapParams,
    deriv2_x,
    deriv3_x,
    deriv_k,
    deriv_r,
    deriv_x,
    deriv_xk,
    deriv_xr,
    eval_map,
)
from .fixed_points import right_branch_fixed_point

__all__ = [
    "BifurcationKind",
    "BifurcationPoint",
    "Criticality",
    "K_FOLD_LIMIT",
    "ParamAxis",
    "R_FOLD_IN_K_MIN",
    "detect_bifurcation_numerically",
    "flip_point",
    "fold_in_k",
    "fold_points",
]

#: Folds in r exist for 0 <= k < 3 - 2 sqrt(2); A1 degenerates at the limit.
K_FOLD_LIMIT = 3.0 - 2.0 * math.sqrt(2.0)

#: Below this r the multiplier equation (2x - x^2) e^(r-x) = 1 has no root
#: in (0, 2 - sqrt(2)) and no fold in k exists.
R_FOLD_IN_K_MIN = 2.0 - math.sqrt(2.0) - math.log(2.0 * math.sqrt(2.0) - 2.0)

_VERTEX = 2.0 - math.sqrt(2.0)  # interior maximum of f' on (0, 2)


class BifurcationKind(Enum):
    FLIP = "flip"
    FOLD = "fold"


class ParamAxis(Enum):
    R = "r"
    K = "k"


class Criticality(Enum):
    SUPERCRITICAL = "supercritical"
    SUBCRITICAL = "subcritical"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class BifurcationPoint:
    kind: BifurcationKind
    wrt: ParamAxis
    x0: float
    param0: float
    condition_a1: float
    condition_a2: float
    condition_b1: float
    condition_b2: float
    criticality_value: float | None
    criticality: Criticality


def _conditions(p: MapParams, x0: float, wrt: ParamAxis) -> tuple[float, float, float, float]:
    f2 = deriv2_x(p, x0)
    f3 = deriv3_x(p, x0)
    b1 = 0.5 * f2 * f2 + f3 / 3.0
    if wrt is ParamAxis.R:
        a2 = deriv_r(p, x0)
        b2 = deriv_xr(p, x0)
    else:
        a2 = deriv_k(p, x0)
        b2 = deriv_xk(p, x0)
    return f2, a2, b1, b2


def flip_point(k: float) -> BifurcationPoint:
    """The flip bifurcation (multiplier -1) of the map with r as parameter.

    x0 = (k + 3 + sqrt(k^2 - 2k + 9)) / 2 and r0 = x0 - ln(x0 (x0 - 2)).
    Total for k >= 0; the bifurcation is always supercritical.
    """
    if not (k >= 0.0):
        raise DomainError(f"k must be >= 0, got {k!r}")
    x0 = (k + 3.0 + math.sqrt(k * k - 2.0 * k + 9.0)) / 2.0
    r0 = x0 - math.log(x0 * (x0 - 2.0))
    p = MapParams(r0, k)
    a1, a2, b1, b2 = _conditions(p, x0, ParamAxis.R)
    crit = Criticality.SUPERCRITICAL if b1 > 0.0 else Criticality.SUBCRITICAL
    return BifurcationPoint(
        BifurcationKind.FLIP, ParamAxis.R, x0, r0, a1, a2, b1, b2, b1, crit
    )


def fold_points(k: float) -> list[BifurcationPoint]:
    """Fold bifurcations (multiplier +1) in r, for 0 <= k < 3 - 2 sqrt(2).

    k = 0 gives the single point (x0, r0) = (1, 1); for positive k the
    quadratic x^2 - (k+1) x + 2k = 0 has two roots in (k, 2), each with its
    own bifurcation value r0 = x0 - ln((2 - x0) x0).
    """
    if not (k >= 0.0):
        raise DomainError(f"k must be >= 0, got {k!r}")
    if k >= K_FOLD_LIMIT:
        raise DomainError(
            f"fold in r requires k < 3 - 2*sqrt(2) ~ {K_FOLD_LIMIT:.6f}; "
            f"got k={k!r} (degenerate at equality)"
        )
    if k == 0.0:
        xs = [1.0]
    else:
        disc = math.sqrt(k * k - 6.0 * k + 1.0)
        xs = [(k + 1.0 - disc) / 2.0, (k + 1.0 + disc) / 2.0]
    out = []
    for x0 in xs:
        r0 = x0 - math.log((2.0 - x0) * x0)
        p = MapParams(r0, k)
        a1, a2, b1, b2 = _conditions(p, x0, ParamAxis.R)
        out.append(
            BifurcationPoint(
                BifurcationKind.FOLD, ParamAxis.R, x0, r0, a1, a2, b1, b2,
                None, Criticality.NOT_APPLICABLE,
            )
        )
    return out


def fold_in_k(r: float) -> BifurcationPoint:
    """Fold bifurcation with k as the parameter, at fixed r.

    Solves (2x - x^2) e^(r - x) = 1 for the unique x(r) in (0, 2 - sqrt(2)),
    then k* = x - x/(2 - x).  Exists only for r above R_FOLD_IN_K_MIN.
    """
    if not math.isfinite(r):
        raise DomainError(f"r must be finite, got {r!r}")
    if r <= R_FOLD_IN_K_MIN:
        raise DomainError(
            f"fold in k requires r > {R_FOLD_IN_K_MIN:.6f}, got {r!r}"
        )

    def resid(x: float) -> float:
        return (2.0 * x - x * x) * math.exp(r - x) - 1.0

    lo, hi = 1e-12, _VERTEX - 1e-12
    if resid(hi) <= 0.0:
        # r barely above the threshold: the root sits within 1e-12 of the
        # endpoint, where A1 is already degenerate for practical purposes.
        raise DomainError(f"no interior multiplier-1 root at r={r!r}")
    x0 = brentq(resid, lo, hi, xtol=1e-15)
    k_star = x0 - x0 / (2.0 - x0)
    p = MapParams(r, k_star)
    a1, a2, b1, b2 = _conditions(p, x0, ParamAxis.K)
    return BifurcationPoint(
        BifurcationKind.FOLD, ParamAxis.K, x0, k_star, a1, a2, b1, b2,
        None, Criticality.NOT_APPLICABLE,
    )


def _fold_extremum(p: MapParams, side: str) -> float:
    """Root of f'(x) = 1 left ('min') or right ('max') of the f' maximum."""
    top = deriv_x(p, _VERTEX) - 1.0
    if top <= 0.0:
        raise BracketError(
            f"multiplier never reaches 1 at r={p.r!r}, k={p.k!r}"
        )
    if side == "min":
        lo = 1e-9
        while deriv_x(p, lo) - 1.0 > 0.0:
            lo *= 1e-3
        return brentq(lambda t: deriv_x(p, t) - 1.0, lo, _VERTEX, xtol=1e-15)
    hi = 2.0 - 1e-9
    while deriv_x(p, hi) - 1.0 > 0.0:
        hi = 2.0 - (2.0 - hi) * 1e-3
    return brentq(lambda t: deriv_x(p, t) - 1.0, _VERTEX, hi, xtol=1e-15)


def detect_bifurcation_numerically(
    k: float, r_bracket: tuple[float, float], kind: BifurcationKind
) -> BifurcationPoint:
    """Locate a bifurcation in r by bisecting a transversal residual.

    flip: residual f'(x_f(r)) + 1 along the continued fixed point on the
    decreasing branch (re-solved at every step).

    fold: residual g(x*(r)) where g = f - x and x* is the interior extremum
    of g (a root of f' = 1) adjacent to the colliding pair; the extremal
    value crosses zero transversally at the tangency, which avoids following
    a branch through its own turning point.
    """
    lo, hi = float(r_bracket[0]), float(r_bracket[1])
    if not lo < hi:
        raise DomainError(f"empty bracket {r_bracket!r}")

    if kind is BifurcationKind.FLIP:

        def resid(r: float) -> float:
            p = MapParams(r, k)
            return deriv_x(p, right_branch_fixed_point(p)) + 1.0

        if resid(lo) * resid(hi) > 0.0:
            raise BracketError(f"flip residual does not change sign on {r_bracket!r}")
        r0 = brentq(resid, lo, hi, xtol=1e-13)
        p0 = MapParams(r0, k)
        x0 = right_branch_fixed_point(p0)
        a1, a2, b1, b2 = _conditions(p0, x0, ParamAxis.R)
        crit = Criticality.SUPERCRITICAL if b1 > 0.0 else Criticality.SUBCRITICAL
        return BifurcationPoint(
            BifurcationKind.FLIP, ParamAxis.R, x0, r0, a1, a2, b1, b2, b1, crit
        )

    def tangency_gap(r: float, side: str) -> float:
        p = MapParams(r, k)
        xstar = _fold_extremum(p, side)
        return eval_map(p, xstar) - xstar

    candidates = []
    for side in ("min", "max"):
        g_lo = tangency_gap(lo, side)
        g_hi = tangency_gap(hi, side)
        if g_lo * g_hi < 0.0:
            candidates.append(side)
    if not candidates:
        raise BracketError(f"fold residual does not change sign on {r_bracket!r}")
    if len(candidates) > 1:
        raise BracketError(
            f"both fold branches change sign on {r_bracket!r}; narrow the bracket"
        )
    side = candidates[0]
    r0 = brentq(lambda r: tangency_gap(r, side), lo, hi, xtol=1e-13)
    p0 = MapParams(r0, k)
    x0 = _fold_extremum(p0, side)
    a1, a2, b1, b2 = _conditions(p0, x0, ParamAxis.R)
    return BifurcationPoint(
        BifurcationKind.FOLD, ParamAxis.R, x0, r0, a1, a2, b1, b2,
        None, Criticality.NOT_APPLICABLE,
    )
