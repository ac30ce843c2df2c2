"""Misiurewicz parameters: the critical orbit lands on the unstable fixed point.

For fixed k, define d(r) = f^3(c, r) - x_f(r) where x_f is the fixed point on
the decreasing branch.  A sign change of d brackets a parameter r* at which
the critical point is mapped onto x_f in exactly three steps, making the map
Misiurewicz (no periodic attractors, critical orbit away from c).  At r* the
transversality term

    Gamma = d(zeta(r) - f(c, r))/dr

is evaluated from closed forms, with zeta(r*) = f(c) and zeta1 = f(zeta).
The three-step landing only works for k up to 0.58; larger k is refused.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    CRITICAL_POINT,
    BracketError,
    DomainError,
    MapParams,
    deriv_r,
    deriv_x,
    eval_map,
)
from .fixed_points import right_branch_fixed_point

__all__ = [
    "K_SEARCH_MAX",
    "MisiurewiczResult",
    "bracket_scan_for_misiurewicz",
    "critical_orbit_gap",
    "dz_dr",
    "gamma",
    "gamma_curve",
    "misiurewicz_search",
]

#: Largest k for which the three-step landing f^3(c) = x_f occurs.
K_SEARCH_MAX = 0.58

_GAP_TOL = 1e-10


@dataclass(frozen=True)
class MisiurewiczResult:
    """One certified Misiurewicz parameter and the transversality data."""

    k: float
    r_star: float
    z: float            # unstable fixed point z(r*) = x_f(r*)
    zeta: float         # f(c) at r*
    zeta1: float        # f(zeta) at r*
    dzeta_dr: float
    df_dr_at_c: float
    gamma: float


def _check_k(k: float) -> None:
    if not (0.0 <= k <= K_SEARCH_MAX + 1e-12):
        raise DomainError(
            f"three-step Misiurewicz search supports 0 <= k <= {K_SEARCH_MAX}; "
            f"got k={k!r}"
        )


def critical_orbit_gap(k: float, r: float) -> float:
    """d(r) = f^3(c) - x_f(r); raises BracketError where x_f > 2 does not exist."""
    p = MapParams(r, k)
    xf = right_branch_fixed_point(p)
    x = CRITICAL_POINT
    for _ in range(3):
        x = eval_map(p, x)
    return x - xf


def dz_dr(k: float, r: float, z: float) -> float:
    """Rate of change of a fixed point z with r, by implicit differentiation.

    k = 0: dz/dr = z / (z - 1); k > 0: dz/dr = z^2 / (exp(z - r) + z^2 - 2z).
    Pure formula; z is assumed to be a fixed point of the map at (r, k).
    """
    if k == 0.0:
        if z == 1.0:
            raise DomainError("dz/dr is singular at z = 1 for k = 0")
        return z / (z - 1.0)
    den = math.exp(z - r) + z * z - 2.0 * z
    if den == 0.0:
        raise DomainError("singular denominator in dz/dr")
    return z * z / den


def _dzeta_dr(k: float, r: float, z: float, zeta: float, zeta1: float) -> float:
    if zeta == 2.0 or zeta1 == 2.0:
        raise DomainError("dzeta/dr is singular when zeta or zeta1 equals c = 2")
    dz = dz_dr(k, r, z)
    t1 = dz * math.exp(zeta + zeta1 - 2.0 * r) / (
        zeta * zeta1 * (2.0 - zeta) * (2.0 - zeta1)
    )
    t2 = zeta1 * math.exp(zeta - r) / (zeta * (2.0 - zeta) * (2.0 - zeta1))
    t3 = zeta / (2.0 - zeta)
    return t1 - t2 - t3


def gamma(res: MisiurewiczResult) -> float:
    """Gamma = dzeta/dr - df/dr(c), recomputed from the result's fields."""
    d = _dzeta_dr(res.k, res.r_star, res.z, res.zeta, res.zeta1)
    return d - res.df_dr_at_c


def misiurewicz_search(
    k: float, r_bracket: tuple[float, float]
) -> MisiurewiczResult:
    """Bisect d(r) = f^3(c) - x_f(r) to a sign change and certify the landing.

    The fixed point is re-solved at every bisection step; bisection runs to
    float exhaustion so the landing gap is as small as double precision
    allows (well under the 1e-10 acceptance).  The fixed point must be
    repelling at r*, otherwise the parameter is rejected.
    """
    _check_k(k)
    lo, hi = float(r_bracket[0]), float(r_bracket[1])
    if not lo < hi:
        raise DomainError(f"empty bracket {r_bracket!r}")
    d_lo = critical_orbit_gap(k, lo)
    d_hi = critical_orbit_gap(k, hi)
    if d_lo == 0.0:
        r_star, d_star = lo, d_lo
    elif d_hi == 0.0:
        r_star, d_star = hi, d_hi
    elif d_lo * d_hi > 0.0:
        raise BracketError(
            f"d(r) does not change sign on {r_bracket!r} at k={k!r}"
        )
    else:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            d_mid = critical_orbit_gap(k, mid)
            if d_mid == 0.0:
                lo = hi = mid
                d_lo = d_hi = d_mid
                break
            if (d_mid > 0.0) == (d_lo > 0.0):
                lo, d_lo = mid, d_mid
            else:
                hi, d_hi = mid, d_mid
        r_star, d_star = (lo, d_lo) if abs(d_lo) <= abs(d_hi) else (hi, d_hi)

    if abs(d_star) > _GAP_TOL:
        raise BracketError(
            f"bisection stalled with |d| = {abs(d_star):.3g} > {_GAP_TOL}"
        )

    p = MapParams(r_star, k)
    z = right_branch_fixed_point(p)
    if abs(deriv_x(p, z)) <= 1.0:
        raise BracketError(
            f"fixed point z={z:.6f} is not repelling at r={r_star:.6f}"
        )
    zeta = eval_map(p, CRITICAL_POINT)
    zeta1 = eval_map(p, zeta)
    dzeta = _dzeta_dr(k, r_star, z, zeta, zeta1)
    df_dr_c = deriv_r(p, CRITICAL_POINT)
    return MisiurewiczResult(
        k, r_star, z, zeta, zeta1, dzeta, df_dr_c, dzeta - df_dr_c
    )


def bracket_scan_for_misiurewicz(
    k: float, r_range: tuple[float, float], step: float
) -> list[tuple[float, float]]:
    """All step-width subintervals of r_range where d(r) changes sign.

    Grid points where the fixed point x_f > 2 does not exist are skipped
    (they also break bracket continuity).  An empty list is a valid result.
    """
    _check_k(k)
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step!r}")
    lo, hi = float(r_range[0]), float(r_range[1])
    n = int(math.floor((hi - lo) / step + 1e-9))
    out: list[tuple[float, float]] = []
    prev_r: float | None = None
    prev_d: float | None = None
    for i in range(n + 1):
        r = lo + i * step
        try:
            d = critical_orbit_gap(k, r)
        except BracketError:
            prev_r = prev_d = None
            continue
        if prev_d is not None and (d == 0.0 or prev_d * d < 0.0):
            out.append((prev_r, r))
        prev_r, prev_d = r, d
    return out


def gamma_curve(
    k_range: tuple[float, float], step: float
) -> tuple[list[MisiurewiczResult], list[tuple[float, str]]]:
    """Misiurewicz data on a k-grid, each search seeded from the previous r*.

    Returns (results, failures); a failed k is recorded with the error text
    and the scan continues.  r* drifts upward with k, so the seed bracket is
    widened upward from the last success.
    """
    k_lo, k_hi = float(k_range[0]), float(k_range[1])
    _check_k(k_lo)
    _check_k(k_hi)
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step!r}")
    results: list[MisiurewiczResult] = []
    failures: list[tuple[float, str]] = []
    prev_r: float | None = None
    n = int(math.floor((k_hi - k_lo) / step + 1e-9))
    for i in range(n + 1):
        k = min(k_lo + i * step, k_hi)
        try:
            if prev_r is None:
                brackets = bracket_scan_for_misiurewicz(k, (2.3, 3.2), 0.01)
                if not brackets:
                    raise BracketError(f"no sign change found for k={k!r}")
                res = misiurewicz_search(k, brackets[0])
            else:
                lo = prev_r - 0.01
                hi = prev_r + 0.02
                while critical_orbit_gap(k, hi) > 0.0 and hi < prev_r + 1.0:
                    hi += 0.02
                res = misiurewicz_search(k, (lo, hi))
            results.append(res)
            prev_r = res.r_star
        except (BracketError, DomainError) as exc:
            failures.append((k, str(exc)))
    return results, failures
