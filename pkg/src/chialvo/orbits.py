"""Orbit iteration, symbolic itineraries, attractor detection and statistics.

An S-unimodal map has at most one periodic attractor and it attracts the
critical point, so the critical orbit is the canonical probe: periodic
attractors are detected from it, and Birkhoff statistics (Lyapunov exponent,
occupation histogram over the dynamical core) estimate the metric behavior
when no cycle closes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    CRITICAL_POINT,
    DomainError,
    MapParams,
    deriv_x,
    eval_map,
    map_step,
)
from .fixed_points import DynamicalCore, dynamical_core

__all__ = [
    "AttractorKind",
    "AttractorReport",
    "C_TOL",
    "Orbit",
    "birkhoff_histogram",
    "detect_periodic_attractor",
    "iterate",
    "itinerary",
    "kneading",
    "lyapunov",
    "orbit_order_signature",
]

#: width of the symbol-C band around the critical point; exact hits are
#: measure zero and occur only at engineered parameters.
C_TOL = 1e-12

_CYCLE_TOL = 1e-9
_INTERVAL_LYAP_MIN = 0.01


@dataclass(frozen=True)
class Orbit:
    initial: float
    points: np.ndarray
    params: MapParams

    def __len__(self) -> int:
        return len(self.points)


class AttractorKind(Enum):
    PERIODIC = "periodic"
    INTERVAL_CANDIDATE = "interval_candidate"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class AttractorReport:
    kind: AttractorKind
    period: int | None
    cycle: tuple[float, ...] | None
    lyapunov: float


def iterate(p: MapParams, x0: float, n: int, transient: int = 0) -> Orbit:
    """Drop `transient` iterates from x0, then record the next n points.

    points[0] is the state after the transient (x0 itself if transient=0)
    and points[i+1] = f(points[i]) exactly as computed.
    """
    if n < 0 or transient < 0:
        raise DomainError("n and transient must be nonnegative")
    if not math.isfinite(x0):
        raise DomainError(f"x0 must be finite, got {x0!r}")
    r, k = p.r, p.k
    x = float(x0)
    for _ in range(transient):
        x = map_step(r, k, x)
    pts = np.empty(n, dtype=np.float64)
    for i in range(n):
        pts[i] = x
        x = map_step(r, k, x)
    return Orbit(float(x0), pts, p)


def _symbol(x: float) -> str:
    d = x - CRITICAL_POINT
    if abs(d) <= C_TOL:
        return "C"
    return "0" if d < 0.0 else "1"


def itinerary(p: MapParams, x0: float, n: int) -> str:
    """Symbols of x0, f(x0), ..., f^(n-1)(x0) relative to the critical point."""
    if n < 1:
        raise DomainError("n must be >= 1")
    r, k = p.r, p.k
    x = float(x0)
    out = []
    for _ in range(n):
        out.append(_symbol(x))
        x = map_step(r, k, x)
    return "".join(out)


def kneading(p: MapParams, n: int) -> str:
    """Itinerary of the critical value f(c)."""
    return itinerary(p, eval_map(p, CRITICAL_POINT), n)


def lyapunov(p: MapParams, x0: float, n: int, transient: int = 0) -> float:
    """Birkhoff average of log|f'| over n post-transient iterates.

    Returns -inf if the orbit hits the critical point (or x = 0) to machine
    precision, where the derivative vanishes exactly.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    r, k = p.r, p.k
    x = float(x0)
    for _ in range(transient):
        x = map_step(r, k, x)
    total = 0.0
    for _ in range(n):
        d = deriv_x(p, x)
        if d == 0.0:
            return -math.inf
        total += math.log(abs(d))
        x = map_step(r, k, x)
    return total / n


def _cycle_multiplier(p: MapParams, cycle: list[float]) -> float:
    m = 1.0
    for x in cycle:
        m *= deriv_x(p, x)
    return m


def detect_periodic_attractor(
    p: MapParams,
    max_period: int = 64,
    n_iter: int = 100_000,
    transient: int = 10_000,
) -> AttractorReport:
    """Probe the critical orbit for an attracting cycle of period <= max_period.

    Cycle closure requires the minimal period at tolerance 1e-9 and a cycle
    multiplier |m| <= 1 + 1e-9 (neutral counts as attracting).  When nothing
    closes, the orbit's Lyapunov estimate decides between interval_candidate
    (> 0.01, a heuristic for an interval attractor carrying an absolutely
    continuous measure) and undetermined.  Cantor-set attractors are never
    claimed: they are not numerically distinguishable from long transients.
    """
    if max_period < 1:
        raise DomainError("max_period must be >= 1")
    r, k = p.r, p.k
    x = CRITICAL_POINT
    for _ in range(transient):
        x = map_step(r, k, x)
    window = [x]
    for _ in range(max_period):
        x = map_step(r, k, x)
        window.append(x)
    for period in range(1, max_period + 1):
        if abs(window[period] - window[0]) <= _CYCLE_TOL:
            cycle = window[:period]
            m = _cycle_multiplier(p, cycle)
            if abs(m) <= 1.0 + _CYCLE_TOL:
                if any(deriv_x(p, c) == 0.0 for c in cycle):
                    lam = -math.inf
                else:
                    lam = sum(math.log(abs(deriv_x(p, c))) for c in cycle) / period
                return AttractorReport(
                    AttractorKind.PERIODIC, period, tuple(cycle), lam
                )
    n_rest = max(n_iter - transient - max_period, 1000)
    lam = lyapunov(p, x, n_rest)
    kind = (
        AttractorKind.INTERVAL_CANDIDATE
        if lam > _INTERVAL_LYAP_MIN
        else AttractorKind.UNDETERMINED
    )
    return AttractorReport(kind, None, None, lam)


def birkhoff_histogram(
    p: MapParams, x0: float, n: int, bins: int, transient: int = 1000
) -> tuple[np.ndarray, np.ndarray]:
    """Occupation frequencies of the post-transient orbit over the dynamical core.

    Returns (masses, edges) with masses normalized by the orbit length, so
    the total is 1 when the orbit stays inside the core.
    """
    if bins < 1:
        raise DomainError("bins must be >= 1")
    core: DynamicalCore = dynamical_core(p)
    orb = iterate(p, x0, n, transient)
    counts, edges = np.histogram(orb.points, bins=bins, range=(core.lo, core.hi))
    return counts / float(n), edges


def orbit_order_signature(p: MapParams, depth: int) -> tuple[int, ...]:
    """Ranks (1-based) of f(c), f^2(c), ..., f^depth(c) in increasing order.

    Two maps whose signatures differ at some depth are not combinatorially
    equivalent; a finite depth can only certify non-equivalence, never
    equivalence.  Raises if two orbit points coincide within 1e-9.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    r, k = p.r, p.k
    pts = []
    x = CRITICAL_POINT
    for _ in range(depth):
        x = map_step(r, k, x)
        pts.append(x)
    arr = np.asarray(pts)
    order = np.sort(arr)
    if depth > 1 and np.min(np.diff(order)) <= 1e-9:
        raise DomainError("tied critical-orbit points; signature undefined")
    ranks = np.empty(depth, dtype=int)
    ranks[np.argsort(arr, kind="stable")] = np.arange(1, depth + 1)
    return tuple(int(v) for v in ranks)
