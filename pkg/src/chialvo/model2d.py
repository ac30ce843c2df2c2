"""The full 2D Chialvo model and its link to the 1D reduction.

x_{n+1} = x_n^2 exp(y_n - x_n) + k,   y_{n+1} = a y_n - b x_n + c.

The x update reuses the 1D evaluation with r := y_n, so with b = 0 and y
settled at c/(1 - a) the voltage sequence is bitwise identical to iterating
the reduced map at that r.  The slow variable's plateau value is what ties a
2D run to a 1D parameter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import DomainError, MapParams, map_step
from .orbits import Orbit, iterate

__all__ = [
    "FullParams",
    "Trajectory2D",
    "fixed_points_2d",
    "iterate2d",
    "mmo_trace",
    "slow_plateau",
]


@dataclass(frozen=True)
class FullParams:
    """Recovery time-constant a, activation dependence b, offset c, input k."""

    a: float
    b: float
    c: float
    k: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.a < 1.0):
            raise DomainError(f"a must be in (0, 1), got {self.a!r}")
        if not (0.0 <= self.b < 1.0):
            raise DomainError(f"b must be in [0, 1), got {self.b!r}")
        if not (self.c > 0.0):
            raise DomainError(f"c must be > 0, got {self.c!r}")
        if not (self.k >= 0.0):
            raise DomainError(f"k must be >= 0, got {self.k!r}")


@dataclass(frozen=True)
class Trajectory2D:
    states: np.ndarray  # shape (n+1, 2); row i is (x_i, y_i)
    params: FullParams

    def __len__(self) -> int:
        return len(self.states)

    @property
    def x(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.states[:, 1]


def iterate2d(fp: FullParams, x0: float, y0: float, n: int) -> Trajectory2D:
    """n steps of the exact recurrence, initial state included (n+1 rows)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not (math.isfinite(x0) and math.isfinite(y0)):
        raise DomainError("initial state must be finite")
    a, b, c, k = fp.a, fp.b, fp.c, fp.k
    states = np.empty((n + 1, 2), dtype=np.float64)
    x, y = float(x0), float(y0)
    states[0, 0] = x
    states[0, 1] = y
    for i in range(1, n + 1):
        x_next = map_step(y, k, x)
        y = a * y - b * x + c
        x = x_next
        states[i, 0] = x
        states[i, 1] = y
    return Trajectory2D(states, fp)


def fixed_points_2d(fp: FullParams) -> list[tuple[float, float]]:
    """Fixed points (x, y) with y = (c - b x)/(1 - a), found by scanning x >= 0.

    For k = 0 the resting state (0, c/(1 - a)) is always present.
    """
    a, b, c, k = fp.a, fp.b, fp.c, fp.k
    s = 1.0 / (1.0 - a)

    def y_of(x: float) -> float:
        return (c - b * x) * s

    def resid(x: float) -> float:
        return map_step(y_of(x), k, x) - x

    r_max = c * s  # y is largest at x = 0 since b >= 0
    hi = max(10.0, map_step(r_max, k, 2.0) + 1.0)
    xs = np.linspace(0.0, hi, 200_001)
    with np.errstate(under="ignore"):
        vals = xs * xs * np.exp((c - b * xs) * s - xs) + k - xs

    roots: list[float] = [float(x) for x in xs[vals == 0.0]]
    change = np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]
    for i in change:
        roots.append(brentq(resid, xs[i], xs[i + 1], xtol=1e-13))
    roots.sort()
    merged: list[float] = []
    for x in roots:
        if not merged or abs(x - merged[-1]) > 1e-8:
            merged.append(x)
    return [(x, y_of(x)) for x in merged]


def slow_plateau(tr: Trajectory2D, window: int, tol: float) -> float | None:
    """Mean of y over the last `window` states if its spread is <= tol.

    Peak-to-peak spread matches the visual notion of the recovery variable
    having stabilized; returns None when no plateau formed.
    """
    if window < 1 or window > len(tr.states):
        raise DomainError(f"window must be in [1, {len(tr.states)}]")
    ys = tr.states[-window:, 1]
    if float(ys.max() - ys.min()) > tol:
        return None
    return float(ys.mean())


def mmo_trace(p: MapParams, x0: float, n: int) -> Orbit:
    """Voltage trace of the reduced map (mixed-mode regimes live here)."""
    return iterate(p, x0, n, transient=0)
