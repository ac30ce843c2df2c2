"""Topological chaos: the critical-orbit ordering test and (r, k) plane scans.

If f^2(c) < f^3(c) < c < f(c) the map is chaotic in the sense of Li-Yorke,
Block-Coppel and Devaney.  The condition needs only the first three images
of c, so whole parameter grids evaluate vectorized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CRITICAL_POINT,
    DomainError,
    MapParams,
    NumericRangeError,
    eval_map,
    map_step,
)

__all__ = [
    "ChaosScanCell",
    "chaos_condition",
    "chaos_scan",
    "f3_closed_form_k0",
    "h_and_g",
]


@dataclass(frozen=True)
class ChaosScanCell:
    r: float
    k: float
    satisfied: bool
    margin_fc: float      # f(c) - c
    margin_f3c: float     # c - f^3(c)
    margin_order: float   # f^3(c) - f^2(c)
    margin_min: float


def _cell(r: float, k: float, f1: float, f2: float, f3: float) -> ChaosScanCell:
    c = CRITICAL_POINT
    m1 = f1 - c
    m2 = c - f3
    m3 = f3 - f2
    ms = min(m1, m2, m3)
    ok = m1 > 0.0 and m2 > 0.0 and m3 > 0.0
    return ChaosScanCell(r, k, ok, m1, m2, m3, ms)


def chaos_condition(p: MapParams) -> ChaosScanCell:
    """Evaluate the strict chain f^2(c) < f^3(c) < c < f(c) with raw margins.

    Strict floating comparisons, no safety band; the margins are exported so
    a consumer can apply its own.
    """
    f1 = eval_map(p, CRITICAL_POINT)
    f2 = eval_map(p, f1)
    f3 = eval_map(p, f2)
    return _cell(p.r, p.k, f1, f2, f3)


def f3_closed_form_k0(r: float) -> float:
    """f^3(c) for k = 0 in closed form:

    256 exp(7r - 8 - 8 e^(r-2) - 16 exp(3r - 4 - 4 e^(r-2))).

    Underflow of the outer exponential is returned as 0 (the true limit).
    """
    if not math.isfinite(r):
        raise DomainError(f"r must be finite, got {r!r}")
    if r - 2.0 > 700.0:
        return 0.0
    e1 = math.exp(r - 2.0)
    a2 = 3.0 * r - 4.0 - 4.0 * e1
    if a2 > 700.0:
        return 0.0
    arg = 7.0 * r - 8.0 - 8.0 * e1 - 16.0 * math.exp(a2)
    if arg < -745.0:
        return 0.0
    return 256.0 * math.exp(arg)


def h_and_g(r: float) -> tuple[float, float]:
    """(h, g) = (f^3(c) - 2, f^2(c) - f^3(c)) for k = 0, from closed forms.

    Both are negative throughout the proven chaotic strip r in [2.6, 2.9].
    """
    if not math.isfinite(r):
        raise DomainError(f"r must be finite, got {r!r}")
    f3 = f3_closed_form_k0(r)
    e1 = math.exp(r - 2.0)
    f2 = 16.0 * math.exp(3.0 * r - 4.0 - 4.0 * e1)
    return f3 - 2.0, f2 - f3


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step!r}")
    if hi < lo:
        raise DomainError(f"empty range ({lo!r}, {hi!r})")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def chaos_scan(
    r_range: tuple[float, float],
    r_step: float,
    k_range: tuple[float, float],
    k_step: float,
) -> list[ChaosScanCell]:
    """Evaluate the chaos condition on the full grid, every cell emitted.

    Runs through the same scalar evaluation path as chaos_condition, so grid
    cells agree bit-for-bit with per-point calls.  Cells are independent (a
    consumer may shard the grid freely); output order is fixed row-major
    with k outer and r inner so the satisfied set and its complement are
    reproducible.  Cells whose orbit overflows are emitted with NaN margins.
    """
    rs = _axis(float(r_range[0]), float(r_range[1]), float(r_step))
    ks = _axis(float(k_range[0]), float(k_range[1]), float(k_step))
    c = CRITICAL_POINT
    cells: list[ChaosScanCell] = []
    for k in ks:
        k = float(k)
        for r in rs:
            r = float(r)
            try:
                f1 = map_step(r, k, c)
                f2 = map_step(r, k, f1)
                f3 = map_step(r, k, f2)
            except NumericRangeError:
                cells.append(
                    ChaosScanCell(r, k, False, math.nan, math.nan, math.nan, math.nan)
                )
                continue
            cells.append(_cell(r, k, f1, f2, f3))
    return cells
