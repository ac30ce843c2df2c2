"""Evaluation of the 1D Chialvo map f_{r,k}(x) = x^2 exp(r - x) + k.

All functions are pure scalar maps of their arguments.  Derivatives use the
algebraically simplified closed forms (not numerical differentiation), with
exp(r - x) computed once per call so the formulas stay bit-consistent with
each other.  Finite-difference checks live in the test suite only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "CRITICAL_POINT",
    "BracketError",
    "DomainError",
    "MapParams",
    "NumericRangeError",
    "deriv_k",
    "deriv_r",
    "deriv_x",
    "deriv_xk",
    "deriv_xr",
    "deriv2_x",
    "deriv3_x",
    "eval_map",
    "map_step",
    "schwarzian",
]

#: Maximum of f on (0, inf); f'(c) = 0 and f''(c) < 0 for every parameter pair.
CRITICAL_POINT = 2.0

# exp overflows IEEE doubles near 709.78; refuse a little earlier.
_EXP_MAX = 700.0


class NumericRangeError(ArithmeticError):
    """An evaluation left the range of double precision (overflow)."""


class DomainError(ValueError):
    """A parameter or argument lies outside an operation's domain."""


class BracketError(RuntimeError):
    """A root bracket could not be established, or refinement failed."""


@dataclass(frozen=True)
class MapParams:
    """Parameter pair of the 1D map: recovery surrogate r, perturbation k >= 0."""

    r: float
    k: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.r):
            raise DomainError(f"r must be finite, got {self.r!r}")
        if not (self.k >= 0.0):
            raise DomainError(f"k must be >= 0, got {self.k!r}")


def map_step(r: float, k: float, x: float) -> float:
    """One application of the map, without parameter packaging.

    Every iteration loop in the package (1D orbits and the 2D model's
    voltage update) goes through this function so identical inputs give
    bitwise identical outputs everywhere.  Overflow raises instead of
    saturating.
    """
    t = r - x
    if t > _EXP_MAX:
        raise NumericRangeError(f"exp({t:.6g}) overflows double precision")
    v = x * x * math.exp(t) + k
    if not math.isfinite(v):
        raise NumericRangeError(f"map value not finite at x={x!r}, r={r!r}")
    return v


def eval_map(p: MapParams, x: float) -> float:
    """f_{r,k}(x) = x^2 exp(r - x) + k."""
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    return map_step(p.r, p.k, x)


def _exp_rx(p: MapParams, x: float) -> float:
    t = p.r - x
    if t > _EXP_MAX:
        raise NumericRangeError(f"exp({t:.6g}) overflows double precision")
    return math.exp(t)


def deriv_x(p: MapParams, x: float) -> float:
    """f' = x (2 - x) exp(r - x)."""
    return x * (2.0 - x) * _exp_rx(p, x)


def deriv2_x(p: MapParams, x: float) -> float:
    """f'' = (x^2 - 4x + 2) exp(r - x)."""
    return (x * x - 4.0 * x + 2.0) * _exp_rx(p, x)


def deriv3_x(p: MapParams, x: float) -> float:
    """f''' = (-x^2 + 6x - 6) exp(r - x)."""
    return (-x * x + 6.0 * x - 6.0) * _exp_rx(p, x)


def deriv_r(p: MapParams, x: float) -> float:
    """df/dr = x^2 exp(r - x)."""
    return x * x * _exp_rx(p, x)


def deriv_k(p: MapParams, x: float) -> float:
    """df/dk = 1."""
    return 1.0


def deriv_xr(p: MapParams, x: float) -> float:
    """d2f/(dx dr) = x (2 - x) exp(r - x), identical to f'."""
    return x * (2.0 - x) * _exp_rx(p, x)


def deriv_xk(p: MapParams, x: float) -> float:
    """d2f/(dx dk) = 0; a flip bifurcation in k is therefore impossible."""
    return 0.0


def schwarzian(p: MapParams, x: float) -> float:
    """Schwarzian derivative Sf(x), closed form.

    Sf(x) = -(x^4 - 8x^3 + 24x^2 - 24x + 12) / (2 (2x - x^2)^2).

    The value is strictly negative and does not depend on r or k.  At
    x in {0, 2} the first derivative vanishes and -inf is returned.
    """
    u = x * (2.0 - x)
    den = u * u
    if den == 0.0:
        return -math.inf
    num = (((x - 8.0) * x + 24.0) * x - 24.0) * x + 12.0
    return -0.5 * num / den
