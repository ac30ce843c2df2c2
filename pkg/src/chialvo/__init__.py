"""Numerical analysis toolkit for the 1D and 2D Chialvo neuron maps."""

from .core import (
    CRITICAL_POINT,
    BracketError,
    DomainError,
    MapParams,
    NumericRangeError,
    deriv_k,
    deriv_r,
    deriv_x,
    deriv_xk,
    deriv_xr,
    deriv2_x,
    deriv3_x,
    eval_map,
    map_step,
    schwarzian,
)
from .fixed_points import (
    Branch,
    CoreCase,
    DynamicalCore,
    FixedPoint,
    FixedPointConfiguration,
    Stability,
    classify_stability,
    core_condition,
    dynamical_core,
    find_fixed_points,
    right_branch_fixed_point,
    right_preimage,
)
from .bifurcation import (
    K_FOLD_LIMIT,
    R_FOLD_IN_K_MIN,
    BifurcationKind,
    BifurcationPoint,
    Criticality,
    ParamAxis,
    detect_bifurcation_numerically,
    flip_point,
    fold_in_k,
    fold_points,
)
from .misiurewicz import (
    K_SEARCH_MAX,
    MisiurewiczResult,
    bracket_scan_for_misiurewicz,
    critical_orbit_gap,
    dz_dr,
    gamma,
    gamma_curve,
    misiurewicz_search,
)
from .topochaos import (
    ChaosScanCell,
    chaos_condition,
    chaos_scan,
    f3_closed_form_k0,
    h_and_g,
)
from .orbits import (
    C_TOL,
    AttractorKind,
    AttractorReport,
    Orbit,
    birkhoff_histogram,
    detect_periodic_attractor,
    iterate,
    itinerary,
    kneading,
    lyapunov,
    orbit_order_signature,
)
from .model2d import (
    FullParams,
    Trajectory2D,
    fixed_points_2d,
    iterate2d,
    mmo_trace,
    slow_plateau,
)

__version__ = "0.1.0"
