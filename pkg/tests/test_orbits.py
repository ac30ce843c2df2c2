"""Orbits, itineraries, attractor detection, Lyapunov exponents, histograms."""
import math

import numpy as np
import pytest

from chialvo import (
    AttractorKind,
    C_TOL,
    CoreCase,
    DomainError,
    MapParams,
    birkhoff_histogram,
    detect_periodic_attractor,
    deriv_x,
    dynamical_core,
    eval_map,
    iterate,
    itinerary,
    kneading,
    lyapunov,
    misiurewicz_search,
    orbit_order_signature,
    right_branch_fixed_point,
)


def critical_fixed_params(k: float) -> MapParams:
    """Parameters with f(2) = 2: r = 2 + ln((2 - k)/4)."""
    return MapParams(2.0 + math.log((2.0 - k) / 4.0), k)


class TestIterate:
    def test_recurrence_is_exact(self):
        p = MapParams(2.7, 0.1)
        orb = iterate(p, 0.83, 400)
        assert orb.points[0] == 0.83
        for a, b in zip(orb.points, orb.points[1:]):
            assert eval_map(p, float(a)) == float(b)

    def test_transient_discard(self):
        p = MapParams(2.7, 0.1)
        full = iterate(p, 0.83, 60)
        tail = iterate(p, 0.83, 50, transient=10)
        assert np.array_equal(full.points[10:], tail.points)

    def test_converges_to_stable_fixed_point_before_flip(self):
        r = 3.0 - math.log(3.0) - 0.1
        p = MapParams(r, 0.0)
        orb = iterate(p, 2.0, 8, transient=4000)
        xf = right_branch_fixed_point(p)
        assert np.max(np.abs(orb.points - xf)) <= 1e-7

    def test_period2_after_flip(self):
        orb = iterate(MapParams(2.0, 0.0), 2.0, 9, transient=4000)
        assert abs(orb.points[2] - orb.points[0]) <= 1e-9
        assert abs(orb.points[1] - orb.points[0]) > 0.1

    def test_origin_is_constant(self):
        orb = iterate(MapParams(2.4, 0.0), 0.0, 25)
        assert np.all(orb.points == 0.0)


class TestItineraries:
    def test_symbols_partition(self):
        p = MapParams(2.7, 0.0)
        s = itinerary(p, 0.5, 40)
        orb = iterate(p, 0.5, 40)
        for sym, x in zip(s, orb.points):
            if abs(x - 2.0) <= C_TOL:
                assert sym == "C"
            elif x < 2.0:
                assert sym == "0"
            else:
                assert sym == "1"

    def test_kneading_is_itinerary_of_critical_value(self):
        p = MapParams(2.7, 0.0)
        assert kneading(p, 30) == itinerary(p, eval_map(p, 2.0), 30)
        assert kneading(p, 30)[0] == "1"

    def test_fixed_critical_point_gives_all_C(self):
        for k in (0.0, 0.5):
            assert kneading(critical_fixed_params(k), 24) == "C" * 24

    def test_kneading_witnesses_distinguish_family(self):
        # Two maps in the family with different kneading prefixes make the
        # r-family combinatorially nontrivial.
        a = kneading(critical_fixed_params(0.0), 16)
        b = kneading(MapParams(2.7, 0.0), 16)
        assert a[0] == "C" and b[0] == "1"
        assert a != b

    def test_prefix_stability(self):
        p = MapParams(2.55, 0.07)
        for n in (1, 5, 17):
            assert kneading(p, n + 1)[:n] == kneading(p, n)


class TestAttractorDetection:
    def test_period4_regime(self):
        rep = detect_periodic_attractor(MapParams(2.258, 0.0))
        assert rep.kind is AttractorKind.PERIODIC
        assert rep.period == 4
        p = MapParams(2.258, 0.0)
        for x in rep.cycle:
            y = x
            for _ in range(4):
                y = eval_map(p, y)
            assert abs(y - x) <= 1e-9
        mult = np.prod([deriv_x(p, x) for x in rep.cycle])
        assert abs(mult) <= 1.0 + 1e-9

    def test_resting_regime(self):
        rep = detect_periodic_attractor(MapParams(1.8, 0.0))
        assert rep.kind is AttractorKind.PERIODIC
        assert rep.period == 1
        assert rep.cycle[0] == pytest.approx(2.84, abs=1e-2)
        assert rep.lyapunov < 0.0

    def test_no_periodic_attractor_at_misiurewicz(self):
        rep = detect_periodic_attractor(MapParams(2.436, 0.0))
        assert rep.kind is not AttractorKind.PERIODIC
        assert rep.period is None

    def test_minimal_period_reported(self):
        rep = detect_periodic_attractor(MapParams(2.0, 0.0))
        assert rep.period == 2

    def test_cycle_lyapunov_matches_orbit_average(self):
        p = MapParams(2.258, 0.0)
        rep = detect_periodic_attractor(p)
        lam = lyapunov(p, 2.0, 100_000, transient=10_000)
        assert lam == pytest.approx(rep.lyapunov, rel=1e-3, abs=1e-6)


class TestLyapunov:
    def test_stable_fixed_point_rate(self):
        p = MapParams(1.8, 0.0)
        xf = right_branch_fixed_point(p)
        expected = math.log(abs(deriv_x(p, xf)))
        assert expected < 0.0
        assert lyapunov(p, 1.5, 5000, transient=2000) == pytest.approx(expected, rel=1e-6)

    def test_superattracting_orbit_is_minus_infinity(self):
        assert lyapunov(MapParams(1.5, 0.0), 0.0, 50) == -math.inf

    def test_positive_in_chaotic_strip(self):
        assert lyapunov(MapParams(2.7, 0.0), 1.0, 50_000, transient=1000) > 0.05


class TestHistogram:
    def test_periodic_regime_concentrates(self):
        masses, edges = birkhoff_histogram(MapParams(2.0, 0.0), 2.0, 50_000, 64)
        assert masses.sum() == pytest.approx(1.0, abs=1e-12)
        assert int(np.count_nonzero(masses)) <= 2

    def test_common_asymptotic_distribution(self):
        p = MapParams(2.7, 0.0)
        m1, _ = birkhoff_histogram(p, 1.0, 1_000_000, 100)
        m2, _ = birkhoff_histogram(p, 5.2, 1_000_000, 100)
        assert float(np.abs(m1 - m2).sum()) <= 0.05

    def test_support_inside_core(self):
        p = MapParams(2.7, 0.0)
        masses, edges = birkhoff_histogram(p, 1.0, 100_000, 80)
        core = dynamical_core(p)
        assert masses.sum() == pytest.approx(1.0, abs=1e-12)
        assert edges[0] == core.lo and edges[-1] == core.hi

    def test_core_failure_propagates(self):
        with pytest.raises(Exception):
            birkhoff_histogram(MapParams(900.0, 0.0), 1.0, 100, 10)


class TestOrderSignature:
    def test_distinguishes_period2_from_period3_style_regimes(self):
        s1 = orbit_order_signature(MapParams(2.258, 0.0), 12)
        s2 = orbit_order_signature(MapParams(1.8, 0.0), 12)
        assert sorted(s1) == list(range(1, 13))
        assert sorted(s2) == list(range(1, 13))
        assert s1 != s2

    def test_deterministic(self):
        p = MapParams(2.437, 0.12)
        assert orbit_order_signature(p, 10) == orbit_order_signature(p, 10)

    def test_tie_rejected(self):
        with pytest.raises(DomainError):
            orbit_order_signature(critical_fixed_params(0.0), 6)


class TestSingerUniqueness:
    def test_random_orbits_agree_with_critical_orbit(self):
        # When the critical orbit settles on a cycle, orbits from random
        # points of the core must reach the same cycle (at most one periodic
        # attractor exists and it attracts the critical point).
        rng = np.random.default_rng(42)
        checked = 0
        for _ in range(12):
            r = float(rng.uniform(1.5, 2.35))
            k = float(rng.uniform(0.0, 0.3))
            p = MapParams(r, k)
            core = dynamical_core(p)
            if core.case not in (CoreCase.CORE_F2C_FC, CoreCase.DECREASING_BRANCH_ONLY):
                continue
            rep = detect_periodic_attractor(p)
            if rep.kind is not AttractorKind.PERIODIC:
                continue
            cycle = np.asarray(rep.cycle)
            checked += 1
            for x in core.lo + (core.hi - core.lo) * rng.random(20):
                x = float(x)
                for _ in range(50_000):
                    if np.min(np.abs(cycle - x)) <= 1e-6:
                        break
                    x = eval_map(p, x)
                else:
                    pytest.fail(f"orbit did not reach the cycle at r={r}, k={k}")
        assert checked >= 5
