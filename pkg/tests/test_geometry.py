from fractions import Fraction as Q

import pytest
from hypothesis import assume, given, settings, strategies as st

from fibernielsen import geometry
from fibernielsen.arith import divisors
from fibernielsen.geometry import (
    RationalTorusPoint as P,
    component_index,
    counted_components,
    fix_components,
    minimal_component_count,
    minimal_period,
    orbit_components,
    sample_component_point,
    step,
)
from fibernielsen.reidemeister import FiberTorusMap, count_irreducible_classes, level, nielsen_number

F21 = FiberTorusMap(2, 1)
F11 = FiberTorusMap(1, 1)
maps = st.builds(FiberTorusMap, st.integers(-5, 5), st.integers(-10, 10))
points = st.builds(P, st.fractions(0, 1, max_denominator=60), st.fractions(0, 1, max_denominator=60))


def periods_by_stepping(fmap, p, bound):
    q = p
    for k in range(1, bound + 1):
        q = step(fmap, q)
        if q == p:
            return k
    return None


def test_point_normalization():
    p = P(Q(5, 3), Q(-1, 4))
    assert (p.x, p.y) == (Q(2, 3), Q(3, 4))


def test_step_examples():
    assert step(F11, P(0, Q(1, 2))) == P(Q(1, 2), Q(1, 2))
    assert step(F21, P(Q(1, 3), 0)) == P(Q(2, 3), 0)
    p = P(Q(3, 7), Q(2, 5))
    assert step(FiberTorusMap(1, 0), p) == p


def test_minimal_period_examples():
    assert minimal_period(FiberTorusMap(1, 0), P(Q(1, 9), Q(4, 5)), 1) == 1
    assert minimal_period(F11, P(0, Q(1, 2)), 5) == 2
    assert minimal_period(F21, P(Q(1, 3), 0), 5) == 2
    assert minimal_period(F21, P(Q(1, 5), 0), 3) is None


@settings(max_examples=200)
@given(maps, points, st.integers(1, 30))
def test_minimal_period_matches_fraction_stepping(fmap, p, bound):
    assert minimal_period(fmap, p, bound) == periods_by_stepping(fmap, p, bound)


def test_fix_components_examples():
    assert fix_components(F11, 2).component_count == 2
    assert fix_components(FiberTorusMap(1, 3), 2).component_count == 6
    whole = fix_components(FiberTorusMap(1, 0), 1)
    assert whole.whole_torus and whole.component_count == 1
    # y = 0 and y = 1/2 are the two circles of Fix(f_{1,1}^2)
    assert component_index(F11, 2, P(Q(1, 7), 0)) == 0
    assert component_index(F11, 2, P(Q(3, 7), Q(1, 2))) == 1


def test_component_index_rejects_non_fixed_points():
    with pytest.raises(ValueError):
        component_index(F11, 2, P(0, Q(1, 3)))


@settings(max_examples=100)
@given(maps, st.integers(1, 40))
def test_component_count_is_nielsen_number(fmap, n):
    assume(level(fmap, n).d > 0)
    assert fix_components(fmap, n).component_count == nielsen_number(fmap, n)


@pytest.mark.parametrize("fmap, n, expected", [(F11, 2, 1), (F21, 2, 2), (F21, 6, 54)])
def test_minimal_component_count_examples(fmap, n, expected):
    assert minimal_component_count(fmap, n) == expected
    assert minimal_component_count(fmap, n, cap=1) == expected


def test_minimal_component_count_degenerate():
    assert minimal_component_count(FiberTorusMap(1, 0), 1) == 1
    assert minimal_component_count(FiberTorusMap(1, 0), 4) == 0
    assert minimal_component_count(FiberTorusMap(-1, 3), 2) == 0


def test_sample_component_point_examples():
    assert sample_component_point(F11, 2, 1) == P(0, Q(1, 2))
    assert sample_component_point(F21, 2, 0) == P(0, 0)
    p = sample_component_point(F21, 2, 1)
    assert p == P(Q(1, 3), 0)
    assert minimal_period(F21, p, 2) == 2


@settings(max_examples=60, deadline=None)
@given(maps, st.integers(1, 24))
def test_geometry_matches_algebra(fmap, n):
    assume(all(0 < level(fmap, k).d <= 3000 for k in divisors(n)))
    d = level(fmap, n).d
    assert minimal_component_count(fmap, n) == count_irreducible_classes(fmap, n)
    assert minimal_component_count(fmap, n, cap=1) == count_irreducible_classes(fmap, n)
    counted = set(counted_components(fmap, n))
    assert len(counted) == minimal_component_count(fmap, n)
    for t in range(d):
        p = sample_component_point(fmap, n, t)
        assert component_index(fmap, n, p) == t
        per = minimal_period(fmap, p, n)
        assert n % per == 0
        assert (per == n) == (t in counted)
    # circles of Fix(f^n) split by the minimal period of their points
    assert sum(minimal_component_count(fmap, k) for k in divisors(n)) == d


def test_orbit_components_record_shared_circles():
    # for r = 1 a whole orbit of f sits on one circle of Fix(f^n)
    p = sample_component_point(F11, 3, 1)
    comps = orbit_components(F11, 3, p)
    assert len(set(comps)) == 1
    assert minimal_period(F11, p, 3) == 3
    # for f_{2,1} the orbit of a period-3 point visits three circles
    p = sample_component_point(F21, 3, 1)
    assert len(set(orbit_components(F21, 3, p))) == 3


def test_lower_period_generator_point_is_fixed():
    g = geometry.lower_period_generator(F21, 6, 3)
    assert g % 9 == 0
