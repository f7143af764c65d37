import pytest
from hypothesis import given, settings, strategies as st

import oracles
from fibernielsen.arith import divisors
from fibernielsen.formulas import (
    an_closed_form,
    an_recursive,
    an_table,
    cross_validate,
    nbpn_mobius,
    totient_formula,
)
from fibernielsen.reidemeister import FiberTorusMap, nielsen_number

maps = st.builds(FiberTorusMap, st.integers(-5, 5), st.integers(-10, 10))


def mobius(n):
    # brute force: 0 if a square divides n, else (-1)^(number of prime factors)
    sign, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    return -sign if m > 1 else sign


def test_an_recursive_examples():
    f11 = FiberTorusMap(1, 1)
    assert [an_recursive(f11, n) for n in (1, 2, 6)] == [1, 1, 2]
    assert an_recursive(FiberTorusMap(2, 1), 6) == 63 - 6 - 2 - 1 == 54
    for r, s in [(3, -2), (0, 5), (-1, 4)]:
        assert an_recursive(FiberTorusMap(r, s), 1) == nielsen_number(FiberTorusMap(r, s), 1)


def test_an_closed_form_examples():
    f = FiberTorusMap(2, 1)
    assert an_closed_form(f, 7) == nielsen_number(f, 7) - nielsen_number(f, 1)
    assert an_closed_form(FiberTorusMap(1, 2), 4) == 8 - 4 == 4
    assert an_closed_form(f, 6) == 63 - 7 - 3 + 1 == 54


def test_nbpn_mobius_examples():
    assert nbpn_mobius(FiberTorusMap(4, 3), 1) == nielsen_number(FiberTorusMap(4, 3), 1)
    assert nbpn_mobius(FiberTorusMap(1, 3), 6) == 18 - 9 - 6 + 3 == 6
    assert nbpn_mobius(FiberTorusMap(2, 1), 6) == 54


@pytest.mark.parametrize("s, n, expected", [(1, 2, 1), (2, 4, 4), (3, 6, 6), (-3, 1, 3), (1, 360, 96)])
def test_totient_formula(s, n, expected):
    assert totient_formula(FiberTorusMap(1, s), n) == expected


def test_totient_formula_scope():
    with pytest.raises(ValueError):
        totient_formula(FiberTorusMap(2, 1), 3)
    with pytest.raises(ValueError):
        totient_formula(FiberTorusMap(1, 0), 3)


@settings(max_examples=150)
@given(maps, st.integers(1, 360))
def test_three_routes_agree(fmap, n):
    a = an_recursive(fmap, n)
    assert a == an_closed_form(fmap, n) == nbpn_mobius(fmap, n)
    # Moebius inversion computed independently of the package
    assert a == sum(mobius(n // k) * oracles.d_level(fmap.r, fmap.s, k) for k in oracles.divs(n))


@settings(max_examples=100)
@given(maps, st.integers(1, 200))
def test_sum_over_divisors_recovers_nielsen(fmap, n):
    assert sum(an_recursive(fmap, k) for k in divisors(n)) == nielsen_number(fmap, n)


@given(st.integers(-10, 10).filter(bool), st.integers(1, 500))
def test_totient_equals_closed_form_for_shear_maps(s, n):
    fmap = FiberTorusMap(1, s)
    assert an_closed_form(fmap, n) == totient_formula(fmap, n)


def test_an_table():
    table = an_table(FiberTorusMap(1, 1), 6)
    assert [table.values[n] for n in range(1, 7)] == [1, 1, 2, 2, 4, 2]


def test_negative_an_is_reported():
    # d_1 = 1 and d_2 = 0 for r = -1, so the recursion goes negative
    fmap = FiberTorusMap(-1, 1)
    assert an_recursive(fmap, 2) == nielsen_number(fmap, 2) - nielsen_number(fmap, 1) == -1


def test_cross_validate_toral_case():
    rep = cross_validate(FiberTorusMap(2, 1), 6)
    assert rep.n_toral is True
    for name in ("formulas_agree", "an_equals_In", "an_equals_nOn", "theorem_under_hypotheses"):
        assert rep.checks[name].value is True, name
    assert rep.nbpn == 54 and rep.irreducible_orbits == 9


def test_cross_validate_shear_tension():
    rep = cross_validate(FiberTorusMap(1, 1), 2)
    assert rep.checks["formulas_agree"].value is True
    assert rep.checks["an_equals_In"].value is True
    assert rep.checks["totient_equals_an"].value is True
    assert rep.checks["an_equals_nOn"].value is False
    assert rep.checks["an_equals_nOn"].witness == {"an": 1, "nbpn": 2, "On": 1}
    assert rep.n_toral is False
    assert rep.checks["theorem_under_hypotheses"].value is None


def test_cross_validate_degenerate():
    rep = cross_validate(FiberTorusMap(1, 0), 2)
    assert rep.an_recursive == 0
    assert rep.checks["an_equals_In"].value is None
    assert "d_1 = 0" in rep.checks["an_equals_In"].detail


def test_cross_validate_partial_when_orbits_unavailable():
    rep = cross_validate(FiberTorusMap(1, 1000000000000000003 * 1000000000000000009), 1, cap=10, budget=10)
    assert rep.irreducible_orbits is None
    assert rep.checks["an_equals_nOn"].value is None
    assert rep.checks["formulas_agree"].value is True
