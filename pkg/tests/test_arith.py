from math import lcm, prod

import pytest
from hypothesis import given, strategies as st

from fibernielsen.arith import (
    FactoringBudgetExceeded,
    cofactor,
    corner_divisors,
    divisors,
    factor_with_budget,
    factorize,
    maximal_proper_divisors,
    multiplicative_order,
    sigma,
    sigma_by_summation,
)

ints = st.integers(min_value=-7, max_value=7)
periods = st.integers(min_value=1, max_value=60)


def brute_divisors(n):
    return [k for k in range(1, n + 1) if n % k == 0]


def brute_order(r, m):
    k, x = 1, r % m
    while x != 1 % m:
        x = x * r % m
        k += 1
    return k


@pytest.mark.parametrize("n", [1, 2, 5, 17])
def test_sigma_of_one_is_n(n):
    assert sigma(n, 1) == n


@pytest.mark.parametrize(
    "n, r, expected",
    [(2, 9, 10), (2, -4, -3), (3, 2, 7), (2, -1, 0)],
)
def test_sigma_examples(n, r, expected):
    assert sigma(n, r) == expected == sigma_by_summation(n, r)


def test_sigma_rejects_zero_length():
    with pytest.raises(ValueError):
        sigma(0, 3)


@given(periods, ints)
def test_sigma_closed_form_matches_summation(n, r):
    assert sigma(n, r) == sigma_by_summation(n, r)


@given(periods, ints.filter(lambda r: r != 1))
def test_sigma_geometric_identity(n, r):
    assert (r - 1) * sigma(n, r) == r**n - 1


def test_sigma_is_exact_for_large_powers():
    assert sigma(100, 2) == 2**100 - 1


def test_cofactor_examples():
    assert cofactor(2, 6, 1) == 63 == 1 + 2 + 4 + 8 + 16 + 32
    assert cofactor(2, 6, 2) == 21 == 1 + 4 + 16
    assert cofactor(2, 6, 3) == 9 == 1 + 8
    assert lcm(21, 9) == 63
    assert cofactor(5, 7, 7) == 1
    assert cofactor(1, 12, 4) == 3


def test_cofactor_rejects_non_divisor():
    with pytest.raises(ValueError):
        cofactor(2, 6, 4)


@given(ints, periods, st.data())
def test_cofactor_identities(r, n, data):
    k = data.draw(st.sampled_from(brute_divisors(n)))
    A = cofactor(r, n, k)
    assert A == sum(r ** (i * k) for i in range(n // k))
    assert A * (r**k - 1) == r**n - 1
    assert A * sigma(k, r) == sigma(n, r)


@given(ints, periods, st.data())
def test_cofactor_telescopes(r, n, data):
    m = data.draw(st.sampled_from(brute_divisors(n)))
    k = data.draw(st.sampled_from(brute_divisors(m)))
    assert cofactor(r, n, m) * cofactor(r, m, k) * sigma(k, r) == sigma(n, r)
    assert cofactor(r, n, m) * cofactor(r, m, k) == cofactor(r, n, k)


@pytest.mark.parametrize(
    "n, factors",
    [(1, ()), (12, ((2, 2), (3, 1))), (360, ((2, 3), (3, 2), (5, 1))), (97, ((97, 1),))],
)
def test_factorize_examples(n, factors):
    assert factorize(n).factors == factors


@given(st.integers(min_value=1, max_value=10**6))
def test_factorize_is_valid(n):
    fac = factorize(n)
    assert prod(p**a for p, a in fac) == n
    primes = fac.primes
    assert list(primes) == sorted(set(primes))
    assert all(len(brute_divisors(p)) == 2 for p in primes if p < 10**4)


@pytest.mark.parametrize("n, expected", [(1, [1]), (6, [1, 2, 3, 6]), (12, [1, 2, 3, 4, 6, 12])])
def test_divisors_examples(n, expected):
    assert list(divisors(n)) == expected


@given(st.integers(min_value=1, max_value=5000))
def test_divisors_match_brute_force(n):
    divs = divisors(n)
    assert list(divs) == brute_divisors(n)
    assert all(k in divs for k in (maximal_proper_divisors(n) if n > 1 else []))


@pytest.mark.parametrize("n, expected", [(6, [2, 3]), (8, [4]), (7, [1]), (360, [72, 120, 180])])
def test_maximal_proper_divisors(n, expected):
    assert maximal_proper_divisors(n) == expected


def test_maximal_proper_divisors_rejects_one():
    with pytest.raises(ValueError):
        maximal_proper_divisors(1)


@given(st.integers(min_value=2, max_value=2000))
def test_corners_cover_the_inclusion_exclusion_pattern(n):
    corners = list(corner_divisors(n))
    assert len(corners) == 2 ** len(factorize(n))
    assert (1, n) in corners
    assert sum(sign for sign, _ in corners) == 0


@pytest.mark.parametrize("n", [1, 2, 3 * 5 * 7, 2**61 - 1, (2**31 - 1) * (2**19 - 1) ** 2, 2**120 - 1])
def test_factor_with_budget(n):
    fac = factor_with_budget(n)
    assert prod(p**k for p, k in fac.items()) == n


def test_factor_with_budget_gives_up():
    p, q = 1000000000000000003, 1000000000000000009
    with pytest.raises(FactoringBudgetExceeded):
        factor_with_budget(p * q, budget=10)


@given(st.integers(min_value=-9, max_value=9), st.integers(min_value=2, max_value=3000))
def test_multiplicative_order_matches_brute_force(r, m):
    from math import gcd

    if gcd(r, m) != 1:
        return
    assert multiplicative_order(r, m, factor_with_budget(m)) == brute_order(r, m)
