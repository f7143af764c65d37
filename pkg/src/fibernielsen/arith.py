"""Exact integer and divisor-lattice arithmetic.

Everything here works on Python ints, so values such as ``2**360 - 1`` stay
exact.  Period indices are small and factored by trial division; the large
moduli handled by the orbit-counting fast path go through
:func:`factor_with_budget`, which gives up instead of running forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import lcm

from sympy import isprime, perfect_power
from sympy.ntheory import pollard_rho


class FactoringBudgetExceeded(RuntimeError):
    """Raised when a modulus cannot be factored within the step budget."""


@dataclass(frozen=True)
class PrimeFactorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        value = 1
        last = 1
        for p, alpha in self.factors:
            if p <= last or alpha < 1:
                raise ValueError(f"malformed factorization of {self.n}: {self.factors}")
            last = p
            value *= p**alpha
        if value != self.n:
            raise ValueError(f"factors {self.factors} do not multiply to {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


@dataclass(frozen=True)
class DivisorLattice:
    n: int
    divisors: tuple[int, ...]

    def __iter__(self):
        return iter(self.divisors)

    def __len__(self):
        return len(self.divisors)

    def __contains__(self, k):
        return k in self.divisors

    def proper(self) -> tuple[int, ...]:
        return self.divisors[:-1]


def sigma(n: int, r: int) -> int:
    """Return ``1 + r + ... + r**(n-1)``."""
    if n < 1:
        raise ValueError("sigma needs n >= 1")
    if r == 1:
        return n
    if r == 0:
        return 1
    return (r**n - 1) // (r - 1)


def sigma_by_summation(n: int, r: int) -> int:
    # reference route, kept for tests
    if n < 1:
        raise ValueError("sigma needs n >= 1")
    return sum(r**i for i in range(n))


def cofactor(r: int, n: int, k: int) -> int:
    """The cofactor ``1 + r**k + r**(2k) + ... + r**(n-k)``, i.e. ``sigma(n//k, r**k)``.

    It satisfies ``cofactor * (r**k - 1) == r**n - 1`` and
    ``cofactor * sigma(k, r) == sigma(n, r)``.
    """
    if k < 1 or n < 1 or n % k:
        raise ValueError(f"{k} does not divide {n}")
    return sigma(n // k, r**k)


def _trial_division(n: int) -> list[tuple[int, int]]:
    factors = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            alpha = 0
            while m % p == 0:
                m //= p
                alpha += 1
            factors.append((p, alpha))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return factors


@lru_cache(maxsize=4096)
def factorize(n: int) -> PrimeFactorization:
    """Prime factorization of a period index by trial division."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    return PrimeFactorization(n, tuple(_trial_division(n)))


@lru_cache(maxsize=4096)
def divisors(n: int) -> DivisorLattice:
    """All positive divisors of ``n``, ascending."""
    fac = factorize(n)
    divs = [1]
    for p, alpha in fac:
        divs = [d * p**e for d in divs for e in range(alpha + 1)]
    return DivisorLattice(n, tuple(sorted(divs)))


def maximal_proper_divisors(n: int) -> list[int]:
    """``n // p`` for each prime ``p`` dividing ``n``."""
    if n < 2:
        raise ValueError("1 has no proper divisors")
    return sorted(n // p for p in factorize(n).primes)


def corner_divisors(n: int):
    """Yield ``(sign, m)`` over the corners of the divisor lattice below ``n``.

    For ``n = p1**a1 ... pt**at`` these are the ``2**t`` values
    ``m = p1**k1 ... pt**kt`` with ``kj in {aj - 1, aj}`` and
    ``sign = (-1)**sum(aj - kj)``.
    """
    fac = factorize(n)
    choices = [((alpha, +1), (alpha - 1, -1)) for _, alpha in fac]
    for pick in product(*choices):
        m, sign = 1, 1
        for (p, _), (k, sg) in zip(fac, pick):
            m *= p**k
            sign *= sg
        yield sign, m


# -- budgeted factoring of large moduli --------------------------------------

_SMALL_PRIME_BOUND = 1 << 16


def _split(m: int, budget: int) -> list[int]:
    """Split a composite ``m`` into prime factors (with repetition)."""
    if m == 1:
        return []
    if isprime(m):
        return [m]
    pp = perfect_power(m)
    if pp:
        base, e = int(pp[0]), int(pp[1])
        return _split(base, budget) * e
    for seed in range(1, 9):
        d = pollard_rho(m, a=seed, retries=0, seed=seed, max_steps=budget)
        if d:
            d = int(d)
            return _split(d, budget) + _split(m // d, budget)
    raise FactoringBudgetExceeded(f"could not split {m} within {budget} rho steps")


def factor_with_budget(n: int, budget: int = 200_000) -> dict[int, int]:
    """Factor ``n > 0``; raise :class:`FactoringBudgetExceeded` if Pollard rho stalls."""
    if n < 1:
        raise ValueError("factor_with_budget needs n >= 1")
    out: dict[int, int] = {}
    m = n
    p = 2
    while p < _SMALL_PRIME_BOUND and p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1 and p * p > m:
        out[m] = out.get(m, 0) + 1
        m = 1
    for q in _split(m, budget):
        out[q] = out.get(q, 0) + 1
    return dict(sorted(out.items()))


def multiplicative_order(r: int, modulus: int, modulus_factors: dict[int, int], budget: int = 200_000) -> int:
    """Order of ``r`` in the unit group mod ``modulus`` (``gcd(r, modulus) == 1``).

    ``modulus_factors`` is the factorization of ``modulus``; the orders modulo
    each prime power are combined with lcm.
    """
    if modulus == 1:
        return 1
    order = 1
    for p, k in modulus_factors.items():
        order = lcm(order, prime_power_order(r, p, k, budget))
    return order


@lru_cache(maxsize=65536)
def prime_power_order(r: int, p: int, k: int, budget: int) -> int:
    rp = r % p
    if rp == 0:
        raise ValueError(f"{r} is not a unit mod {p}")
    o = p - 1
    for q in factor_with_budget(p - 1, budget):
        while o % q == 0 and pow(rp, o // q, p) == 1:
            o //= q
    pk = p**k
    while pow(r, o, pk) != 1:
        o *= p
    return o
