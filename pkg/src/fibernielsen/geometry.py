"""Rational-point dynamics of ``f_{r,s}`` on the torus, used as an independent oracle.

In additive coordinates on ``(R/Z)**2`` the map is ``(x, y) -> (r*x + s*y, y)``,
so ``f**n`` is ``(x, y) -> (r**n * x + s*sigma(n, r) * y, y)`` and
``Fix(f**n) = {a_n*x + b_n*y in Z}``.  For ``d_n > 0`` that is ``d_n`` parallel
circles; the circle through a fixed point is indexed by ``(a_n*x + b_n*y) mod d_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from .arith import maximal_proper_divisors
from .reidemeister import DEFAULT_CAP, FiberTorusMap, level


@dataclass(frozen=True)
class RationalTorusPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x) % 1)
        object.__setattr__(self, "y", Fraction(self.y) % 1)

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class FixComponents:
    n: int
    d: int
    component_count: int
    whole_torus: bool
    # primitive normal (a_n, b_n) / d_n; None for the whole torus
    normal: tuple[int, int] | None


def step(fmap: FiberTorusMap, p: RationalTorusPoint) -> RationalTorusPoint:
    return RationalTorusPoint(fmap.r * p.x + fmap.s * p.y, p.y)


def iterate(fmap: FiberTorusMap, p: RationalTorusPoint, times: int) -> RationalTorusPoint:
    for _ in range(times):
        p = step(fmap, p)
    return p


def minimal_period(fmap: FiberTorusMap, p: RationalTorusPoint, bound: int) -> int | None:
    """Smallest ``n <= bound`` with ``f**n(p) == p``, found by stepping the orbit.

    Both coordinates are written over their common denominator ``q`` and the
    numerators are stepped exactly modulo ``q``.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    q = lcm(p.x.denominator, p.y.denominator)
    x0 = p.x.numerator * (q // p.x.denominator)
    y0 = p.y.numerator * (q // p.y.denominator)
    shear = fmap.s * y0
    r = fmap.r
    x = x0
    for k in range(1, bound + 1):
        x = (r * x + shear) % q
        if x == x0:
            return k
    return None


def fix_components(fmap: FiberTorusMap, n: int) -> FixComponents:
    lv = level(fmap, n)
    if lv.d == 0:
        return FixComponents(n, 0, 1, True, None)
    return FixComponents(n, lv.d, lv.d, False, (lv.a // lv.d, lv.b // lv.d))


def component_index(fmap: FiberTorusMap, n: int, p: RationalTorusPoint) -> int:
    """Index in ``Z/d_n`` of the circle of ``Fix(f**n)`` containing ``p``."""
    lv = level(fmap, n)
    if lv.d == 0:
        return 0
    value = lv.a * p.x + lv.b * p.y
    if value.denominator != 1:
        raise ValueError(f"{p} is not fixed by f^{n}")
    return value.numerator % lv.d


def _bezout(a: int, b: int) -> tuple[int, int]:
    # u*a + v*b == 1 for coprime a, b; prefers a pure x or y solution
    if a in (1, -1):
        return a, 0
    if b in (1, -1):
        return 0, b
    old_r, r_ = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r_:
        q = old_r // r_
        old_r, r_ = r_, old_r - q * r_
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_u, old_v = -old_u, -old_v
    return old_u, old_v


def sample_component_point(fmap: FiberTorusMap, n: int, t: int) -> RationalTorusPoint:
    """A rational point on the circle of ``Fix(f**n)`` with index ``t``."""
    fc = fix_components(fmap, n)
    if fc.whole_torus:
        raise ValueError(f"Fix(f^{n}) is the whole torus")
    if not 0 <= t < fc.d:
        raise ValueError(f"component index {t} outside Z/{fc.d}")
    u, v = _bezout(*fc.normal)
    return RationalTorusPoint(Fraction(u * t, fc.d), Fraction(v * t, fc.d))


def lower_period_generator(fmap: FiberTorusMap, n: int, k: int) -> int:
    """Index at level ``n`` of the circle through the generator circle of level ``k``.

    The sampled point must be fixed by ``f**k`` under honest iteration.  Since
    component indices are additive, the level-``k`` circle ``u`` lands on level-``n``
    circle ``u * g mod d_n`` where ``g`` is the returned value.
    """
    p = sample_component_point(fmap, k, 1 % level(fmap, k).d)
    if iterate(fmap, p, k) != p:
        raise AssertionError(f"sample {p} is not fixed by f^{k}")
    return component_index(fmap, n, p)


def minimal_component_count(fmap: FiberTorusMap, n: int, cap: int = DEFAULT_CAP) -> int:
    """Number of circles of ``Fix(f**n)`` made of points of minimal period exactly ``n``.

    A circle is discarded when it contains a point of ``Fix(f**k)`` for a
    maximal proper divisor ``k``.  Small levels mark circles one by one; larger
    ones count the same sets by inclusion-exclusion.
    """
    d = level(fmap, n).d
    if d == 0:
        return 1 if n == 1 else 0
    if n == 1:
        return d
    ks = maximal_proper_divisors(n)
    if any(level(fmap, k).d == 0 for k in ks):
        return 0
    gens = [(level(fmap, k).d, lower_period_generator(fmap, n, k)) for k in ks]
    if d <= cap:
        hit = bytearray(d)
        for dk, g in gens:
            for u in range(dk):
                hit[u * g % d] = 1
        return d - sum(hit)
    steps = [gcd(g, d) for _, g in gens]
    total = 0
    for size in range(len(steps) + 1):
        for subset in combinations(steps, size):
            total += (-1) ** size * (d // lcm(1, *subset))
    return total


def counted_components(fmap: FiberTorusMap, n: int) -> list[int]:
    """Indices of the circles counted by :func:`minimal_component_count` (enumerates ``Z/d_n``)."""
    d = level(fmap, n).d
    if d == 0:
        raise ValueError(f"Fix(f^{n}) is the whole torus")
    if n == 1:
        return list(range(d))
    hit = bytearray(d)
    for k in maximal_proper_divisors(n):
        dk = level(fmap, k).d
        g = lower_period_generator(fmap, n, k)
        for u in range(dk):
            hit[u * g % d] = 1
    return [t for t in range(d) if not hit[t]]


def orbit_components(fmap: FiberTorusMap, n: int, p: RationalTorusPoint) -> list[int]:
    """Component indices in ``Fix(f**n)`` of ``p, f(p), ..., f**(n-1)(p)``."""
    out = []
    for _ in range(n):
        out.append(component_index(fmap, n, p))
        p = step(fmap, p)
    return out
