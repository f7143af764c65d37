"""Cyclic-group model of the fiberwise Reidemeister sets of ``f_{r,s}``.

At level ``n`` the Reidemeister set of ``f**n`` over the circle is
``Z/d_n`` with ``d_n = gcd(r**n - 1, s*sigma(n, r))``.  The self map induced
by ``f`` is multiplication by ``r`` and the boosting map from level ``k`` to
level ``n`` is multiplication by ``cofactor(r, n, k)``.

Whenever ``d_n > 0`` every ``d_k`` with ``k | n`` is positive as well and
``d_n == abs(cofactor(r, n, k)) * d_k``; the boosting image at level ``n`` is
then the subgroup of multiples of ``abs(cofactor(r, n, k))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm

from . import arith
from .arith import FactoringBudgetExceeded, cofactor, divisors, maximal_proper_divisors

DEFAULT_CAP = 10**7
DEFAULT_BUDGET = 200_000
INFINITE = float("inf")


class CapExceeded(RuntimeError):
    """The residue set at some level is larger than the enumeration cap."""

    def __init__(self, n: int, d: int, cap: int):
        super().__init__(f"d_{n} = {d} exceeds enumeration cap {cap}")
        self.n, self.d, self.cap = n, d, cap


class DegenerateLevel(ValueError):
    """``d_n == 0``: the Reidemeister set at level ``n`` is all of ``Z``."""

    def __init__(self, n: int):
        super().__init__(f"d_{n} = 0 (infinite Reidemeister set)")
        self.n = n


@dataclass(frozen=True)
class FiberTorusMap:
    """The normal form ``(x, y) -> (x**r * y**s, y)`` of a fiber map of the torus."""

    r: int
    s: int

    def __str__(self):
        return f"f_{{{self.r},{self.s}}}"


@dataclass(frozen=True)
class LevelData:
    n: int
    a: int
    b: int
    d: int

    @property
    def degenerate(self) -> bool:
        return self.d == 0


@dataclass(frozen=True)
class ReidemeisterClass:
    level: int
    residue: int


@dataclass(frozen=True)
class OrbitRecord:
    level: int
    representative: ReidemeisterClass
    members: tuple[int, ...]
    length: int
    depth: int
    irreducible: bool
    essential: bool

    @property
    def length_divides_depth(self) -> bool:
        return self.depth % self.length == 0


@dataclass(frozen=True)
class ToralityWitness:
    """First obstruction found while checking n-torality."""

    kind: str  # "depth_length", "gamma_not_injective" or "degenerate_level"
    level: int
    residue: int | None = None
    depth: int | None = None
    length: int | None = None
    source_level: int | None = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "level": self.level}
        for key in ("residue", "depth", "length", "source_level"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


@lru_cache(maxsize=8192)
def level(fmap: FiberTorusMap, n: int) -> LevelData:
    """Exponents of ``f**n`` and the order of its Reidemeister set."""
    if n < 1:
        raise ValueError("level needs n >= 1")
    a = fmap.r**n - 1
    b = fmap.s * arith.sigma(n, fmap.r)
    return LevelData(n, a, b, gcd(a, b))


def reidemeister_number(fmap: FiberTorusMap, n: int):
    """``d_n``, or :data:`INFINITE` when ``d_n == 0``."""
    d = level(fmap, n).d
    return d if d else INFINITE


def nielsen_number(fmap: FiberTorusMap, n: int) -> int:
    """Nielsen number of ``f**n`` over the circle: ``d_n`` (zero in the degenerate case)."""
    return level(fmap, n).d


def make_class(fmap: FiberTorusMap, n: int, residue: int) -> ReidemeisterClass:
    d = _modulus(fmap, n)
    if not 0 <= residue < d:
        raise ValueError(f"residue {residue} outside Z/{d}")
    return ReidemeisterClass(n, residue)


def _modulus(fmap: FiberTorusMap, n: int) -> int:
    d = level(fmap, n).d
    if d == 0:
        raise DegenerateLevel(n)
    return d


def _check_class(fmap, n, c):
    if c.level != n:
        raise ValueError(f"class lives at level {c.level}, not {n}")
    d = _modulus(fmap, n)
    if not 0 <= c.residue < d:
        raise ValueError(f"residue {c.residue} outside Z/{d}")
    return d


def fomega(fmap: FiberTorusMap, n: int, c: ReidemeisterClass) -> ReidemeisterClass:
    """The self map of the level-``n`` Reidemeister set induced by ``f``."""
    d = _check_class(fmap, n, c)
    return ReidemeisterClass(n, (fmap.r % d) * c.residue % d)


def gamma(fmap: FiberTorusMap, k: int, n: int, c: ReidemeisterClass) -> ReidemeisterClass:
    """Boost a level-``k`` class to level ``n`` (``k | n``)."""
    if n % k:
        raise ValueError(f"{k} does not divide {n}")
    _check_class(fmap, k, c)
    d = _modulus(fmap, n)
    return ReidemeisterClass(n, cofactor(fmap.r, n, k) % d * c.residue % d)


@lru_cache(maxsize=65536)
def image_step(fmap: FiberTorusMap, n: int, k: int) -> int:
    """Generator of the boosting image from level ``k`` inside ``Z/d_n``.

    The image is the set of multiples of the returned divisor of ``d_n``; when
    ``d_k == 0`` this is still the image of multiplication by the cofactor on
    all of ``Z``.
    """
    if n % k:
        raise ValueError(f"{k} does not divide {n}")
    d = _modulus(fmap, n)
    return gcd(cofactor(fmap.r, n, k) % d, d)


def is_reducible_to(fmap: FiberTorusMap, n: int, k: int, c: ReidemeisterClass) -> bool:
    _check_class(fmap, n, c)
    return c.residue % image_step(fmap, n, k) == 0


def depth(fmap: FiberTorusMap, n: int, c: ReidemeisterClass) -> int:
    """Smallest divisor of ``n`` to which ``c`` is reducible."""
    _check_class(fmap, n, c)
    for k in divisors(n):
        if c.residue % image_step(fmap, n, k) == 0:
            return k
    raise AssertionError("every class is reducible to its own level")


def _depth_table(fmap, n):
    # steps ordered by ascending divisor; the level-n step is 1
    return [(k, image_step(fmap, n, k)) for k in divisors(n)]


def _depth_from_table(table, residue):
    for k, step in table:
        if residue % step == 0:
            return k
    raise AssertionError("unreachable")


def orbit_decomposition(fmap: FiberTorusMap, n: int, cap: int = DEFAULT_CAP) -> list[OrbitRecord]:
    """Partition ``Z/d_n`` into orbits of the induced self map.

    Orbits are listed by their smallest residue; members follow the action.
    Depth is recomputed for every member and must agree along the orbit.
    """
    d = _modulus(fmap, n)
    if d > cap:
        raise CapExceeded(n, d, cap)
    r = fmap.r % d
    table = _depth_table(fmap, n)
    seen = bytearray(d)
    orbits = []
    for start in range(d):
        if seen[start]:
            continue
        members = []
        t = start
        while not seen[t]:
            seen[t] = 1
            members.append(t)
            t = r * t % d
        if t != start:
            raise AssertionError(f"multiplication by {r} is not a permutation of Z/{d}")
        depths = {_depth_from_table(table, m) for m in members}
        if len(depths) != 1:
            raise AssertionError(f"depth not constant on orbit of {start}: {sorted(depths)}")
        dep = depths.pop()
        orbits.append(
            OrbitRecord(
                level=n,
                representative=ReidemeisterClass(n, start),
                members=tuple(members),
                length=len(members),
                depth=dep,
                irreducible=dep == n,
                essential=True,
            )
        )
    return orbits


def _irreducible_steps(fmap, n):
    if n == 1:
        return []
    return [image_step(fmap, n, k) for k in maximal_proper_divisors(n)]


def count_irreducible_classes(fmap: FiberTorusMap, n: int) -> int:
    """Number of irreducible essential classes at level ``n``.

    Inclusion-exclusion over the boosting images from the maximal proper
    divisors; the intersection of images with steps ``g_i`` has
    ``d_n // lcm(g_i)`` elements.  A degenerate level has no essential classes.
    """
    d = level(fmap, n).d
    if d == 0:
        return 0
    steps = _irreducible_steps(fmap, n)
    total = 0
    for size in range(len(steps) + 1):
        for subset in combinations(steps, size):
            total += (-1) ** size * (d // lcm(1, *subset))
    return total


def count_orbits_fast(fmap: FiberTorusMap, n: int, budget: int = DEFAULT_BUDGET,
                      max_divisors: int = 2_000_000) -> tuple[int, int]:
    """``(orbit count, irreducible orbit count)`` without enumerating residues.

    Residues of additive order ``e`` form ``phi(e) / ord_e(r)`` orbits, and a
    residue lies in the image from level ``k`` iff its order divides ``d_k``.
    """
    d = level(fmap, n).d
    if d == 0:
        raise DegenerateLevel(n)
    fac = arith.factor_with_budget(d, budget)
    n_div = 1
    for k in fac.values():
        n_div *= k + 1
    if n_div > max_divisors:
        raise FactoringBudgetExceeded(f"d_{n} has {n_div} divisors (limit {max_divisors})")

    primes = list(fac)
    sub_vals = []
    if n > 1:
        for k in maximal_proper_divisors(n):
            dk = d // image_step(fmap, n, k)
            sub_vals.append([_valuation(dk, p) for p in primes])

    # orders modulo each prime power p**j, j <= v_p(d)
    local = [[arith.prime_power_order(fmap.r, p, j, budget) if j else 1 for j in range(fac[p] + 1)]
             for p in primes]

    total = irreducible = 0

    def walk(i, exps, phi, order):
        nonlocal total, irreducible
        if i == len(primes):
            count = phi // order
            total += count
            if all(any(e > v for e, v in zip(exps, sv)) for sv in sub_vals):
                irreducible += count
            return
        p = primes[i]
        for j in range(fac[p] + 1):
            ph = phi if j == 0 else phi * (p - 1) * p ** (j - 1)
            walk(i + 1, exps + [j], ph, lcm(order, local[i][j]))

    walk(0, [], 1, 1)
    return total, irreducible


def _valuation(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass(frozen=True)
class OrbitCounts:
    total: int
    irreducible: int
    method: str  # "enumeration", "fast" or "degenerate"


def orbit_counts(fmap: FiberTorusMap, n: int, cap: int = DEFAULT_CAP,
                 budget: int = DEFAULT_BUDGET) -> OrbitCounts:
    """Orbit counts by enumeration when ``d_n <= cap``, otherwise by the fast path.

    Raises :class:`FactoringBudgetExceeded` when neither route is available.
    """
    d = level(fmap, n).d
    if d == 0:
        return OrbitCounts(0, 0, "degenerate")
    if d <= cap:
        orbits = orbit_decomposition(fmap, n, cap)
        return OrbitCounts(len(orbits), sum(o.irreducible for o in orbits), "enumeration")
    total, irr = count_orbits_fast(fmap, n, budget)
    return OrbitCounts(total, irr, "fast")


def irreducible_orbit_count(fmap: FiberTorusMap, n: int, cap: int = DEFAULT_CAP,
                            budget: int = DEFAULT_BUDGET) -> int:
    """``O_n``: irreducible essential orbits at level ``n``."""
    return orbit_counts(fmap, n, cap, budget).irreducible


def nbpn(fmap: FiberTorusMap, n: int, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET) -> int:
    return n * irreducible_orbit_count(fmap, n, cap, budget)


def _gamma_witness(fmap, n):
    for m in divisors(n):
        if level(fmap, m).d == 0:
            return ToralityWitness("degenerate_level", m)
    for m in divisors(n):
        dm = level(fmap, m).d
        for k in divisors(m):
            # image size of the boost from k equals d_k iff it is injective
            if dm // image_step(fmap, m, k) != level(fmap, k).d:
                return ToralityWitness("gamma_not_injective", m, source_level=k)
    return None


def is_n_toral(fmap: FiberTorusMap, n: int, cap: int = DEFAULT_CAP,
               budget: int = DEFAULT_BUDGET) -> tuple[bool, ToralityWitness | None]:
    """Check depth == length on every orbit of every level ``m | n`` and injectivity of every boost.

    Levels small enough are enumerated; larger ones use residue orders
    (an element of additive order ``e`` has length ``ord_e(r)`` and depth the
    least ``k | m`` with ``e | d_k``).
    """
    w = _gamma_witness(fmap, n)
    if w is not None:
        return False, w
    for m in divisors(n):
        if level(fmap, m).d <= cap:
            for orb in orbit_decomposition(fmap, m, cap):
                if orb.depth != orb.length:
                    return False, ToralityWitness("depth_length", m, orb.representative.residue,
                                                  orb.depth, orb.length)
        else:
            w = _order_torality_witness(fmap, m, budget)
            if w is not None:
                return False, w
    return True, None


def _order_torality_witness(fmap, m, budget):
    d = level(fmap, m).d
    fac = arith.factor_with_budget(d, budget)
    divs = [1]
    for p, k in fac.items():
        divs = [x * p**j for x in divs for j in range(k + 1)]
    levels = [(k, level(fmap, k).d) for k in divisors(m)]
    for e in sorted(divs):
        e_fac = {p: _valuation(e, p) for p in fac if e % p == 0}
        length = arith.multiplicative_order(fmap.r, e, e_fac, budget)
        dep = next(k for k, dk in levels if dk % e == 0)
        if dep != length:
            return ToralityWitness("depth_length", m, d // e, dep, length)
    return None


def multiplicativity_holds(fmap: FiberTorusMap, n: int) -> tuple[bool, tuple[int, int] | None]:
    """Check ``d_n == |cofactor(r, n, k)| * d_k`` for all ``k | n`` where it applies."""
    dn = level(fmap, n).d
    for k in divisors(n):
        c = cofactor(fmap.r, n, k)
        dk = level(fmap, k).d
        if c != 0 and dk > 0 and dn != abs(c) * dk:
            return False, (n, k)
    return True, None


__all__ = [
    "CapExceeded", "DegenerateLevel", "FactoringBudgetExceeded", "FiberTorusMap", "LevelData",
    "ReidemeisterClass", "OrbitRecord", "OrbitCounts", "ToralityWitness", "INFINITE", "DEFAULT_CAP",
    "level", "reidemeister_number", "nielsen_number", "make_class", "fomega", "gamma", "image_step",
    "is_reducible_to", "depth", "orbit_decomposition", "count_irreducible_classes",
    "count_orbits_fast", "orbit_counts", "irreducible_orbit_count", "nbpn", "is_n_toral",
    "multiplicativity_holds",
]
