"""Aggregated per-level reports and the invariant suite behind the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import geometry
from .arith import FactoringBudgetExceeded, divisors
from .formulas import Check, an_closed_form, degenerate_divisor, nbpn_mobius, totient_formula
from .reidemeister import (
    DEFAULT_BUDGET,
    DEFAULT_CAP,
    CapExceeded,
    FiberTorusMap,
    ToralityWitness,
    count_irreducible_classes,
    count_orbits_fast,
    is_n_toral,
    level,
    make_class,
    depth,
    multiplicativity_holds,
    nielsen_number,
    orbit_counts,
    orbit_decomposition,
)

FLAG_NAMES = ("formulas_agree", "an_equals_In", "an_equals_nOn", "nbpn_le_Mn", "geometric_equals_algebraic")


@dataclass(frozen=True)
class LevelRow:
    n: int
    a: int
    b: int
    d: int
    nielsen: int
    an: int


@dataclass
class PeriodicReport:
    map: FiberTorusMap
    n: int
    rows: list[LevelRow]
    On: int | None
    In: int
    nbpn: int | None
    Mn: int
    n_toral: bool | None
    toral_witness: ToralityWitness | None
    flags: dict[str, Check]
    unavailable: list[str] = field(default_factory=list)

    @property
    def an(self) -> int:
        return self.rows[-1].an

    @property
    def complete(self) -> bool:
        return not self.unavailable


def level_rows(fmap: FiberTorusMap, n: int) -> list[LevelRow]:
    rows = []
    an: dict[int, int] = {}
    for k in divisors(n):
        lv = level(fmap, k)
        an[k] = lv.d - sum(an[j] for j in divisors(k).proper())
        rows.append(LevelRow(k, lv.a, lv.b, lv.d, nielsen_number(fmap, k), an[k]))
    return rows


def analyze(fmap: FiberTorusMap, n: int, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET) -> PeriodicReport:
    rows = level_rows(fmap, n)
    A = rows[-1].an
    closed, mob = an_closed_form(fmap, n), nbpn_mobius(fmap, n)
    flags: dict[str, Check] = {
        "formulas_agree": Check.of(A == closed == mob, {"recursive": A, "closed_form": closed, "mobius": mob})
    }
    unavailable = []
    bad = degenerate_divisor(fmap, n)
    In = count_irreducible_classes(fmap, n)
    Mn = geometry.minimal_component_count(fmap, n, cap)

    On = nb = None
    try:
        On = orbit_counts(fmap, n, cap, budget).irreducible
        nb = n * On
    except (CapExceeded, FactoringBudgetExceeded) as exc:
        unavailable.append(f"O_{n}: {exc}")
    toral, witness = None, None
    try:
        toral, witness = is_n_toral(fmap, n, cap, budget)
    except (CapExceeded, FactoringBudgetExceeded) as exc:
        unavailable.append(f"n_toral: {exc}")

    if bad is None:
        flags["an_equals_In"] = Check.of(A == In, {"an": A, "In": In})
        mismatched = [row.n for row in rows if geometry.fix_components(fmap, row.n).component_count != row.nielsen]
        ok = Mn == In and not mismatched
        flags["geometric_equals_algebraic"] = Check.of(ok, {"Mn": Mn, "In": In, "component_count_mismatch": mismatched})
    else:
        flags["an_equals_In"] = Check.skipped(f"d_{bad} = 0")
        flags["geometric_equals_algebraic"] = Check.skipped(f"d_{bad} = 0")
    if nb is not None:
        flags["an_equals_nOn"] = Check.of(A == nb, {"an": A, "nbpn": nb, "On": On})
        flags["nbpn_le_Mn"] = Check.of(nb <= Mn, {"nbpn": nb, "Mn": Mn})
    else:
        flags["an_equals_nOn"] = Check.skipped("O_n unavailable")
        flags["nbpn_le_Mn"] = Check.skipped("O_n unavailable")

    return PeriodicReport(fmap, n, rows, On, In, nb, Mn, toral, witness,
                          {name: flags[name] for name in FLAG_NAMES}, unavailable)


@dataclass(frozen=True)
class TableRow:
    n: int
    d: int
    nielsen: int
    an: int
    nbpn: int | None
    Mn: int


def table(fmap: FiberTorusMap, max_n: int, cap: int = DEFAULT_CAP,
          budget: int = DEFAULT_BUDGET) -> tuple[list[TableRow], list[str]]:
    rows, unavailable = [], []
    an: dict[int, int] = {}
    for n in range(1, max_n + 1):
        d = level(fmap, n).d
        an[n] = d - sum(an[k] for k in divisors(n).proper())
        try:
            nb = n * orbit_counts(fmap, n, cap, budget).irreducible
        except (CapExceeded, FactoringBudgetExceeded) as exc:
            nb = None
            unavailable.append(f"O_{n}: {exc}")
        rows.append(TableRow(n, d, nielsen_number(fmap, n), an[n], nb, geometry.minimal_component_count(fmap, n, cap)))
    return rows, unavailable


@dataclass(frozen=True)
class PeriodCertificate:
    n: int
    nbpn: int | None
    an: int

    @property
    def certified_by(self) -> list[str]:
        out = []
        if self.nbpn:
            out.append("nbpn")
        if self.an > 0:
            out.append("an")
        return out


def hper(fmap: FiberTorusMap, max_n: int, cap: int = DEFAULT_CAP,
         budget: int = DEFAULT_BUDGET) -> tuple[list[int], list[PeriodCertificate], list[str]]:
    """Periods forced for every map fiber-homotopic to ``fmap``: ``n`` with ``N_BP_n != 0``.

    Every level where ``n * O_n`` and ``A_n`` disagree is also returned as a
    certificate so both readings stay visible.
    """
    rows, unavailable = table(fmap, max_n, cap, budget)
    periods = [row.n for row in rows if row.nbpn]
    certs = [PeriodCertificate(row.n, row.nbpn, row.an) for row in rows]
    return periods, certs, unavailable


# -- invariant suite ---------------------------------------------------------

@dataclass
class LevelVerdict:
    n: int
    violations: list[str] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)


WITNESS_LIMIT = 10_000


def verify_level(fmap: FiberTorusMap, n: int, cap: int = DEFAULT_CAP,
                 budget: int = DEFAULT_BUDGET) -> LevelVerdict:
    """Run every cross-module identity at level ``n``.

    Violations of exact identities are bugs; failures of the theorem's
    hypotheses or of the period bounds are findings.
    """
    v = LevelVerdict(n)
    rows = level_rows(fmap, n)
    A = rows[-1].an
    d = rows[-1].d

    if not A == an_closed_form(fmap, n) == nbpn_mobius(fmap, n):
        v.violations.append("recursive, closed-form and Moebius A_n differ")
    if sum(row.an for row in rows) != d:
        v.violations.append("sum of A_k over k | n differs from N(f^n)")
    ok, where = multiplicativity_holds(fmap, n)
    if not ok:
        v.violations.append(f"d_n != |cofactor| * d_k at {where}")
    if fmap.r == 1 and fmap.s != 0 and totient_formula(fmap, n) != A:
        v.violations.append("totient formula differs from A_n")

    bad = degenerate_divisor(fmap, n)
    if bad is not None:
        v.findings.append(f"degenerate level d_{bad} = 0; theorem hypotheses fail")
        return v

    In = count_irreducible_classes(fmap, n)
    Mn = geometry.minimal_component_count(fmap, n, cap)
    if Mn != In:
        v.violations.append(f"M_n = {Mn} but I_n = {In}")
    if geometry.fix_components(fmap, n).component_count != d:
        v.violations.append("Fix(f^n) component count differs from N(f^n)")
    if sum(geometry.minimal_component_count(fmap, k, cap) for k in divisors(n)) != d:
        v.violations.append("components by minimal period do not partition Fix(f^n)")

    try:
        counts = orbit_counts(fmap, n, cap, budget)
    except (CapExceeded, FactoringBudgetExceeded) as exc:
        v.skipped.append(f"orbit counts: {exc}")
        return v

    if d <= cap:
        _verify_enumerated(fmap, n, d, In, counts, budget, v)

    nb = n * counts.irreducible
    try:
        toral, witness = is_n_toral(fmap, n, cap, budget)
    except (CapExceeded, FactoringBudgetExceeded) as exc:
        v.skipped.append(f"n-torality: {exc}")
        toral, witness = None, None
    if toral and nb != A:
        v.violations.append(f"n-toral but n*O_n = {nb} != A_n = {A}")
    if toral is False:
        v.findings.append(f"not {n}-toral: {witness.as_dict()}")
    if nb != A:
        v.findings.append(f"n*O_n = {nb} differs from A_n = {A}")
    if nb > Mn:
        v.findings.append(f"n*O_n = {nb} exceeds M_n = {Mn}")
    return v


def _verify_enumerated(fmap, n, d, In, counts, budget, v):
    if pow(fmap.r, n, d) != 1 % d:
        v.violations.append("r^n is not 1 mod d_n")
    orbits = orbit_decomposition(fmap, n, d)
    if sum(len(o.members) for o in orbits) != d:
        v.violations.append("orbits do not partition Z/d_n")
    if any(n % o.length for o in orbits):
        v.violations.append("an orbit length does not divide n")
    bad = [o.representative.residue for o in orbits if not o.length_divides_depth]
    if bad:
        v.findings.append(f"orbit length does not divide depth for residues {bad[:5]}")
    exhaustive = sum(depth(fmap, n, make_class(fmap, n, t)) == n for t in range(d)) if d <= WITNESS_LIMIT else In
    if exhaustive != In:
        v.violations.append("inclusion-exclusion I_n differs from exhaustive depth count")
    try:
        if count_orbits_fast(fmap, n, budget) != (counts.total, counts.irreducible):
            v.violations.append("fast orbit count disagrees with enumeration")
    except FactoringBudgetExceeded as exc:
        v.skipped.append(f"fast orbit count: {exc}")
    counted = set(geometry.counted_components(fmap, n))
    indices = range(d) if d <= WITNESS_LIMIT else range(0, d, d // 100 + 1)
    for t in indices:
        p = geometry.sample_component_point(fmap, n, t)
        per = geometry.minimal_period(fmap, p, n)
        if per is None or (per == n) != (t in counted):
            v.violations.append(f"component {t}: sampled point has minimal period {per}")
            break
