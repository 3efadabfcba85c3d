"""Exact Newton-polygon arithmetic for abelian varieties.

A Newton polygon is stored as its slope multiset: ``(slope, multiplicity)``
pairs with slopes as :class:`fractions.Fraction` in ``[0, 1]``.  Nothing in
this module touches floating point.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import (
    BoundExceeded,
    DenominatorViolation,
    EmptyMultiset,
    SlopeOutOfRange,
    SymmetryViolation,
    TotalMassOdd,
    WedgeDegreeOutOfRange,
)

DEFAULT_DIMENSION_BOUND = 10

HALF = Fraction(1, 2)

Pairs = tuple[tuple[Fraction, int], ...]


def _canonical_pairs(pairs) -> Pairs:
    merged: dict[Fraction, int] = defaultdict(int)
    for slope, mult in pairs:
        merged[Fraction(slope)] += int(mult)
    return tuple(sorted((s, m) for s, m in merged.items() if m))


@dataclass(frozen=True)
class SlopeMultiset:
    """Slopes with multiplicities, e.g. of an exterior power or a polynomial's hull.

    ``i`` records the wedge degree when the multiset came from
    :func:`exterior_slopes`; it does not take part in equality.
    """

    pairs: Pairs
    i: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", _canonical_pairs(self.pairs))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.pairs)

    def multiplicity(self, slope) -> int:
        slope = Fraction(slope)
        for s, m in self.pairs:
            if s == slope:
                return m
        return 0

    def slopes(self) -> list[Fraction]:
        """The slopes as a flat list, each repeated by its multiplicity."""
        return [s for s, m in self.pairs for _ in range(m)]

    def is_symmetric(self, weight) -> bool:
        """True when the multiset is invariant under ``s -> weight - s``."""
        weight = Fraction(weight)
        return self == SlopeMultiset(tuple((weight - s, m) for s, m in self.pairs))

    def shift(self, delta) -> SlopeMultiset:
        delta = Fraction(delta)
        return SlopeMultiset(tuple((s + delta, m) for s, m in self.pairs), i=self.i)

    def __str__(self):
        return format_pairs(self.pairs)


@dataclass(frozen=True)
class NewtonPolygon:
    """Slope data of H^1 of a g-dimensional abelian variety (total mass 2g)."""

    g: int
    pairs: Pairs

    @property
    def m0(self) -> int:
        return self.multiplicity(0)

    @property
    def m1(self) -> int:
        return self.multiplicity(1)

    @property
    def m_half(self) -> int:
        return self.multiplicity(HALF)

    def multiplicity(self, slope) -> int:
        slope = Fraction(slope)
        for s, m in self.pairs:
            if s == slope:
                return m
        return 0

    def interior_pairs(self) -> Pairs:
        """Pairs with slope strictly between 0 and 1/2."""
        return tuple((s, m) for s, m in self.pairs if 0 < s < HALF)

    def as_multiset(self) -> SlopeMultiset:
        return SlopeMultiset(self.pairs)

    def is_symmetric(self) -> bool:
        return self.as_multiset().is_symmetric(1)

    def __str__(self):
        return format_pairs(self.pairs)


class Reduction(enum.Enum):
    ORDINARY = "ordinary"
    HODGE_WITT = "hodge-witt"
    NON_HODGE_WITT = "non-hodge-witt"


@dataclass(frozen=True)
class ClassLabel:
    kind: Reduction
    supersingular: bool = False

    @property
    def is_hodge_witt(self) -> bool:
        return self.kind is not Reduction.NON_HODGE_WITT

    def __str__(self):
        return self.kind.value


@dataclass
class EstimateReport:
    g: int
    polygons_checked: int = 0
    checked: list[NewtonPolygon] = field(default_factory=list)
    counterexamples: list[tuple[NewtonPolygon, Fraction]] = field(default_factory=list)
    witnesses: list[NewtonPolygon] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def format_pairs(pairs) -> str:
    return ",".join(f"{s}:{m}" for s, m in pairs)


def make_polygon(pairs, strict: bool = True) -> NewtonPolygon:
    """Build a canonical polygon from ``(slope, multiplicity)`` pairs.

    Duplicated slopes are merged and pairs sorted by slope.  With
    ``strict=False`` only the slope range and the parity of the total mass
    are checked, which admits asymmetric polygons for generic wedge work.
    """
    raw = [(Fraction(s), m) for s, m in pairs]
    for s, m in raw:
        if not 0 <= s <= 1:
            raise SlopeOutOfRange(f"slope {s} is outside [0, 1]")
        if int(m) != m or m < 1:
            raise SlopeOutOfRange(f"multiplicity {m!r} of slope {s} must be a positive integer")
    canon = _canonical_pairs(raw)
    total = sum(m for _, m in canon)
    if total == 0 or total % 2:
        raise TotalMassOdd(f"total multiplicity {total} is not a positive even number")
    poly = NewtonPolygon(total // 2, canon)
    if strict:
        for s, m in canon:
            if m % s.denominator:
                raise DenominatorViolation(
                    f"denominator {s.denominator} of slope {s} does not divide multiplicity {m}"
                )
        for s, m in canon:
            if poly.multiplicity(1 - s) != m:
                raise SymmetryViolation(
                    f"slope {s} has multiplicity {m} but {1 - s} has {poly.multiplicity(1 - s)}"
                )
    return poly


def p_rank(np: NewtonPolygon) -> int:
    return np.m0


def classify(np: NewtonPolygon) -> ClassLabel:
    """Ordinary / Hodge-Witt / non-Hodge-Witt by the p-rank thresholds g and g-1."""
    m0 = np.m0
    if m0 == np.g:
        kind = Reduction.ORDINARY
    elif m0 == np.g - 1:
        kind = Reduction.HODGE_WITT
    else:
        kind = Reduction.NON_HODGE_WITT
    return ClassLabel(kind, supersingular=np.pairs == ((HALF, 2 * np.g),))


def classify_by_rank(g: int, rank: int) -> Reduction:
    """Same thresholds as :func:`classify`, from the numbers alone."""
    if rank == g:
        return Reduction.ORDINARY
    if rank == g - 1:
        return Reduction.HODGE_WITT
    return Reduction.NON_HODGE_WITT


def _check_bound(g: int, bound: int) -> None:
    if g < 1:
        raise BoundExceeded(f"dimension must be positive, got {g}")
    if g > bound:
        raise BoundExceeded(f"dimension {g} exceeds the configured bound {bound}")


def _interior_slopes(max_den: int) -> list[Fraction]:
    """Reduced fractions a/b in (0, 1/2) with b <= max_den, ascending."""
    out = {Fraction(a, b) for b in range(3, max_den + 1) for a in range(1, (b + 1) // 2)}
    return sorted(s for s in out if s < HALF)


def _interior_assignments(budget: int, candidates: list[Fraction], start: int = 0):
    """Yield tuples of (slope, mult) drawn from candidates[start:], mults summing to budget."""
    if budget == 0:
        yield ()
        return
    for idx in range(start, len(candidates)):
        s = candidates[idx]
        b = s.denominator
        for mult in range(b, budget + 1, b):
            for rest in _interior_assignments(budget - mult, candidates, idx + 1):
                yield ((s, mult),) + rest


def enumerate_admissible(g: int, bound: int = DEFAULT_DIMENSION_BOUND) -> list[NewtonPolygon]:
    """Every symmetric integral Newton polygon of dimension ``g``, sorted.

    A polygon is fixed by m_0, the slope-1/2 multiplicity 2k and an
    assignment of the remaining mass g - m_0 - k to slopes in (0, 1/2),
    each with a multiple of its denominator; slopes above 1/2 mirror those.
    """
    _check_bound(g, bound)
    candidates = _interior_slopes(g)
    found = []
    for m0 in range(g + 1):
        for k in range(g - m0 + 1):
            budget = g - m0 - k
            for interior in _interior_assignments(budget, candidates):
                pairs = [(Fraction(0), m0), (Fraction(1), m0), (HALF, 2 * k)]
                for s, m in interior:
                    pairs += [(s, m), (1 - s, m)]
                found.append(make_polygon([(s, m) for s, m in pairs if m]))
    found.sort(key=lambda np: np.pairs)
    return found


def exterior_slopes(np: NewtonPolygon | SlopeMultiset, i: int) -> SlopeMultiset:
    """Slopes of the i-th exterior power: all sums over i-element sub-multisets.

    Convolves one slope class at a time; the state maps (chosen count,
    slope sum) to multiplicity, and choosing c copies of a slope with
    multiplicity m contributes a factor C(m, c).
    """
    pairs = np.pairs
    total = sum(m for _, m in pairs)
    if not 1 <= i <= total:
        raise WedgeDegreeOutOfRange(f"wedge degree {i} outside [1, {total}]")
    state: dict[tuple[int, Fraction], int] = {(0, Fraction(0)): 1}
    for slope, mult in pairs:
        nxt: dict[tuple[int, Fraction], int] = defaultdict(int)
        for (count, acc), weight in state.items():
            for c in range(min(mult, i - count) + 1):
                nxt[(count + c, acc + c * slope)] += weight * comb(mult, c)
        state = nxt
    out = [(acc, w) for (count, acc), w in state.items() if count == i]
    return SlopeMultiset(tuple(out), i=i)


def min_slope(sm: SlopeMultiset) -> Fraction:
    if not sm.pairs:
        raise EmptyMultiset("minimum of an empty slope multiset")
    return sm.pairs[0][0]


def mult_identity_check(np: NewtonPolygon) -> bool:
    """2g == 2 m_0 + m_{1/2} + 2 * sum of m_lambda over 0 < lambda < 1/2."""
    interior = sum(m for _, m in np.interior_pairs())
    return 2 * np.g == 2 * np.m0 + np.m_half + 2 * interior


def _wedge_minimum(np: NewtonPolygon) -> tuple[Fraction, int]:
    sm = exterior_slopes(np, np.g)
    return sm.pairs[0]


def verify_slope_estimate(
    g: int, bound: int = DEFAULT_DIMENSION_BOUND, jobs: int = 1
) -> EstimateReport:
    """Check that every non-Hodge-Witt polygon has all Lambda^g slopes >= 1.

    Counterexamples carry the offending minimum; polygons whose minimum is
    exactly 1 are collected as sharpness witnesses.  Parallel runs return
    the same report because results are consumed in enumeration order.
    """
    if g < 2:
        raise BoundExceeded(f"the slope estimate is stated for g >= 2, got {g}")
    _check_bound(g, bound)
    targets = [
        np for np in enumerate_admissible(g, bound)
        if classify(np).kind is Reduction.NON_HODGE_WITT
    ]
    if jobs > 1 and len(targets) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            minima = list(pool.map(_wedge_minimum, targets))
    else:
        minima = [_wedge_minimum(np) for np in targets]
    report = EstimateReport(g=g, polygons_checked=len(targets), checked=targets)
    for np, (lowest, _) in zip(targets, minima):
        if lowest < 1:
            report.counterexamples.append((np, lowest))
        elif lowest == 1:
            report.witnesses.append(np)
    return report


def product_polygon(a: NewtonPolygon, b: NewtonPolygon) -> NewtonPolygon:
    """Polygon of a product: H^1 is the direct sum, so multiplicities add."""
    return make_polygon(a.pairs + b.pairs)


def sharp_polygon(g: int) -> NewtonPolygon:
    """The polygon with slopes 1/g and 1 - 1/g, each of multiplicity g."""
    return make_polygon([(Fraction(1, g), g), (Fraction(g - 1, g), g)])


def ordinary_polygon(g: int) -> NewtonPolygon:
    return make_polygon([(0, g), (1, g)])
