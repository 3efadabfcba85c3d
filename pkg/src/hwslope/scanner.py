"""Point counting over F_p and F_{p^2}, per-prime classification, density reports.

Counts are exhaustive character sums vectorized with numpy; every
intermediate is reduced mod p so int64 is exact for p < 2**31.
"""

from __future__ import annotations

import enum
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    BadPrime,
    HWSlopeError,
    CurveError,
    EvenPrime,
    HasseViolation,
    NonIntegralCoefficient,
    SmallPrime,
    ZeroDiscriminant,
)
from .intmath import discriminant, is_prime, prime_factors, primes_between
from .slope_calculus import (
    ClassLabel,
    NewtonPolygon,
    Reduction,
    classify,
    classify_by_rank,
    exterior_slopes,
    p_rank,
    product_polygon,
)
from .weil_poly import (
    AuditRecord,
    WeilPolynomial,
    audit_prime,
    is_integral,
    polygon_of,
    tate_twist,
    validate_weil,
    wedge_char_poly,
)

log = logging.getLogger(__name__)

MAX_PRIME = 2**31 - 1
_BLOCK = 1 << 20


class CurveKind(enum.Enum):
    ELLIPTIC = "ec"
    HYPERELLIPTIC2 = "hyp2"


class Status(enum.Enum):
    GOOD = "good"
    BAD = "bad"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class CurveSpec:
    """An elliptic curve [a1,a2,a3,a4,a6] or a genus-2 curve y^2 = f(x).

    Hyperelliptic coefficients are leading first (c5..c0 or c6..c0).
    """

    kind: CurveKind
    coeffs: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if self.kind is CurveKind.ELLIPTIC:
            if len(self.coeffs) != 5:
                raise CurveError("an elliptic curve needs [a1,a2,a3,a4,a6]")
        else:
            if len(self.coeffs) not in (6, 7) or self.coeffs[0] == 0:
                raise CurveError("a genus-2 curve needs f of degree exactly 5 or 6")
        if self.discriminant == 0:
            raise ZeroDiscriminant(f"curve {self.describe()} is singular")
        if not self.label:
            object.__setattr__(self, "label", self.describe())

    @property
    def genus(self) -> int:
        return 1 if self.kind is CurveKind.ELLIPTIC else 2

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.coeffs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        if self.kind is CurveKind.ELLIPTIC:
            b2, b4, b6, b8 = self.b_invariants
            return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        return discriminant(list(self.coeffs))

    def describe(self) -> str:
        return f"{self.kind.value}:[{','.join(str(c) for c in self.coeffs)}]"


@dataclass
class ScanRecord:
    p: int
    status: Status
    frobenius: WeilPolynomial | None = None
    polygon: NewtonPolygon | None = None
    label: ClassLabel | None = None
    audit: AuditRecord | None = None
    min_wedge_slope: Fraction | None = None
    twist_integral: bool | None = None
    trace: int | None = None

    @property
    def good(self) -> bool:
        return self.status is Status.GOOD

    @property
    def trace_div_p(self) -> bool | None:
        return None if self.trace is None else self.trace % self.p == 0

    @property
    def p_rank(self) -> int | None:
        return None if self.polygon is None else p_rank(self.polygon)


@dataclass
class SelfProductRow:
    p: int
    polygon: NewtonPolygon
    by_polygon: Reduction
    by_rank: Reduction

    @property
    def agrees(self) -> bool:
        return self.by_polygon is self.by_rank


@dataclass
class SelfProductReport:
    rows: list[SelfProductRow] = field(default_factory=list)

    @property
    def counts(self) -> Counter:
        return Counter(r.by_polygon for r in self.rows)

    def frequency(self, kind: Reduction) -> Fraction:
        return Fraction(self.counts[kind], len(self.rows)) if self.rows else Fraction(0)

    @property
    def hodge_witt_frequency(self) -> Fraction:
        if not self.rows:
            return Fraction(0)
        return Fraction(sum(1 for r in self.rows if r.by_polygon is not Reduction.NON_HODGE_WITT), len(self.rows))


@dataclass
class DensityReport:
    label: str
    primes_scanned: int
    good: int
    counts: dict[Reduction, int]
    supersingular: int
    self_product: SelfProductReport

    def frequency(self, kind: Reduction) -> Fraction:
        return Fraction(self.counts.get(kind, 0), self.good) if self.good else Fraction(0)

    @property
    def supersingular_frequency(self) -> Fraction:
        return Fraction(self.supersingular, self.good) if self.good else Fraction(0)


def bad_primes(curve: CurveSpec) -> set[int]:
    """Primes dividing the discriminant (and 2 * lc(f) for genus 2)."""
    disc = curve.discriminant
    if disc == 0:
        raise ZeroDiscriminant("singular curve")
    if curve.kind is CurveKind.ELLIPTIC:
        return prime_factors(disc)
    return prime_factors(2 * disc * curve.coeffs[0])


def _square_table(p: int) -> np.ndarray:
    """chi[x] for x in [0, p): quadratic character mod p."""
    chi = np.full(p, -1, dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)
    chi[(xs * xs) % p] = 1
    chi[0] = 0
    return chi


def _horner_mod(coeffs_desc, xs: np.ndarray, p: int) -> np.ndarray:
    acc = np.zeros_like(xs)
    for c in coeffs_desc:
        acc = (acc * xs + (c % p)) % p
    return acc


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise HWSlopeError(f"{p} is not prime")
    if p > MAX_PRIME:
        raise HWSlopeError(f"p = {p} exceeds the supported bound {MAX_PRIME}")


def count_points_ec(curve: CurveSpec, p: int) -> int:
    """#E(F_p) including infinity, via y -> y + (a1 x + a3)/2 and a character sum."""
    _check_prime(p)
    if p < 5:
        raise SmallPrime(f"p = {p} is skipped for elliptic curves")
    if p in bad_primes(curve):
        raise BadPrime(f"{curve.label} has bad reduction at {p}")
    b2, b4, b6, _ = curve.b_invariants
    chi = _square_table(p)
    xs = np.arange(p, dtype=np.int64)
    values = _horner_mod([4, b2, 2 * b4, b6], xs, p)
    return p + 1 + int(chi[values].sum())


def least_nonresidue(p: int) -> int:
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            return r
    raise ValueError(f"no quadratic non-residue mod {p}")


def _hyp2_fp2_char_sum(coeffs_desc, p: int) -> int:
    """Sum over x in F_p[u]/(u^2 - r) of chi(f(x)), with chi(z) = chi_p(norm z)."""
    r = least_nonresidue(p)
    chi = _square_table(p)
    cs = [c % p for c in coeffs_desc]
    total = 0
    rows = max(1, _BLOCK // p)
    a = np.arange(p, dtype=np.int64)[None, :]
    for start in range(0, p, rows):
        b = np.arange(start, min(p, start + rows), dtype=np.int64)[:, None]
        a_full = np.broadcast_to(a, (b.shape[0], p))
        b_full = np.broadcast_to(b, (b.shape[0], p))
        re = np.zeros((b.shape[0], p), dtype=np.int64)
        im = np.zeros_like(re)
        for c in cs:
            # (re + im u)(a + b u) + c
            new_re = (re * a_full % p + r * (im * b_full % p) + c) % p
            new_im = (re * b_full % p + im * a_full % p) % p
            re, im = new_re, new_im
        norm = (re * re % p - r * (im * im % p)) % p
        total += int(chi[norm].sum())
    return total


def count_points_hyp2(curve: CurveSpec, p: int) -> tuple[int, int]:
    """(#C(F_p), #C(F_{p^2})) on the smooth model of y^2 = f(x)."""
    _check_prime(p)
    if p == 2:
        raise EvenPrime("p = 2 is skipped for genus-2 curves")
    if p in bad_primes(curve):
        raise BadPrime(f"{curve.label} has bad reduction at {p}")
    chi = _square_table(p)
    xs = np.arange(p, dtype=np.int64)
    s1 = int(chi[_horner_mod(curve.coeffs, xs, p)].sum())
    if curve.degree == 5:
        inf1 = inf2 = 1
    else:
        inf1 = 1 + int(chi[curve.coeffs[0] % p])
        inf2 = 2
    n1 = p + s1 + inf1
    n2 = p * p + _hyp2_fp2_char_sum(curve.coeffs, p) + inf2
    return n1, n2


def frobenius_poly_ec(a_p: int, p: int) -> WeilPolynomial:
    if a_p * a_p > 4 * p:
        raise HasseViolation(f"|a_p| = {abs(a_p)} exceeds 2 sqrt({p})")
    return validate_weil([p, -a_p, 1], p, 1, 1)


def frobenius_poly_hyp2(n1: int, n2: int, p: int) -> WeilPolynomial:
    s1 = p + 1 - n1
    s2 = p * p + 1 - n2
    if (s1 * s1 - s2) % 2:
        raise NonIntegralCoefficient(f"s1^2 - s2 = {s1 * s1 - s2} is odd at p = {p}")
    a1 = -s1
    a2 = (s1 * s1 - s2) // 2
    if a1 * a1 > 16 * p or abs(a2) > 6 * p:
        raise HasseViolation(f"coefficients ({a1}, {a2}) break the Weil bounds at p = {p}")
    return validate_weil([p * p, p * a1, a2, a1, 1], p, 1, 2)


def analyze_frobenius(f: WeilPolynomial) -> ScanRecord:
    """Classification and Lambda^g data for one good prime's polynomial."""
    polygon = polygon_of(f)
    wedge = wedge_char_poly(f, f.g)
    return ScanRecord(
        p=f.p,
        status=Status.GOOD,
        frobenius=f,
        polygon=polygon,
        label=classify(polygon),
        audit=audit_prime(f) if f.g >= 2 else None,
        min_wedge_slope=exterior_slopes(polygon, f.g).pairs[0][0],
        twist_integral=is_integral(tate_twist(wedge)),
        trace=wedge.trace,
    )


def frobenius_at(curve: CurveSpec, p: int) -> WeilPolynomial:
    if curve.kind is CurveKind.ELLIPTIC:
        return frobenius_poly_ec(p + 1 - count_points_ec(curve, p), p)
    return frobenius_poly_hyp2(*count_points_hyp2(curve, p), p)


def scan_prime(curve: CurveSpec, p: int, bad: set[int] | None = None) -> ScanRecord:
    bad = bad_primes(curve) if bad is None else bad
    if p in bad:
        return ScanRecord(p, Status.BAD)
    if (curve.kind is CurveKind.ELLIPTIC and p < 5) or p == 2:
        return ScanRecord(p, Status.SKIPPED)
    return analyze_frobenius(frobenius_at(curve, p))


def _scan_task(args):
    curve, p, bad = args
    return scan_prime(curve, p, bad)


def scan_records(curve: CurveSpec, p_min: int, p_max: int, jobs: int = 1) -> list[ScanRecord]:
    """One record per prime in [p_min, p_max], in prime order regardless of ``jobs``."""
    if p_min > p_max:
        raise HWSlopeError(f"empty prime range [{p_min}, {p_max}]")
    if p_max > MAX_PRIME:
        raise HWSlopeError(f"p_max exceeds the supported bound {MAX_PRIME}")
    bad = bad_primes(curve)
    primes = primes_between(p_min, p_max)
    log.info("scanning %s over %d primes", curve.label, len(primes))
    tasks = [(curve, p, bad) for p in primes]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [_scan_task(t) for t in tasks]


def self_product_report(records) -> SelfProductReport:
    """Classify X x X at each good prime, from the product polygon and from doubled p-rank."""
    report = SelfProductReport()
    for rec in records:
        if not rec.good:
            continue
        prod = product_polygon(rec.polygon, rec.polygon)
        report.rows.append(
            SelfProductRow(
                p=rec.p,
                polygon=prod,
                by_polygon=classify(prod).kind,
                by_rank=classify_by_rank(2 * rec.polygon.g, 2 * p_rank(rec.polygon)),
            )
        )
    return report


def density_report(label: str, records) -> DensityReport:
    good = [r for r in records if r.good]
    counts = Counter(r.label.kind for r in good)
    return DensityReport(
        label=label,
        primes_scanned=len(records),
        good=len(good),
        counts={k: counts.get(k, 0) for k in Reduction},
        supersingular=sum(1 for r in good if r.label.supersingular),
        self_product=self_product_report(good),
    )


def scan(curve: CurveSpec, p_min: int, p_max: int, jobs: int = 1):
    """Scan a prime range; returns (records, density report)."""
    records = scan_records(curve, p_min, p_max, jobs=jobs)
    return records, density_report(curve.label, records)
