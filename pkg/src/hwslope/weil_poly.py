"""Frobenius characteristic polynomials, their Newton polygons and Tate twists.

Coefficient lists are stored constant term first: ``coeffs[j]`` is the
coefficient of ``t**j``.  The text formats (see :mod:`hwslope.formats`) use
the opposite, leading-first, order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import (
    AsymmetricPolygon,
    FunctionalEquationFailed,
    NotMonic,
    OddDegree,
    WedgeDegreeOutOfRange,
    ZeroConstantTerm,
)
from .intmath import charpoly_berkowitz, det_bareiss, require_prime, valuation
from .slope_calculus import (
    ClassLabel,
    NewtonPolygon,
    Reduction,
    SlopeMultiset,
    classify,
    make_polygon,
)


@dataclass(frozen=True)
class WeilPolynomial:
    coeffs: tuple[int, ...]
    p: int
    n: int = 1
    weight: int = 1

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def g(self) -> int:
        """Half the degree; the dimension when this is weight-1 data."""
        return self.degree // 2

    @property
    def trace(self) -> int:
        return -self.coeffs[-2]

    def __str__(self):
        return poly_to_str(self.coeffs)


@dataclass(frozen=True)
class TwistedPolynomial:
    """f(q t) / q^N for a Weil polynomial f of degree N, with rational coefficients."""

    coeffs: tuple[Fraction, ...]
    p: int
    n: int = 1
    weight: int = -1

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def trace(self) -> Fraction:
        return -self.coeffs[-2]

    def __str__(self):
        return poly_to_str(self.coeffs)


@dataclass
class AuditRecord:
    p: int
    n: int
    g: int
    property_S: bool
    property_E: bool
    twisted_window: bool
    trace: int
    trace_divisible: bool
    class_label: ClassLabel
    min_wedge_slope: Fraction
    excluded: bool = False

    @property
    def indiv_check(self) -> bool | None:
        """p does not divide the Lambda^g trace; only asserted at ordinary primes."""
        if self.class_label.kind is not Reduction.ORDINARY:
            return None
        return not self.trace_divisible


@dataclass
class AuditSummary:
    g: int
    records: list[AuditRecord] = field(default_factory=list)

    @property
    def audited(self) -> list[AuditRecord]:
        return [r for r in self.records if not r.excluded]

    @property
    def consistent(self) -> bool:
        """Property S holds at every audited prime (data fit a type (g, g-2) system)."""
        return all(r.property_S for r in self.audited)

    @property
    def failing_primes(self) -> list[int]:
        return [r.p for r in self.audited if not r.property_S]


def poly_to_str(coeffs) -> str:
    terms = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j]
        if c == 0:
            continue
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if j == 0:
            body = str(mag)
        else:
            var = "t" if j == 1 else f"t^{j}"
            body = var if mag == 1 else f"{mag}*{var}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _fe_holds(coeffs, q: int, weight: int, sign: int | None) -> bool:
    """t^N f(q^w / t) == a_0 f(t), with a_0 = sign * q^(wN/2) when sign is given."""
    N = len(coeffs) - 1
    a0 = coeffs[0]
    if sign is not None:
        if (weight * N) % 2 or a0 != sign * q ** (weight * N // 2):
            return False
    elif a0 * a0 != q ** (weight * N):
        return False
    qw = q**weight
    return all(coeffs[k] * qw**k == a0 * coeffs[N - k] for k in range(N + 1))


def validate_weil(coeffs, p: int, n: int = 1, g: int | None = None) -> WeilPolynomial:
    """Check a weight-1 Frobenius polynomial of an abelian variety over F_q.

    Purity is certified structurally: a_j == q^(g-j) a_(2g-j) for all j and a
    symmetric Newton polygon.  No complex roots are computed.
    """
    coeffs = tuple(int(c) for c in coeffs)
    require_prime(p)
    if not coeffs or coeffs[-1] != 1:
        raise NotMonic(f"leading coefficient of {poly_to_str(coeffs)} is not 1")
    N = len(coeffs) - 1
    if N == 0 or N % 2:
        raise OddDegree(f"degree {N} is not a positive even number")
    if g is not None and N != 2 * g:
        raise OddDegree(f"degree {N} does not equal 2g = {2 * g}")
    g = N // 2
    q = p**n
    for j in range(g + 1):
        if coeffs[j] != q ** (g - j) * coeffs[2 * g - j]:
            raise FunctionalEquationFailed(
                f"a_{j} = {coeffs[j]} but q^{g - j} a_{2 * g - j} = {q ** (g - j) * coeffs[2 * g - j]}"
            )
    f = WeilPolynomial(coeffs, p, n, 1)
    if not newton_polygon_of(coeffs, p, n).is_symmetric(1):
        raise AsymmetricPolygon(f"Newton polygon of {f} is not symmetric")
    return f


def check_weight(f: WeilPolynomial) -> bool:
    """Functional equation for weight-w data (sign of the constant term free)."""
    sign = 1 if f.weight == 1 else None
    return _fe_holds(f.coeffs, f.q, f.weight, sign)


def _lower_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon_of(coeffs, p: int, n: int = 1) -> SlopeMultiset:
    """Root valuations (normalized so v(q) = 1) from the lower convex hull of (j, v_p(a_j))."""
    require_prime(p)
    coeffs = list(coeffs)
    if not coeffs or coeffs[0] == 0:
        raise ZeroConstantTerm("constant coefficient must be non-zero")
    while coeffs[-1] == 0:
        coeffs.pop()
    points = []
    for j, c in enumerate(coeffs):
        v = valuation(c, p)
        if v is not None:
            points.append((j, v))
    hull = _lower_hull(points)
    pairs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        pairs.append((Fraction(y1 - y2, (x2 - x1) * n), x2 - x1))
    return SlopeMultiset(tuple(pairs))


def polygon_of(f: WeilPolynomial) -> NewtonPolygon:
    """The weight-1 Newton polygon of f as a validated abelian-variety polygon."""
    return make_polygon(newton_polygon_of(f.coeffs, f.p, f.n).pairs)


def all_slopes_ge_one(f: WeilPolynomial) -> bool:
    """q^(N-j) divides a_j for every j, i.e. every root is q times an algebraic integer."""
    N, q = f.degree, f.q
    return all(c % q ** (N - j) == 0 for j, c in enumerate(f.coeffs))


def tate_twist(f: WeilPolynomial) -> TwistedPolynomial:
    """Divide every root by q: coefficient j becomes a_j q^(j-N)."""
    N, q = f.degree, f.q
    coeffs = tuple(Fraction(c, q ** (N - j)) for j, c in enumerate(f.coeffs))
    return TwistedPolynomial(coeffs, f.p, f.n, f.weight - 2)


def is_integral(f) -> bool:
    return all(Fraction(c).denominator == 1 for c in f.coeffs)


def slope_window(coeffs, p: int, n: int, lo, hi) -> bool:
    """True iff every Newton-polygon slope lies in [lo, hi]."""
    sm = newton_polygon_of(coeffs, p, n)
    lo, hi = Fraction(lo), Fraction(hi)
    return all(lo <= s <= hi for s, _ in sm.pairs)


def companion_matrix(coeffs) -> list[list[int]]:
    """Integer companion matrix whose characteristic polynomial is the monic input."""
    N = len(coeffs) - 1
    m = [[0] * N for _ in range(N)]
    for r in range(1, N):
        m[r][r - 1] = 1
    for r in range(N):
        m[r][N - 1] = -coeffs[r]
    return m


def exterior_power_matrix(m: list[list[int]], i: int) -> list[list[int]]:
    """Matrix of the i-th exterior power on the lexicographic basis of i-subsets."""
    subsets = list(combinations(range(len(m)), i))
    return [
        [det_bareiss([[m[r][c] for c in cols] for r in rows]) for cols in subsets]
        for rows in subsets
    ]


def wedge_char_poly(f: WeilPolynomial, i: int) -> WeilPolynomial:
    """Characteristic polynomial of Frobenius on the i-th exterior power (weight i)."""
    N = f.degree
    if not 1 <= i <= N:
        raise WedgeDegreeOutOfRange(f"wedge degree {i} outside [1, {N}]")
    if i == 1:
        return f
    desc = charpoly_berkowitz(exterior_power_matrix(companion_matrix(f.coeffs), i))
    return WeilPolynomial(tuple(reversed(desc)), f.p, f.n, f.weight * i)


def audit_prime(f: WeilPolynomial, excluded: bool = False) -> AuditRecord:
    g = f.g
    if g < 2:
        raise WedgeDegreeOutOfRange(f"the window [1, g-1] is empty for g = {g}")
    wedge = wedge_char_poly(f, g)
    hull = newton_polygon_of(wedge.coeffs, f.p, f.n)
    twisted = tate_twist(wedge)
    return AuditRecord(
        p=f.p,
        n=f.n,
        g=g,
        property_S=all(1 <= s <= g - 1 for s, _ in hull.pairs),
        property_E=is_integral(twisted),
        twisted_window=slope_window(twisted.coeffs, f.p, f.n, 0, g - 2),
        trace=wedge.trace,
        trace_divisible=wedge.trace % f.p == 0,
        class_label=classify(polygon_of(f)),
        min_wedge_slope=hull.pairs[0][0],
        excluded=excluded,
    )


def twist_coupled_audit(entries, g: int, exclude=()) -> AuditSummary:
    """Audit per-prime Frobenius data against the slope window of a type (g, g-2) system.

    ``entries`` holds one validated weight-1 polynomial per prime.  Primes in
    ``exclude`` are audited but do not count toward the summary verdict.
    """
    if g < 2:
        raise WedgeDegreeOutOfRange(f"the window [1, g-1] is empty for g = {g}")
    exclude = set(exclude)
    summary = AuditSummary(g=g)
    for f in entries:
        if f.g != g:
            raise OddDegree(f"entry at p={f.p} has degree {f.degree}, expected {2 * g}")
        summary.records.append(audit_prime(f, excluded=f.p in exclude))
    return summary
