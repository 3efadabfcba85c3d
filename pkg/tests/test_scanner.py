import pytest

from hwslope.errors import (
    BadPrime,
    CurveError,
    EvenPrime,
    HasseViolation,
    NonIntegralCoefficient,
    SmallPrime,
    ZeroDiscriminant,
)
from hwslope.intmath import primes_between
from hwslope.scanner import (
    CurveKind,
    CurveSpec,
    Status,
    _hyp2_fp2_char_sum,
    _square_table,
    bad_primes,
    count_points_ec,
    count_points_hyp2,
    frobenius_poly_ec,
    frobenius_poly_hyp2,
    least_nonresidue,
    scan,
    scan_records,
    self_product_report,
)
from hwslope.slope_calculus import Reduction, make_polygon
from hwslope.weil_poly import newton_polygon_of

from oracles import (
    brute_disc_elliptic,
    count_ec_pairs,
    count_hyp_fp2_pairs,
    count_hyp_fp_pairs,
    fp2_char_by_power,
)

CM = CurveSpec(CurveKind.ELLIPTIC, (0, 0, 0, -1, 0), "y^2=x^3-x")
E11 = CurveSpec(CurveKind.ELLIPTIC, (0, -1, 1, 0, 0), "y^2+y=x^3-x^2")
E37 = CurveSpec(CurveKind.ELLIPTIC, (0, 0, 1, -1, 0), "y^2+y=x^3-x")
X5 = CurveSpec(CurveKind.HYPERELLIPTIC2, (1, 0, 0, 0, 0, 1), "y^2=x^5+1")
SEXTIC = CurveSpec(CurveKind.HYPERELLIPTIC2, (1, 0, 0, 0, 0, 1, 1), "y^2=x^6+x+1")
QUINTIC = CurveSpec(CurveKind.HYPERELLIPTIC2, (1, 0, 0, 0, -1, 1), "y^2=x^5-x+1")


class TestCurveSpec:
    def test_singular(self):
        with pytest.raises(ZeroDiscriminant):
            CurveSpec(CurveKind.ELLIPTIC, (0, 0, 0, 0, 0))
        with pytest.raises(ZeroDiscriminant):
            CurveSpec(CurveKind.HYPERELLIPTIC2, (1, -2, 1, 0, 0, 0))

    def test_shape(self):
        with pytest.raises(CurveError):
            CurveSpec(CurveKind.ELLIPTIC, (0, 0, 1))
        with pytest.raises(CurveError):
            CurveSpec(CurveKind.HYPERELLIPTIC2, (0, 1, 0, 0, 0, 1))

    @pytest.mark.parametrize("curve", [CM, E11, E37, CurveSpec(CurveKind.ELLIPTIC, (1, 2, 3, 4, 5))])
    def test_discriminant_oracle(self, curve):
        assert curve.discriminant == brute_disc_elliptic(curve.coeffs)


def test_bad_primes():
    assert bad_primes(E11) == {11}
    assert bad_primes(E37) == {37}
    assert bad_primes(CM) == {2}
    assert {2, 5} <= bad_primes(X5)


class TestEllipticCounts:
    def test_cm_small(self):
        assert count_points_ec(CM, 5) == 8
        assert count_points_ec(CM, 7) == 8

    def test_e11_at_5(self):
        assert 5 + 1 - count_points_ec(E11, 5) == 1

    @pytest.mark.parametrize("curve", [CM, E11, E37])
    def test_against_pair_enumeration(self, curve):
        for p in primes_between(5, 100):
            if p in bad_primes(curve):
                continue
            assert count_points_ec(curve, p) == count_ec_pairs(curve.coeffs, p)

    def test_policy(self):
        with pytest.raises(SmallPrime):
            count_points_ec(E11, 3)
        with pytest.raises(BadPrime):
            count_points_ec(E11, 11)


class TestHyperellipticCounts:
    def test_even_prime(self):
        with pytest.raises(EvenPrime):
            count_points_hyp2(X5, 2)

    def test_bad(self):
        with pytest.raises(BadPrime):
            count_points_hyp2(X5, 5)

    def test_x5_at_3(self):
        # x in {0,1,2}: f = 1, 2, 0 -> 2 + 0 + 1 affine points, plus one at infinity
        assert count_points_hyp2(X5, 3)[0] == 4

    @pytest.mark.parametrize("curve", [X5, SEXTIC, QUINTIC])
    def test_against_pair_enumeration(self, curve):
        bad = bad_primes(curve)
        for p in primes_between(3, 100):
            if p in bad:
                continue
            n1, n2 = count_points_hyp2(curve, p)
            assert n1 == count_hyp_fp_pairs(list(curve.coeffs), p)
            assert n2 == count_hyp_fp2_pairs(list(curve.coeffs), p)
            frobenius_poly_hyp2(n1, n2, p)

    @pytest.mark.parametrize("p", [3, 7, 11, 13])
    def test_norm_character_matches_exponentiation(self, p):
        r = least_nonresidue(p)
        coeffs = [1, 0, 0, 0, 2, 1]
        brute = 0
        for a in range(p):
            for b in range(p):
                re, im = 0, 0
                for c in coeffs:
                    re, im = (re * a + r * im * b + c) % p, (re * b + im * a) % p
                brute += fp2_char_by_power((re, im), p, r)
        assert _hyp2_fp2_char_sum(coeffs, p) == brute

    def test_block_boundaries(self):
        import hwslope.scanner as sc

        saved = sc._BLOCK
        try:
            sc._BLOCK = 7 * 3
            small = sc._hyp2_fp2_char_sum([1, 0, 0, 0, 0, 1], 7)
        finally:
            sc._BLOCK = saved
        assert small == sc._hyp2_fp2_char_sum([1, 0, 0, 0, 0, 1], 7)

    def test_square_table(self):
        chi = _square_table(7)
        assert list(chi) == [0, 1, 1, -1, 1, -1, -1]


class TestFrobeniusPolys:
    def test_ec(self):
        assert frobenius_poly_ec(1, 5).coeffs == (5, -1, 1)
        f = frobenius_poly_ec(0, 7)
        assert f.coeffs == (7, 0, 1)
        assert newton_polygon_of(f.coeffs, 7).pairs == make_polygon([("1/2", 2)]).pairs
        assert newton_polygon_of(frobenius_poly_ec(-2, 5).coeffs, 5).pairs == make_polygon([(0, 1), (1, 1)]).pairs

    def test_hasse(self):
        with pytest.raises(HasseViolation):
            frobenius_poly_ec(5, 5)

    def test_hyp2_supersingular_shape(self):
        p = 7
        # s1 = 0, s2 = 2p
        f = frobenius_poly_hyp2(p + 1, p * p + 1 - 2 * p, p)
        assert f.coeffs == (49, 0, -7, 0, 1)
        assert newton_polygon_of(f.coeffs, p).pairs == make_polygon([("1/2", 4)]).pairs

    def test_hyp2_parity(self):
        with pytest.raises(NonIntegralCoefficient):
            frobenius_poly_hyp2(8, 51, 7)


class TestScan:
    def test_record_statuses(self):
        recs = scan_records(E11, 2, 20)
        assert [(r.p, r.status) for r in recs] == [
            (2, Status.SKIPPED),
            (3, Status.SKIPPED),
            (5, Status.GOOD),
            (7, Status.GOOD),
            (11, Status.BAD),
            (13, Status.GOOD),
            (17, Status.GOOD),
            (19, Status.GOOD),
        ]

    def test_cm_supersingular_mod_4_small(self):
        recs, _ = scan(CM, 2, 1000)
        for r in recs:
            if r.good:
                assert r.label.supersingular == (r.p % 4 == 3)
                # cross-check a_p by brute force on the small range
                if r.p <= 100:
                    assert r.frobenius.trace == r.p + 1 - count_ec_pairs(CM.coeffs, r.p)

    def test_x5_polygons(self):
        recs, rep = scan(X5, 3, 200)
        for r in recs:
            if r.good:
                assert r.polygon.is_symmetric()
                from hwslope.slope_calculus import mult_identity_check

                assert mult_identity_check(r.polygon)
                assert r.audit is not None
        assert rep.good == sum(1 for r in recs if r.good)

    def test_parallel_matches_serial(self):
        a = scan_records(X5, 3, 120)
        b = scan_records(X5, 3, 120, jobs=3)
        assert a == b

    def test_bad_range(self):
        from hwslope.errors import HWSlopeError

        with pytest.raises(HWSlopeError):
            scan_records(E11, 10, 5)


class TestSelfProduct:
    def _record(self, text):
        from hwslope.scanner import ScanRecord
        from hwslope.formats import parse_polygon
        from hwslope.slope_calculus import classify

        np = parse_polygon(text)
        return ScanRecord(p=7, status=Status.GOOD, polygon=np, label=classify(np))

    def test_hw_record(self):
        row = self_product_report([self._record("0:1,1/2:2,1:1")]).rows[0]
        assert str(row.polygon) == "0:2,1/2:4,1:2" and row.by_polygon is Reduction.NON_HODGE_WITT
        assert row.agrees

    def test_ordinary_record(self):
        row = self_product_report([self._record("0:2,1:2")]).rows[0]
        assert row.by_polygon is Reduction.ORDINARY

    def test_supersingular_record(self):
        rows = self_product_report([self._record("1/2:4")]).rows
        assert rows[0].by_polygon is Reduction.NON_HODGE_WITT
        assert str(rows[0].polygon) == "1/2:8"
