"""Slope calculus for abelian varieties: Newton polygons, Weil polynomials, reduction scans."""

from .slope_calculus import (
    ClassLabel,
    EstimateReport,
    NewtonPolygon,
    Reduction,
    SlopeMultiset,
    classify,
    enumerate_admissible,
    exterior_slopes,
    make_polygon,
    min_slope,
    mult_identity_check,
    p_rank,
    product_polygon,
    verify_slope_estimate,
)
from .weil_poly import (
    AuditRecord,
    TwistedPolynomial,
    WeilPolynomial,
    all_slopes_ge_one,
    is_integral,
    newton_polygon_of,
    slope_window,
    tate_twist,
    twist_coupled_audit,
    validate_weil,
    wedge_char_poly,
)
from .scanner import CurveKind, CurveSpec, DensityReport, ScanRecord, bad_primes, scan

__version__ = "0.1.0"
