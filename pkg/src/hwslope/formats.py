"""Text, JSON and CSV encodings for polygons, polynomials, curves and scans.

Polynomial text is leading coefficient first (``1,-1,5`` is t^2 - t + 5).
Numbers that may grow large are written as strings in JSON.
"""

from __future__ import annotations

import csv
import io
import json
import re
from fractions import Fraction

from .errors import ParseError
from .scanner import CurveKind, CurveSpec, DensityReport, ScanRecord, Status, analyze_frobenius
from .slope_calculus import NewtonPolygon, Reduction, SlopeMultiset, make_polygon
from .weil_poly import AuditRecord, AuditSummary, validate_weil

_RATIONAL = re.compile(r"\s*[+-]?\d+(/\d+)?\s*$")

SCAN_COLUMNS = [
    "p",
    "status",
    "coeffs",
    "p_rank",
    "class",
    "supersingular",
    "min_wedge_slope",
    "twist_integral",
    "trace",
    "trace_div_p",
]


def parse_rational(text: str, position: int | None = None, line: int | None = None) -> Fraction:
    if not _RATIONAL.match(text):
        raise ParseError(f"not a rational number: {text!r}", text, position, line)
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", text, position, line) from None


def _split_items(text: str, sep: str = ","):
    """Yield (item, start offset) for each separated item."""
    pos = 0
    for item in text.split(sep):
        yield item, pos
        pos += len(item) + len(sep)


def parse_polygon(text: str, strict: bool = True) -> NewtonPolygon:
    """``0:1,1/2:4,1:1`` -> polygon."""
    pairs = []
    for item, pos in _split_items(text.strip()):
        if item.count(":") != 1:
            raise ParseError(f"expected slope:multiplicity, got {item!r}", text, pos)
        slope_txt, mult_txt = item.split(":")
        slope = parse_rational(slope_txt, pos)
        mult_pos = pos + len(slope_txt) + 1
        if not mult_txt.strip().isdigit():
            raise ParseError(f"multiplicity must be a positive integer, got {mult_txt!r}", text, mult_pos)
        pairs.append((slope, int(mult_txt)))
    return make_polygon(pairs, strict=strict)


def format_polygon(sm: NewtonPolygon | SlopeMultiset) -> str:
    return ",".join(f"{s}:{m}" for s, m in sm.pairs)


def polygon_to_json(np: NewtonPolygon) -> dict:
    return {"g": np.g, "pairs": [[str(s), m] for s, m in np.pairs]}


def polygon_from_json(obj: dict, strict: bool = True) -> NewtonPolygon:
    poly = make_polygon([(Fraction(str(s)), int(m)) for s, m in obj["pairs"]], strict=strict)
    if "g" in obj and int(obj["g"]) != poly.g:
        raise ParseError(f"g = {obj['g']} does not match total multiplicity {2 * poly.g}")
    return poly


def multiset_to_json(sm: SlopeMultiset) -> dict:
    return {"i": sm.i, "pairs": [[str(s), m] for s, m in sm.pairs]}


def parse_coeffs(text: str, line: int | None = None, sep: str = ",") -> list[Fraction]:
    """Leading-first coefficient list; returns constant-term-first Fractions."""
    text = text.strip()
    if not text:
        raise ParseError("empty coefficient list", text, 0, line)
    out = [parse_rational(item, pos, line) for item, pos in _split_items(text, sep)]
    return out[::-1]


def integer_coeffs(coeffs, text: str = "", line: int | None = None) -> list[int]:
    for c in coeffs:
        if c.denominator != 1:
            raise ParseError(f"coefficient {c} is not an integer", text, None, line)
    return [int(c) for c in coeffs]


def format_coeffs(coeffs, sep: str = ",") -> str:
    """Constant-term-first sequence -> leading-first text."""
    return sep.join(str(c) for c in reversed(coeffs))


def weil_to_json(f) -> dict:
    return {"coeffs": [str(c) for c in reversed(f.coeffs)], "p": f.p, "n": f.n, "g": f.g}


def weil_from_json(obj: dict):
    coeffs = [int(c) for c in reversed(obj["coeffs"])]
    return validate_weil(coeffs, int(obj["p"]), int(obj.get("n", 1)), obj.get("g") and int(obj["g"]))


def parse_curve(text: str, label: str = "") -> CurveSpec:
    """``ec:[a1,a2,a3,a4,a6]`` or ``hyp2:[c5,...,c0]`` (seven entries for degree 6)."""
    m = re.fullmatch(r"\s*(ec|hyp2)\s*:\s*\[(.*)\]\s*", text)
    if not m:
        raise ParseError("curve must look like ec:[...] or hyp2:[...]", text, 0)
    kind = CurveKind(m.group(1))
    body_start = m.start(2)
    body = m.group(2)
    coeffs = []
    for item, pos in _split_items(body):
        if not re.fullmatch(r"\s*[+-]?\d+\s*", item):
            raise ParseError(f"curve coefficient must be an integer, got {item!r}", text, body_start + pos)
        coeffs.append(int(item))
    return CurveSpec(kind, tuple(coeffs), label or f"{kind.value}:[{','.join(map(str, coeffs))}]")


def _bool(v) -> str:
    return "" if v is None else ("true" if v else "false")


def record_row(rec: ScanRecord) -> dict[str, str]:
    """One scan record as CSV/JSON field strings."""
    if not rec.good:
        row = dict.fromkeys(SCAN_COLUMNS, "")
        row.update(p=str(rec.p), status=rec.status.value)
        return row
    return {
        "p": str(rec.p),
        "status": rec.status.value,
        "coeffs": format_coeffs(rec.frobenius.coeffs, ";"),
        "p_rank": str(rec.p_rank),
        "class": rec.label.kind.value,
        "supersingular": _bool(rec.label.supersingular),
        "min_wedge_slope": str(rec.min_wedge_slope),
        "twist_integral": _bool(rec.twist_integral),
        "trace": str(rec.trace),
        "trace_div_p": _bool(rec.trace_div_p),
    }


def scan_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(record_row(rec))
    return buf.getvalue()


def scan_to_json(label: str, records) -> str:
    rows = []
    for rec in records:
        row = record_row(rec)
        row["coeffs"] = row["coeffs"].split(";") if row["coeffs"] else []
        rows.append(row)
    return json.dumps({"curve": label, "records": rows}, indent=2) + "\n"


def _record_from_row(row: dict, line: int) -> ScanRecord:
    try:
        p = int(row["p"])
        status = Status(row["status"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad p/status field: {exc}", line=line) from None
    if status is not Status.GOOD:
        return ScanRecord(p, status)
    coeffs_field = row["coeffs"]
    text = ";".join(coeffs_field) if isinstance(coeffs_field, list) else coeffs_field
    coeffs = integer_coeffs(parse_coeffs(text, line, sep=";"), text, line)
    try:
        rec = analyze_frobenius(validate_weil(coeffs, p))
    except ValueError as exc:
        raise ParseError(f"invalid Frobenius polynomial: {exc}", text, None, line) from None
    stored = {k: row[k] for k in SCAN_COLUMNS if k != "coeffs"}
    recomputed = {k: v for k, v in record_row(rec).items() if k != "coeffs"}
    for key, value in stored.items():
        if str(value) != recomputed[key]:
            raise ParseError(
                f"column {key!r} is {value!r} but the polynomial gives {recomputed[key]!r}",
                line=line,
            )
    return rec


def read_scan(text: str) -> tuple[str | None, list[ScanRecord]]:
    """Parse CSV or JSON scan output; every good row is recomputed and cross-checked."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, position=exc.colno) from None
        return obj.get("curve"), [_record_from_row(r, i + 1) for i, r in enumerate(obj["records"])]
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != SCAN_COLUMNS:
        raise ParseError(f"unexpected CSV header {reader.fieldnames}", line=1)
    return None, [_record_from_row(row, i + 2) for i, row in enumerate(reader)]


def audit_record_to_json(rec: AuditRecord) -> dict:
    return {
        "p": str(rec.p),
        "n": str(rec.n),
        "g": str(rec.g),
        "property_S": rec.property_S,
        "property_E": rec.property_E,
        "twisted_window": rec.twisted_window,
        "trace": str(rec.trace),
        "trace_divisible": rec.trace_divisible,
        "indiv_check": rec.indiv_check,
        "class": rec.class_label.kind.value,
        "supersingular": rec.class_label.supersingular,
        "min_wedge_slope": str(rec.min_wedge_slope),
        "excluded": rec.excluded,
    }


def audit_to_json(summary: AuditSummary) -> dict:
    audited = summary.audited
    ordinary = [r for r in audited if r.indiv_check is not None]
    return {
        "records": [audit_record_to_json(r) for r in summary.records],
        "summary": {
            "g": str(summary.g),
            "primes_audited": str(len(audited)),
            "property_S_everywhere": summary.consistent,
            "consistent_with_twist_coupled_system": summary.consistent,
            "property_S_failures": [str(p) for p in summary.failing_primes],
            "ordinary_primes": str(len(ordinary)),
            "indiv_holds_at_all_ordinary": all(r.indiv_check for r in ordinary),
        },
    }


def _freq(value: Fraction) -> dict:
    return {"exact": str(value), "decimal": f"{float(value):.6f}"}


def density_to_json(rep: DensityReport) -> dict:
    classes = {
        kind.value: {"count": str(rep.counts.get(kind, 0)), "frequency": _freq(rep.frequency(kind))}
        for kind in Reduction
    }
    classes["supersingular"] = {
        "count": str(rep.supersingular),
        "frequency": _freq(rep.supersingular_frequency),
    }
    sp = rep.self_product
    product = {
        kind.value: {"count": str(sp.counts.get(kind, 0)), "frequency": _freq(sp.frequency(kind))}
        for kind in Reduction
    }
    product["hodge_witt_total"] = {"frequency": _freq(sp.hodge_witt_frequency)}
    return {
        "curve": rep.label,
        "primes_scanned": str(rep.primes_scanned),
        "good": str(rep.good),
        "classes": classes,
        "self_product": product,
        "self_product_methods_agree": all(r.agrees for r in sp.rows),
    }
