"""Command-line frontend.

Exit codes: 0 success, 1 a checked property failed, 2 bad invocation or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import formats
from .errors import HWSlopeError
from .scanner import CurveKind, density_report, scan
from .slope_calculus import (
    DEFAULT_DIMENSION_BOUND,
    Reduction,
    classify,
    enumerate_admissible,
    exterior_slopes,
    min_slope,
    verify_slope_estimate,
)
from .weil_poly import newton_polygon_of, twist_coupled_audit

JOBS_ENV = "HWSLOPE_JOBS"
FORMATS = ("table", "json", "csv")
DEFAULT_PMAX = {CurveKind.ELLIPTIC: 10_000, CurveKind.HYPERELLIPTIC2: 2_000}

log = logging.getLogger("hwslope")


class UsageError(Exception):
    pass


class PropertyFailed(Exception):
    pass


@dataclass
class Config:
    format: str = "table"
    out: Path | None = None
    jobs: int = 1
    bound: int = DEFAULT_DIMENSION_BOUND


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV)
    if raw is None:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        raise UsageError(f"{JOBS_ENV}={raw!r} is not an integer") from None
    if jobs < 1:
        raise UsageError(f"{JOBS_ENV} must be positive")
    return jobs


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be positive")
    return value


def parse_g_range(text: str) -> list[int]:
    """``3`` or ``2..7`` (inclusive)."""
    if ".." in text:
        lo_txt, hi_txt = text.split("..", 1)
    else:
        lo_txt = hi_txt = text
    try:
        lo, hi = int(lo_txt), int(hi_txt)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty dimension range {text!r}")
    return list(range(lo, hi + 1))


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _csv(rows: list[list[str]], header: list[str]) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _tabular(cfg: Config, header, rows, payload) -> str:
    if cfg.format == "json":
        return json.dumps(payload, indent=2) + "\n"
    if cfg.format == "csv":
        return _csv(rows, header)
    return _table(rows, header)


def cmd_enumerate(args, cfg: Config) -> tuple[str, int]:
    if args.g < 1 or args.g > cfg.bound:
        raise UsageError(f"--g must be in [1, {cfg.bound}]")
    polys = enumerate_admissible(args.g, cfg.bound)
    header = ["polygon", "p_rank", "class", "supersingular"]
    rows = []
    for np in polys:
        label = classify(np)
        rows.append([formats.format_polygon(np), str(np.m0), label.kind.value, str(label.supersingular).lower()])
    payload = {
        "g": str(args.g),
        "count": str(len(polys)),
        "polygons": [
            dict(formats.polygon_to_json(np), **{"class": r[2], "supersingular": r[3] == "true"})
            for np, r in zip(polys, rows)
        ],
    }
    return _tabular(cfg, header, rows, payload), 0


def cmd_verify_estimate(args, cfg: Config) -> tuple[str, int]:
    gs = args.g
    if gs[0] < 2:
        raise UsageError("verify-estimate needs g >= 2")
    if gs[-1] > cfg.bound:
        raise UsageError(f"g = {gs[-1]} exceeds the dimension bound {cfg.bound}")
    reports = [verify_slope_estimate(g, cfg.bound, jobs=cfg.jobs) for g in gs]
    failed = any(not r.holds for r in reports)
    if cfg.format == "json":
        payload = [
            {
                "g": str(r.g),
                "polygons_checked": str(r.polygons_checked),
                "checked": [formats.format_polygon(np) for np in r.checked],
                "counterexamples": [
                    {"polygon": formats.format_polygon(np), "min_slope": str(s)} for np, s in r.counterexamples
                ],
                "witnesses": [formats.format_polygon(np) for np in r.witnesses],
            }
            for r in reports
        ]
        text = json.dumps(payload, indent=2) + "\n"
    elif cfg.format == "csv":
        rows = [
            [str(r.g), str(r.polygons_checked), str(len(r.counterexamples)), str(len(r.witnesses))]
            for r in reports
        ]
        text = _csv(rows, ["g", "polygons_checked", "counterexamples", "witnesses"])
    else:
        lines = []
        for r in reports:
            lines.append(
                f"g={r.g}: polygons_checked: {r.polygons_checked}  counterexamples: "
                f"{len(r.counterexamples)}  witnesses: {len(r.witnesses)}"
            )
            witnesses = set(r.witnesses)
            for np in r.checked:
                tag = "  (min slope 1)" if np in witnesses else ""
                lines.append(f"  {formats.format_polygon(np)}{tag}")
            for np, s in r.counterexamples:
                lines.append(f"  COUNTEREXAMPLE {formats.format_polygon(np)} min slope {s}")
        text = "\n".join(lines) + "\n"
    return text, 1 if failed else 0


def cmd_wedge(args, cfg: Config) -> tuple[str, int]:
    np = formats.parse_polygon(args.polygon, strict=not args.loose)
    sm = exterior_slopes(np, args.i)
    lowest = min_slope(sm)
    header = ["slope", "multiplicity"]
    rows = [[str(s), str(m)] for s, m in sm.pairs]
    if cfg.format == "table":
        text = f"wedge {args.i} of {formats.format_polygon(np)}\n"
        text += _table(rows, header) + f"min slope: {lowest}\n"
        return text, 0
    payload = dict(formats.multiset_to_json(sm), i=str(args.i), min_slope=str(lowest))
    return _tabular(cfg, header, rows, payload), 0


def cmd_poly_np(args, cfg: Config) -> tuple[str, int]:
    coeffs = formats.parse_coeffs(args.coeffs)
    sm = newton_polygon_of(coeffs, args.p, args.n)
    header = ["slope", "multiplicity"]
    rows = [[str(s), str(m)] for s, m in sm.pairs]
    if cfg.format == "table":
        return f"slopes: {formats.format_polygon(sm)}\n" + _table(rows, header), 0
    payload = {"p": str(args.p), "n": str(args.n), "pairs": [[str(s), m] for s, m in sm.pairs]}
    return _tabular(cfg, header, rows, payload), 0


def cmd_scan(args, cfg: Config) -> tuple[str, int]:
    curve = formats.parse_curve(args.curve, args.label or "")
    pmax = args.pmax if args.pmax is not None else DEFAULT_PMAX[curve.kind]
    if args.pmin > pmax:
        raise UsageError(f"--pmin {args.pmin} exceeds --pmax {pmax}")
    records, report = scan(curve, args.pmin, pmax, jobs=cfg.jobs)
    if cfg.format == "json":
        return formats.scan_to_json(curve.label, records), 0
    if cfg.format == "csv":
        return formats.scan_to_csv(records), 0
    rows = [[formats.record_row(r)[k] for k in formats.SCAN_COLUMNS] for r in records]
    text = _table(rows, formats.SCAN_COLUMNS)
    text += (
        f"good primes: {report.good}  ordinary: {report.counts[Reduction.ORDINARY]}  "
        f"hodge-witt: {report.counts[Reduction.HODGE_WITT]}  "
        f"non-hodge-witt: {report.counts[Reduction.NON_HODGE_WITT]}\n"
    )
    return text, 0


def _load_scan(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    label, records = formats.read_scan(text)
    return label or Path(path).stem, records


def cmd_audit(args, cfg: Config) -> tuple[str, int]:
    _, records = _load_scan(args.input)
    entries = [r.frobenius for r in records if r.good]
    if not entries:
        raise UsageError("scan file holds no good primes")
    g = args.g if args.g is not None else entries[0].g
    exclude = {int(x) for x in args.exclude.split(",")} if args.exclude else set()
    summary = twist_coupled_audit(entries, g, exclude)
    payload = formats.audit_to_json(summary)
    code = 0 if summary.consistent else 1
    if cfg.format == "json":
        return json.dumps(payload, indent=2) + "\n", code
    header = ["p", "class", "S", "E", "twisted_window", "trace", "trace_div_p", "indiv", "excluded"]
    rows = [
        [r["p"], r["class"], r["property_S"], r["property_E"], r["twisted_window"], r["trace"],
         r["trace_divisible"], "" if r["indiv_check"] is None else r["indiv_check"], r["excluded"]]
        for r in payload["records"]
    ]
    rows = [[str(c).lower() if isinstance(c, bool) else str(c) for c in row] for row in rows]
    if cfg.format == "csv":
        return _csv(rows, header), code
    s = payload["summary"]
    verdict = "consistent" if summary.consistent else "inconsistent"
    text = _table(rows, header)
    text += f"summary: property S at all {s['primes_audited']} audited primes: {verdict}\n"
    text += f"indiv check at {s['ordinary_primes']} ordinary primes: {str(s['indiv_holds_at_all_ordinary']).lower()}\n"
    return text, code


def cmd_report(args, cfg: Config) -> tuple[str, int]:
    label, records = _load_scan(args.input)
    rep = density_report(args.label or label, records)
    payload = formats.density_to_json(rep)
    code = 0 if payload["self_product_methods_agree"] else 1
    if cfg.format == "json":
        return json.dumps(payload, indent=2) + "\n", code
    header = ["class", "count", "frequency"]
    rows = [[k, v["count"], v["frequency"]["decimal"]] for k, v in payload["classes"].items()]
    rows += [
        [f"XxX {k}", v.get("count", ""), v["frequency"]["decimal"]] for k, v in payload["self_product"].items()
    ]
    if cfg.format == "csv":
        return _csv(rows, header), code
    text = f"curve: {rep.label}\nprimes scanned: {rep.primes_scanned}  good: {rep.good}\n"
    return text + _table(rows, header), code


def _add_output_flags(parser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--format", choices=FORMATS, default=default, help="output format")
    parser.add_argument("--out", default=default, help="write output to this file")
    parser.add_argument("--jobs", type=_positive_int, default=default, help=f"worker processes (env {JOBS_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hwslope", description=__doc__.splitlines()[0])
    _add_output_flags(parser, suppress=False)
    parser.add_argument("--bound", type=_positive_int, default=DEFAULT_DIMENSION_BOUND, help="dimension bound")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_output_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("enumerate", cmd_enumerate, "list all admissible polygons of dimension g")
    p.add_argument("--g", type=int, required=True)

    p = add("verify-estimate", cmd_verify_estimate, "check the Lambda^g slope bound at non-Hodge-Witt polygons")
    p.add_argument("--g", type=parse_g_range, required=True, help="dimension or range like 2..7")

    p = add("wedge", cmd_wedge, "slopes of an exterior power of a polygon")
    p.add_argument("--polygon", required=True, help="e.g. 0:1,1/2:2,1:1")
    p.add_argument("--i", type=_positive_int, required=True)
    p.add_argument("--loose", action="store_true", help="skip symmetry and denominator checks")

    p = add("poly-np", cmd_poly_np, "Newton polygon of a polynomial")
    p.add_argument("--coeffs", required=True, help="leading coefficient first, e.g. 1,0,9")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=_positive_int, default=1)

    p = add("scan", cmd_scan, "point-count a curve over a prime range")
    p.add_argument("--curve", required=True, help="ec:[a1,a2,a3,a4,a6] or hyp2:[c5,...,c0]")
    p.add_argument("--pmin", type=int, default=2)
    p.add_argument("--pmax", type=int, default=None)
    p.add_argument("--label", default=None)

    p = add("audit", cmd_audit, "twist-coupled audit of a scan file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--exclude", default="", help="comma-separated exceptional primes")

    p = add("report", cmd_report, "density report of a scan file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--label", default=None)
    return parser


def _config(args) -> Config:
    fmt = args.format
    if fmt is None:
        suffix = Path(args.out).suffix.lower() if args.out else ""
        fmt = {".json": "json", ".csv": "csv"}.get(suffix, "table")
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    return Config(format=fmt, out=Path(args.out) if args.out else None, jobs=jobs, bound=args.bound)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _config(args)
        text, code = args.func(args, cfg)
    except (UsageError, HWSlopeError) as exc:
        print(f"hwslope {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
