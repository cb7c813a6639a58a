"""Command-line front end.

Subcommands:

* ``analyze``  -- full report (genera, invariants, per-m map analysis, and
  optionally the eigensheaf table) for one datum file;
* ``classify`` -- run the classification for a target chi and group-order
  cap, emitting the family list and the summary table as CSV or JSON;
* ``character`` -- print the m-canonical character of one curve of a datum.

Exit codes: 0 success, 1 invalid input, 2 internal consistency failure.
The worker pool for classification is capped by the VIPCLASS_THREADS
environment variable (default 1).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .chevalley_weil import curve_character
from .classify import FamilyRecord, SearchSpec, TableRow, classify, summarize
from .covers import curve_genera, validate_datum
from .datumfile import load_datum, serialize_datum
from .decomposition import eigensheaf_report
from .errors import ConsistencyError, ValidationError
from .invariants import invariant_set
from .maps import STATUS_BIRATIONAL, map_status


def _map_report(analysis) -> dict:
    return {
        "m": analysis.m,
        "P_m": analysis.dimension,
        "bpf": analysis.bpf,
        "separates_group": analysis.separates_group,
        "separates_base": analysis.separates_base,
        "status": analysis.status_label(),
        "normalization_flag": analysis.normalization_flag,
    }


def _invariant_report(inv) -> dict:
    out = {
        "chi_O": inv.chi_o,
        "K3" if len(inv.genera) == 3 else "K2": inv.canonical_self_intersection,
        "euler": inv.euler_number,
    }
    if inv.hodge is not None:
        h30, h20, h10, h11, h21 = inv.hodge
        out["hodge"] = {"h30": h30, "h20": h20, "h10": h10, "h11": h11, "h21": h21}
    return out


def cmd_analyze(args) -> int:
    datum = load_datum(args.datum)
    validate_datum(datum)
    report = {
        "group": list(datum.group.invariant_factors),
        "kernel_orders": [K.order for K in datum.kernels],
        "types": [str(V.btype) for V in datum.vectors],
        "genera": list(curve_genera(datum)),
        "invariants": _invariant_report(invariant_set(datum)),
        "maps": [_map_report(map_status(datum, m)) for m in args.m],
    }
    if args.eigensheaves:
        sheaves = []
        for m in args.m:
            for e in eigensheaf_report(datum, m):
                sheaves.append(
                    {
                        "character": [list(c.exponents) for c in e.chis],
                        "m": m,
                        "degrees": list(e.degrees),
                        "dimension": e.sections,
                    }
                )
        report["eigensheaves"] = sheaves
    _emit(json.dumps(report, indent=2, sort_keys=True), args.out)
    return 0


def _family_report(rec: FamilyRecord) -> dict:
    return {
        "datum": serialize_datum(rec.datum),
        "kernel_orders": list(rec.kernel_orders),
        "types": [str(t) for t in rec.types],
        "genera": list(rec.genera),
        "minimal_realization": rec.minimal,
        "invariants": _invariant_report(rec.invariants),
        "maps": [_map_report(a) for a in rec.analyses],
    }


def _row_report(row: TableRow) -> dict:
    return {
        "group": list(row.group.invariant_factors),
        "kernel_orders": list(row.kernel_orders),
        "types": [str(t) for t in row.types],
        "hodge": list(row.hodge),
        "families": row.families,
        "canonical": {"bpf": row.canonical[0], "bir": row.canonical[1],
                      "nbir": row.canonical[2], "undecided": row.canonical[3]},
        "bicanonical": {"bpf": row.bicanonical[0], "bir": row.bicanonical[1],
                        "nbir": row.bicanonical[2], "undecided": row.bicanonical[3]},
        "bicanonical_with_genus2_rule": {
            "bpf": row.bicanonical_resolved[0], "bir": row.bicanonical_resolved[1],
            "nbir": row.bicanonical_resolved[2], "undecided": row.bicanonical_resolved[3]},
    }


def _rows_csv(rows: list[TableRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(
        ["G", "k1", "k2", "k3", "T1", "T2", "T3",
         "h30", "h20", "h10", "h11", "h21",
         "can_bpf", "can_bir", "can_nbir", "can_undecided",
         "bic_bpf", "bic_bir", "bic_nbir", "bic_undecided"]
    )
    for row in rows:
        writer.writerow(
            [str(row.group), *row.kernel_orders, *(str(t) for t in row.types),
             *row.hodge, *row.canonical, *row.bicanonical]
        )
    return buf.getvalue()


def cmd_classify(args) -> int:
    spec = SearchSpec(
        chi=args.chi,
        max_group_order=args.max_order,
        allow_nontrivial_kernels=(args.kernels == "allow"),
        m_range=tuple(args.m),
    )
    records = classify(spec)
    if args.filter == "birational-canonical":
        records = [
            r for r in records if r.analysis(1).status == STATUS_BIRATIONAL
        ]
    rows = summarize(records)
    if args.format == "csv":
        _emit(_rows_csv(rows), args.out)
    else:
        payload = {
            "spec": {
                "chi": spec.chi,
                "max_group_order": spec.max_group_order,
                "kernels": args.kernels,
                "m_range": list(spec.m_range),
            },
            "families": [_family_report(r) for r in records],
            "rows": [_row_report(r) for r in rows],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return 0


def cmd_character(args) -> int:
    datum = load_datum(args.datum)
    validate_datum(datum)
    if not 1 <= args.curve <= datum.n:
        raise ValidationError(
            f"curve index {args.curve} out of range 1..{datum.n}"
        )
    V = datum.vectors[args.curve - 1]
    cm = curve_character(args.m, V)
    lines = [f"# curve {args.curve}, m = {args.m}, group {V.group}"]
    for chi, mult in cm:
        lines.append(f"{','.join(str(c) for c in chi.exponents)} -> {mult}")
    lines.append(f"total {cm.dimension}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _parse_m_range(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        out = list(range(int(lo), int(hi) + 1))
    else:
        out = [int(p) for p in text.split(",") if p]
    if not out or any(m < 1 for m in out):
        raise argparse.ArgumentTypeError("m range must contain integers >= 1")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vipclass",
        description="Pluricanonical analysis and classification of regular "
        "quotients of curve products by free abelian actions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one datum file")
    p.add_argument("datum", help="path to a JSON datum file")
    p.add_argument("--m", type=_parse_m_range, default=[1, 2, 3, 4, 5],
                   help="m range, e.g. 1..5 or 1,2 (default 1..5)")
    p.add_argument("--eigensheaves", action="store_true",
                   help="include the eigensheaf multidegree table")
    p.add_argument("--out", help="write the report to a file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="classify families for a target chi")
    p.add_argument("--chi", type=int, required=True, help="target chi (<= -1)")
    p.add_argument("--max-order", type=int, required=True,
                   help="group order cap")
    p.add_argument("--kernels", choices=["allow", "trivial"], default="allow",
                   help="allow non-trivial kernels (default) or not")
    p.add_argument("--m", type=_parse_m_range, default=[1, 2, 3, 4, 5],
                   help="m range analyzed per family (default 1..5)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--filter", choices=["birational-canonical"],
                   help="keep only families with birational canonical map")
    p.add_argument("--out", help="write the output to a file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("character", help="print a curve's m-canonical character")
    p.add_argument("datum", help="path to a JSON datum file")
    p.add_argument("--curve", type=int, required=True, help="curve index (1-based)")
    p.add_argument("--m", type=int, default=1, help="pluricanonical level")
    p.add_argument("--out", help="write the table to a file")
    p.set_defaults(func=cmd_character)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
