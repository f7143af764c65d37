"""Command line front end.

    fibernielsen analyze --r 2 --s 1 --n 6 [--format table|json|csv] [--cap N]
    fibernielsen table   --r 1 --s 1 --max-n 12
    fibernielsen hper    --r 1 --s 1 --max-n 6
    fibernielsen verify  --r 2 --s 1 --max-n 12 [--strict]

Exit codes: 0 ok, 1 invariant violation (or finding under ``--strict``),
2 usage error, 3 enumeration cap or factoring budget exhausted (the partial
report is still printed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import report
from .reidemeister import DEFAULT_BUDGET, DEFAULT_CAP, FiberTorusMap

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
UNAVAILABLE = "UNAVAILABLE"


def _s(value) -> str:
    # big integers travel as decimal strings
    return UNAVAILABLE if value is None else str(value)


def _stringify(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _tristate(value) -> str:
    return {True: "true", False: "false", None: "not_evaluated"}[value]


def format_row(values, widths) -> str:
    return "  ".join(str(v).rjust(w) for v, w in zip(values, widths)).rstrip()


def render_grid(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    return "\n".join(format_row(row, widths) for row in cells) + "\n"


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# -- analyze -----------------------------------------------------------------

LEVEL_HEADER = ("n", "a", "b", "d", "nielsen", "an")


def report_to_json(rep: report.PeriodicReport) -> dict:
    toral = {"status": _tristate(rep.n_toral)}
    if rep.toral_witness is not None:
        toral["witness"] = _stringify(rep.toral_witness.as_dict())
    out = {
        "map": {"r": str(rep.map.r), "s": str(rep.map.s)},
        "n": str(rep.n),
        "levels": [
            {"n": str(row.n), "a": str(row.a), "b": str(row.b), "d": str(row.d),
             "nielsen": str(row.nielsen), "an": str(row.an)}
            for row in rep.rows
        ],
        "summary": {
            "On": _s(rep.On),
            "In": _s(rep.In),
            "nbpn": _s(rep.nbpn),
            "Mn": _s(rep.Mn),
            "n_toral": toral,
            "flags": {name: _stringify(check.as_dict()) for name, check in rep.flags.items()},
        },
    }
    if rep.unavailable:
        out["unavailable"] = list(rep.unavailable)
    return out


def _summary_pairs(rep: report.PeriodicReport) -> list[tuple[str, str]]:
    pairs = [("A_n", str(rep.an)), ("O_n", _s(rep.On)), ("I_n", _s(rep.In)),
             ("nbpn", _s(rep.nbpn)), ("M_n", _s(rep.Mn)), ("n_toral", _tristate(rep.n_toral))]
    if rep.toral_witness is not None:
        w = rep.toral_witness.as_dict()
        pairs.append(("n_toral_witness", " ".join(f"{k}={v}" for k, v in w.items())))
    for name, check in rep.flags.items():
        text = _tristate(check.value)
        if check.value is False and check.witness:
            text += " (" + ", ".join(f"{k}={v}" for k, v in check.witness.items()) + ")"
        elif check.value is None:
            text += f" ({check.detail})"
        pairs.append((name, text))
    for item in rep.unavailable:
        pairs.append(("unavailable", item))
    return pairs


def render_report(rep: report.PeriodicReport, fmt: str) -> str:
    rows = [(r.n, r.a, r.b, r.d, r.nielsen, r.an) for r in rep.rows]
    if fmt == "json":
        return _dump(report_to_json(rep))
    if fmt == "csv":
        return render_csv(LEVEL_HEADER, rows) + "\n" + render_csv(("field", "value"), _summary_pairs(rep))
    title = f"f_{{r={rep.map.r}, s={rep.map.s}}}  n = {rep.n}\n\n"
    pairs = _summary_pairs(rep)
    width = max(len(k) for k, _ in pairs)
    summary = "\n".join(f"{k.ljust(width)}  {v}" for k, v in pairs) + "\n"
    return title + render_grid(LEVEL_HEADER, rows) + "\n" + summary


def cmd_analyze(args, out) -> int:
    rep = report.analyze(FiberTorusMap(args.r, args.s), args.n, args.cap, args.budget)
    out.write(render_report(rep, args.format))
    return EXIT_OK if rep.complete else EXIT_RESOURCE


# -- table / hper ------------------------------------------------------------

TABLE_HEADER = ("n", "d", "nielsen", "an", "nbpn", "Mn")


def cmd_table(args, out) -> int:
    fmap = FiberTorusMap(args.r, args.s)
    rows, unavailable = report.table(fmap, args.max_n, args.cap, args.budget)
    cells = [(row.n, row.d, row.nielsen, row.an, _s(row.nbpn), row.Mn) for row in rows]
    if args.format == "json":
        out.write(_dump({
            "map": {"r": str(fmap.r), "s": str(fmap.s)},
            "rows": [dict(zip(TABLE_HEADER, map(str, c))) for c in cells],
            **({"unavailable": unavailable} if unavailable else {}),
        }))
    elif args.format == "csv":
        out.write(render_csv(TABLE_HEADER, cells))
    else:
        out.write(render_grid(TABLE_HEADER, cells))
        for item in unavailable:
            out.write(f"unavailable: {item}\n")
    return EXIT_RESOURCE if unavailable else EXIT_OK


def cmd_hper(args, out) -> int:
    fmap = FiberTorusMap(args.r, args.s)
    periods, certs, unavailable = report.hper(fmap, args.max_n, args.cap, args.budget)
    disputed = [c for c in certs if c.nbpn is not None and (c.nbpn != 0) != (c.an > 0)]
    if args.format == "json":
        out.write(_dump({
            "map": {"r": str(fmap.r), "s": str(fmap.s)},
            "max_n": str(args.max_n),
            "periods": [str(n) for n in periods],
            "certificates": [
                {"n": str(c.n), "nbpn": _s(c.nbpn), "an": str(c.an), "certified_by": c.certified_by}
                for c in certs if c.certified_by
            ],
            **({"unavailable": unavailable} if unavailable else {}),
        }))
    elif args.format == "csv":
        out.write(render_csv(("n", "nbpn", "an", "certified_by"),
                             [(c.n, _s(c.nbpn), c.an, "+".join(c.certified_by)) for c in certs if c.certified_by]))
    else:
        out.write("periods: {" + ", ".join(map(str, periods)) + "}\n")
        for c in disputed:
            out.write(f"n={c.n}: nbpn={_s(c.nbpn)} an={c.an} certified_by={'+'.join(c.certified_by) or 'none'}\n")
        for item in unavailable:
            out.write(f"unavailable: {item}\n")
    return EXIT_RESOURCE if unavailable else EXIT_OK


# -- verify ------------------------------------------------------------------

def cmd_verify(args, out) -> int:
    fmap = FiberTorusMap(args.r, args.s)
    verdicts = [report.verify_level(fmap, n, args.cap, args.budget) for n in range(1, args.max_n + 1)]
    violations = [(v.n, msg) for v in verdicts for msg in v.violations]
    findings = [v for v in verdicts if v.findings]
    skipped = [(v.n, msg) for v in verdicts for msg in v.skipped]
    if args.format == "json":
        out.write(_dump({
            "map": {"r": str(fmap.r), "s": str(fmap.s)},
            "max_n": str(args.max_n),
            "violations": [{"n": str(n), "message": m} for n, m in violations],
            "findings": [{"n": str(v.n), "messages": v.findings} for v in findings],
            "skipped": [{"n": str(n), "message": m} for n, m in skipped],
        }))
    else:
        for n, msg in violations:
            out.write(f"VIOLATION n={n}: {msg}\n")
        for v in findings:
            for msg in v.findings:
                out.write(f"finding n={v.n}: {msg}\n")
        for n, msg in skipped:
            out.write(f"skipped n={n}: {msg}\n")
        out.write(f"{len(violations)} violations, {len(findings)} findings, "
                  f"{len(skipped)} skipped checks over n = 1..{args.max_n}\n")
    if violations or (args.strict and findings):
        return EXIT_VIOLATION
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibernielsen",
        description="Fiberwise Nielsen periodic invariants of torus maps f_{r,s}(x, y) = (x^r y^s, y).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, level_flag):
        p.add_argument("--r", type=int, required=True, help="fiber degree")
        p.add_argument("--s", type=int, required=True, help="shear exponent")
        if level_flag == "n":
            p.add_argument("--n", type=_positive, required=True, help="period")
        else:
            p.add_argument("--max-n", type=_positive, required=True, help="largest period")
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="orbit enumeration cap on d_n")
        p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="Pollard rho step budget")

    common(sub.add_parser("analyze", help="full report for one period"), "n")
    common(sub.add_parser("table", help="summary row per period"), "max-n")
    common(sub.add_parser("hper", help="periods certified by N_BP_n != 0"), "max-n")
    p = sub.add_parser("verify", help="run the invariant suite")
    common(p, "max-n")
    p.add_argument("--strict", action="store_true", help="treat mathematical findings as failures")
    return parser


COMMANDS = {"analyze": cmd_analyze, "table": cmd_table, "hper": cmd_hper, "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args, out or sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
