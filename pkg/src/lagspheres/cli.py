"""Command line entry point: ``lagspheres {verify,scan-area,field,point}``.

Exit status: 0 all gated checks pass, 1 a gated check fails, 2 bad
configuration, 3 numerical breakdown, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import integrals, report
from .errors import DegenerateMetricError, DomainError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


class _ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ConfigError(message)


def _grid(text: str):
    try:
        nx, nt = text.lower().split("x")
        return int(nx), int(nt)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 200x256, got {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c1", type=float, default=4.0, help="curvature of the first factor")
    p.add_argument("--c2", type=float, default=1.0, help="curvature of the second factor")
    p.add_argument("--t", type=float, default=0.0, help="family parameter")
    p.add_argument("--grid", type=_grid, default=(200, 256), help="quadrature grid NXxNTHETA")
    p.add_argument("--fd-step", type=float, default=1e-3, help="finite-difference step h")
    p.add_argument("--samples", type=int, default=1000, help="random sample points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pole-band", type=float, default=0.95, help="|x| limit for differences")
    p.add_argument("--tol-profile", choices=("default", "strict"), default="default")
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lagspheres", description="Numerical verification of the "
                     "Lagrangian sphere family in S2 x S2.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="run all suites and write a JSON report")
    _common(p)

    p = sub.add_parser("scan-area", help="tabulate A(t) as CSV, optionally plot as SVG")
    _common(p)
    p.set_defaults(grid=None)
    p.add_argument("--t-min", type=float, default=-3.0)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=121)
    p.add_argument("--csv", help="CSV path (default: stdout)")
    p.add_argument("--svg", help="SVG path")

    p = sub.add_parser("field", help="dump a pointwise field over the quadrature nodes")
    _common(p)
    p.add_argument("--quantity", required=True)
    p.add_argument("--csv", help="CSV path (default: stdout)")

    p = sub.add_parser("point", help="full local geometry at one cylinder point")
    _common(p)
    p.add_argument("--s1", type=float, required=True)
    p.add_argument("--s2", type=float, required=True)
    return parser


def _config(args) -> report.RunConfig:
    nx, nt = args.grid if args.grid is not None else (200, 256)
    return report.RunConfig(c1=args.c1, c2=args.c2, t=args.t, n_x=nx, n_theta=nt,
                            fd_step=args.fd_step, samples=args.samples, seed=args.seed,
                            pole_band=args.pole_band, tol_profile=args.tol_profile)


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else repr(float(v)) for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def cmd_verify(args) -> int:
    cfg = _config(args)
    rep = report.verify(cfg)
    _emit(_json_text(rep), args.out)
    for c in rep["checks"]:
        status = {True: "PASS", False: "FAIL", None: "INFO"}[c["passed"]]
        tag = "gated" if c["gated"] else c["expectation"]
        print(f"{status} {c['id']} ({tag})", file=sys.stderr)
    return EXIT_OK if rep["overall"]["passed"] else EXIT_FAIL


def cmd_scan_area(args) -> int:
    cfg = _config(args)
    params = cfg.validate()
    grid = integrals.QuadratureGrid(*args.grid) if args.grid is not None else None
    rows = integrals.area_scan(params, args.t_min, args.t_max, args.steps, grid)
    _emit(_csv_text(["t", "A_closed", "A_quad", "rel_err"],
                    [(r.t, r.A_closed, r.A_quad, r.rel_err) for r in rows]), args.csv)
    if args.svg:
        _emit(report.area_svg(rows), args.svg)
    checks = integrals.scan_checks(params, rows)
    if args.out:
        _emit(_json_text(report.jsonable(checks)), args.out)
    ok = all(checks[k] for k in ("argmax_at_zero", "strictly_decreasing_on_nonnegative_t",
                                 "concave_at_0", "decays_by_3"))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_field(args) -> int:
    cfg = _config(args)
    rows = report.field_rows(cfg, args.quantity)
    _emit(_csv_text(["s1", "s2", "x", "theta_coord", "value"], rows), args.csv)
    return EXIT_OK


def cmd_point(args) -> int:
    cfg = _config(args)
    dump = report.point_dump(cfg, args.s1, args.s2)
    _emit(_json_text(dump), args.out)
    failed = [k for k, r in dump["residuals"].items() if r["gated"] and not r["passed"]]
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"verify": cmd_verify, "scan-area": cmd_scan_area, "field": cmd_field,
            "point": cmd_point}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _ConfigError as exc:
        print(f"lagspheres: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with np.errstate(invalid="ignore", divide="ignore"):
            return COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"lagspheres: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegenerateMetricError, FloatingPointError, ValueError) as exc:
        print(f"lagspheres: numerical breakdown: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"lagspheres: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
