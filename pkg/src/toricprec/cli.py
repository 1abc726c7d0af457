"""``toricprec`` command-line front end.

Every subcommand builds a JSON-able ``outputs`` dict; ``--json`` prints the
full run report, otherwise a plain-text view of the same data. Exit status
is 0 on success or a true verdict, 2 on a false verdict, 1 on error.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import catalog
from .io import dumps, load_horn, load_polytope, polytope_to_doc
from .moment import compare_moment_maps, mu_FS, mu_quot
from .polyalg import format_rational, parse_rational
from .precision import check_slp, slp_infeasibility_reason, solve_slp_weights
from .search import search_polygons
from .statistics import (horn_matrix_slp, horn_structure_report, minimal_horn, mle,
                         mle_closed_form, mle_newton, verify_horn)

EXIT_OK, EXIT_ERROR, EXIT_FALSE = 0, 1, 2


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict
    seed: int
    timing_ms: float | None = None
    exit_code: int = field(default=EXIT_OK, repr=False)

    def to_dict(self) -> dict:
        doc = {"command": self.command, "inputs": self.inputs, "outputs": self.outputs, "seed": self.seed}
        # wall time would break byte-identical reruns, so it is opt-in
        if self.timing_ms is not None:
            doc["timing_ms"] = self.timing_ms
        return doc


def _vector(text: str) -> list:
    try:
        return [parse_rational(s.strip()) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad vector {text!r}: {exc}") from None


def _floats(xs) -> list[float]:
    return [float(x) for x in xs]


# --- subcommands ------------------------------------------------------------
# each returns (outputs, exit_code)

def _emit(doc: dict, output) -> dict:
    if output:
        Path(output).write_text(dumps(doc))
    return doc


def cmd_catalog(args):
    P, w = catalog.fixture(args.name, *args.params)
    return _emit(polytope_to_doc(P, w, name=args.name), args.output), EXIT_OK


def cmd_slp_check(args):
    P, w = load_polytope(args.file)
    report = check_slp(P, w)
    return report.to_dict(), EXIT_OK if report.verdict else EXIT_FALSE


def cmd_slp_weights(args):
    P, _ = load_polytope(args.file)
    w = solve_slp_weights(P)
    if w is None:
        return {"weights": "infeasible", "reason": slp_infeasibility_reason(P)}, EXIT_FALSE
    return {"weights": [format_rational(x) for x in w]}, EXIT_OK


def cmd_horn_build(args):
    P, w = load_polytope(args.file)
    return _emit(horn_matrix_slp(P, w).to_dict(), args.output), EXIT_OK


def cmd_horn_minimize(args):
    return _emit(minimal_horn(load_horn(args.file)).to_dict(), args.output), EXIT_OK


def cmd_horn_verify(args):
    H = load_horn(args.horn)
    P, w = load_polytope(args.polytope)
    tol = 1e-9 if args.tol is None else args.tol
    result = verify_horn(H, P, w, trials=args.trials, tol=tol, seed=args.seed)
    out = result.to_dict()
    out["rows"] = horn_structure_report(H, P)
    return out, EXIT_OK if result.passed else EXIT_FALSE


def cmd_mle(args):
    P, w = load_polytope(args.file)
    tol = 1e-12 if args.tol is None else args.tol
    if args.method == "closed":
        result = mle_closed_form(P, w, args.u)
    elif args.method == "newton":
        result = mle_newton(P, w, args.u, tol=tol)
    else:
        result = mle(P, w, args.u, tol=tol)
    return result.to_dict(), EXIT_OK


def cmd_moment_compare(args):
    P, w = load_polytope(args.file)
    tol = 1e-9 if args.tol is None else args.tol
    cmp = compare_moment_maps(P, w, samples=args.samples, tol=tol, seed=args.seed)
    if args.csv:
        _write_samples_csv(args.csv, P.dim, cmp.gaps)
    return cmp.to_dict(), EXIT_OK if cmp.maps_equal else EXIT_FALSE


def _write_samples_csv(path, d: int, records) -> None:
    header = ([f"q{i + 1}" for i in range(d)] + [f"fs{i + 1}" for i in range(d)]
              + [f"quot{i + 1}" for i in range(d)] + ["gap"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for r in records:
            writer.writerow([repr(x) for x in (*r["q"], *r["fs"], *r["quot"], r["gap"])])


def cmd_moment_map(args):
    P, w = load_polytope(args.file)
    if args.which == "fs":
        value = mu_FS(P, w, args.q)
    else:
        value = mu_quot(P, args.q, tol=1e-12 if args.tol is None else args.tol)
    return {"map": args.which, "q": _floats(args.q), "value": _floats(value)}, EXIT_OK


def cmd_search(args):
    report = search_polygons(args.max_coord)
    return report.to_dict(), EXIT_OK if report.ok else EXIT_FALSE


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print the full JSON run report")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="numeric tolerance")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="add wall time to the JSON report")

    parser = argparse.ArgumentParser(prog="toricprec", parents=[common],
                                     description="Strict linear precision, Horn matrices, MLE and moment maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="write a named fixture as polytope JSON")
    p.add_argument("name", choices=catalog.CATALOG_NAMES)
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_catalog)

    slp = sub.add_parser("slp", help="strict linear precision").add_subparsers(dest="action", required=True)
    p = slp.add_parser("check", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_slp_check)
    p = slp.add_parser("weights", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_slp_weights)

    horn = sub.add_parser("horn", help="Horn matrices").add_subparsers(dest="action", required=True)
    p = horn.add_parser("build", parents=[common])
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_horn_build)
    p = horn.add_parser("minimize", parents=[common])
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_horn_minimize)
    p = horn.add_parser("verify", parents=[common])
    p.add_argument("horn")
    p.add_argument("polytope")
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=cmd_horn_verify)

    p = sub.add_parser("mle", parents=[common], help="maximum likelihood estimate")
    p.add_argument("file")
    p.add_argument("--u", type=_vector, required=True, help="comma-separated data, e.g. 3,1,4,1")
    p.add_argument("--method", choices=("auto", "closed", "newton"), default="auto")
    p.set_defaults(func=cmd_mle)

    moment = sub.add_parser("moment", help="moment maps").add_subparsers(dest="action", required=True)
    p = moment.add_parser("compare", parents=[common])
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--csv", help="write per-sample values to this CSV file")
    p.set_defaults(func=cmd_moment_compare)
    for which in ("fs", "quot"):
        p = moment.add_parser(which, parents=[common])
        p.add_argument("file")
        p.add_argument("--q", type=_vector, required=True, help="norm-squared coordinates, e.g. 1.0,2.5")
        p.set_defaults(func=cmd_moment_map, which=which)

    search = sub.add_parser("search", help="polygon search").add_subparsers(dest="action", required=True)
    p = search.add_parser("polygons", parents=[common])
    p.add_argument("--max-coord", type=int, required=True)
    p.set_defaults(func=cmd_search)
    return parser


def _echo_inputs(args) -> dict:
    skip = {"func", "command", "action", "json", "timing", "which"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        if isinstance(v, list):
            v = [format_rational(x) if not isinstance(x, (int, str)) else x for x in v]
        out[k] = v
    return out


# --- text view --------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_cell(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_cell(x)}" for k, x in v.items()) + "}"
    return "-" if v is None else str(v)


def _table(rows: list[dict]) -> list[str]:
    cols = list(dict.fromkeys(k for r in rows for k in r))
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(wd) for c, wd in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * wd for wd in widths))
    lines += ["  ".join(x.ljust(wd) for x, wd in zip(row, widths)).rstrip() for row in cells]
    return lines


def render_text(report: RunReport) -> str:
    lines = [f"# {report.command}"]
    scalars = {k: v for k, v in report.outputs.items()
               if not (isinstance(v, list) and v and isinstance(v[0], dict))}
    if scalars:
        width = max(len(k) for k in scalars)
        lines += [f"{k.ljust(width)}  {_cell(v)}" for k, v in scalars.items()]
    for k, v in report.outputs.items():
        if k not in scalars:
            lines += ["", f"[{k}]", *_table(v)]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("seed", 0), ("json", False), ("tol", None), ("timing", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    command = " ".join(x for x in (args.command, getattr(args, "action", None)) if x)
    start = time.perf_counter()
    try:
        outputs, code = args.func(args)
    except Exception as exc:  # noqa: BLE001 - every failure maps to exit 1
        print(f"toricprec: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = RunReport(command, _echo_inputs(args), outputs, args.seed, exit_code=code)
    if args.timing:
        report.timing_ms = round((time.perf_counter() - start) * 1000, 3)
    sys.stdout.write(dumps(report.to_dict()) if args.json else render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
