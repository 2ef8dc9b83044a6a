"""Command line front end: ``slicecalc spectrum|verify|eval``.

Exit codes: 0 success, 2 input or schema error, 3 numerical failure,
violated hypothesis or failed check.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .calculus import ContourQuadrature, check_enclosure, function_from_json, taylor_formula
from .config import DEFAULT_INI, RunConfig, load_config
from .contour import Contour
from .errors import SchemaError, SliceCalcError
from .fixtures import FIXTURES, enclosing_contour, load_fixture
from .io import dumps, load_operator, operator_to_json, read_json
from .operators import CliffordOperator
from .resolvent import ResolventSide
from .spectrum import scan_spectrum
from .verify import SUITES, Overrides, report_passed, run_suite

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("slicecalc")


def _operator(arg: str) -> CliffordOperator:
    """A path to operator JSON, or ``fixture:<name>`` for a shipped fixture."""
    if arg.startswith("fixture:"):
        return load_fixture(arg.split(":", 1)[1])[0]
    return load_operator(arg)


def _json_arg(arg: str):
    """Inline JSON (starting with '{') or a path to a JSON file."""
    if arg.lstrip().startswith("{"):
        try:
            return json.loads(arg)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid inline JSON: {exc}") from exc
    return read_json(arg)


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def _emit(args, cfg: RunConfig, filename: str, payload: str) -> None:
    if args.out is None:
        sys.stdout.write(payload)
        return
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / filename).write_text(payload)
    print(f"wrote {out / filename}", file=sys.stderr)


def cmd_spectrum(args) -> int:
    cfg = _config(args)
    T = _operator(args.input)
    scan = scan_spectrum(T, cfg.scan_config())
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "heatmap.csv").write_text(scan.heatmap_csv())
    (out / "points.json").write_text(dumps(scan.to_json()) + "\n")
    for p in scan.points:
        print(f"point u={p.u:.17g} v={p.v:.17g} sigma_min={p.sigma_min:.3e}")
    print(f"wrote {out / 'heatmap.csv'} and {out / 'points.json'}", file=sys.stderr)
    if scan.flagged:
        print("error: the scan resolved no spectral points", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    overrides = None
    if args.T is not None or args.N is not None:
        if args.T is None:
            raise SchemaError("--N needs --T")
        overrides = Overrides(_operator(args.T), _operator(args.N) if args.N is not None else None)
    report = run_suite(args.suite, cfg, overrides)
    for c in report["checks"]:
        if not c["pass"]:
            why = c.get("message") or f"residual {c['residual']:.3e} > threshold {c['threshold']:.3e}"
            print(f"FAIL {c['check']}: {why}", file=sys.stderr)
    summary = report["summary"]
    print(f"{args.suite}: {summary['total'] - summary['failed']}/{summary['total']} checks passed, "
          f"digest {report['digest']}", file=sys.stderr)
    _emit(args, cfg, f"verify-{args.suite}.json", dumps(report) + "\n")
    return EXIT_OK if report_passed(report) else EXIT_NUMERIC


def cmd_eval(args) -> int:
    cfg = _config(args)
    T = _operator(args.T)
    f = function_from_json(_json_arg(args.f), T.n)
    side = ResolventSide.parse(args.side if args.side else f.side)
    scan = scan_spectrum(T, cfg.scan_config())
    if scan.flagged:
        raise SliceCalcError("spectral scan of T found no points")
    payload: dict = {"function": f.to_json(), "side": side.value}
    if args.taylor is not None:
        N = _operator(args.taylor)
        scan_N = scan_spectrum(N, cfg.scan_config())
        eps = 1.05 * scan_N.radius
        contour = (Contour.from_json(_json_arg(args.contour)) if args.contour
                   else enclosing_contour(scan, np.eye(T.n)[0], cfg.radius_factor, 1.5 * eps, cfg.nodes))
        report, lhs, rhs = taylor_formula(f, T, N, contour, args.K, side, eps, scan, scan_N,
                                          return_operators=True)
        payload.update({"contour": contour.to_json(), "K": args.K, "residual": report.residual,
                        "term_norms": report.term_norms, "f(T+N)": operator_to_json(lhs),
                        "taylor_sum": operator_to_json(rhs)})
    else:
        contour = (Contour.from_json(_json_arg(args.contour)) if args.contour
                   else enclosing_contour(scan, np.eye(T.n)[0], cfg.radius_factor, nodes=cfg.nodes))
        check_enclosure(contour, scan)
        payload.update({"contour": contour.to_json(), "result": operator_to_json(ContourQuadrature(T, contour, side).apply(f))})
    _emit(args, cfg, "eval.json", dumps(payload) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file (see `slicecalc config`)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="seed for fuzz cases (unsigned 64-bit)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="slicecalc", description="S-spectrum and S-functional calculus toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="scan the S-spectrum of an operator")
    p.add_argument("input", help=f"operator JSON path or fixture:<name> ({', '.join(FIXTURES)})")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--T", help="operator replacing the fuzzed T in the pair suites")
    p.add_argument("--N", help="operator replacing N (default 0.05 T)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", parents=[common], help="evaluate f(T) by the S-functional calculus")
    p.add_argument("--f", required=True, help="function JSON (path or inline)")
    p.add_argument("--T", required=True, help="operator JSON path or fixture:<name>")
    p.add_argument("--contour", help="contour JSON (path or inline); default encloses the scan")
    p.add_argument("--side", choices=("left", "right"))
    p.add_argument("--taylor", metavar="N", help="also evaluate f(T+N) through the Taylor formula")
    p.add_argument("--K", type=int, default=20, help="Taylor truncation order")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("config", help="print the default config file")
    p.set_defaults(func=lambda args: print(DEFAULT_INI, end="") or EXIT_OK)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SliceCalcError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (KeyError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
