"""Command line interface: ``slcone <command> [options]``.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 spectrum
truncated, 4 enumeration resource limit, 5 malformed input file, 6 internal
inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import __version__
from .errors import SLConeError
from .files import cone_from_file, dumps_spectrum, load_config
from .lattice import DEFAULT_MAX_POINTS, hl_spectrum
from .moduli import (
    SingularConfig,
    expected_dim_family,
    expected_dim_moduli,
    fredholm_index,
)
from .spectrum import ConeDescriptor, parse_rational, stability_index
from .verify import hl_row, run_battery

log = logging.getLogger("slcone")


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rates_arg(text: str):
    return [_rational_arg(part) for part in text.split(",") if part.strip()]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return "; ".join(str(v) for v in value)
    if value is None:
        return ""
    return str(value)


def _text_table(header, rows) -> str:
    cells = [list(map(str, header))] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _render_rows(header, rows, fmt) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"
    if fmt == "csv":
        return _csv_text(header, [[_cell(v) for v in row] for row in rows])
    return _text_table(header, rows)


def _render_record(record: dict, fmt) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    if fmt == "csv":
        return _csv_text(list(record), [[_cell(v) for v in record.values()]])
    width = max(len(k) for k in record)
    return "".join(f"{k.ljust(width)}  {_cell(v)}\n" for k, v in record.items())


def cmd_hl_table(args) -> str:
    m_min = args.m_min if args.m_min is not None else (args.m or 3)
    m_max = args.m_max if args.m_max is not None else (args.m or 12)
    if not 3 <= m_min <= m_max:
        raise _Usage(f"need 3 <= m-min <= m-max, got {m_min}, {m_max}")
    rows = []
    for m in range(m_min, m_max + 1):
        r = hl_row(m, threads=args.threads, max_points=args.max_points)
        rows.append([m, r.N2, r.m2, r.s_ind])
    return _render_rows(["m", "N(2)", "m(2)", "s-ind"], rows, args.format)


def cmd_spectrum(args) -> str:
    if args.m is None or args.lambda_max is None:
        raise _Usage("hl-spectrum needs --m and --lambda-max")
    if args.m < 3 or args.lambda_max < 0:
        raise _Usage("need m >= 3 and lambda-max >= 0")
    spec = hl_spectrum(
        args.m,
        args.lambda_max,
        threads=args.threads,
        max_points=args.max_points or DEFAULT_MAX_POINTS,
    )
    if args.format == "json":
        return dumps_spectrum(spec, 1, args.m - 1)
    rows = [[lam.numerator, lam.denominator, k] for lam, k in spec.entries]
    if args.format == "csv":
        return _csv_text(["lambda_num", "lambda_den", "mult"], rows)
    return _text_table(["lambda", "mult"], [[str(lam), k] for lam, k in spec.entries])


def _cone_from_args(args) -> ConeDescriptor:
    if args.spectrum:
        return cone_from_file(args.spectrum, b0=args.b0, dim_g=args.dim_g)
    if args.m is None:
        raise _Usage("give --spectrum FILE or --m for the built-in Harvey-Lawson cone")
    if args.m < 3:
        raise _Usage("m must be >= 3")
    cone = ConeDescriptor.harvey_lawson(args.m, threads=args.threads, max_points=args.max_points)
    if args.b0 is not None or args.dim_g is not None:
        cone = ConeDescriptor(
            cone.m,
            cone.link_components if args.b0 is None else args.b0,
            cone.sym_dim if args.dim_g is None else args.dim_g,
            cone.source,
            cone.label,
        )
    return cone


def cmd_index(args) -> str:
    return _render_record(stability_index(_cone_from_args(args)).as_dict(), args.format)


def cmd_moduli(args) -> str:
    if not args.config:
        raise _Usage("moduli needs --config FILE")
    config = load_config(args.config, threads=args.threads, max_points=args.max_points)
    if config.family_dim > 0:
        report = expected_dim_family(config)
    else:
        report = expected_dim_moduli(config)
    return _render_record(report.as_dict(), args.format)


def cmd_fredholm(args) -> str:
    if args.rates is None:
        raise _Usage("fredholm needs --rates")
    if args.config:
        config = load_config(args.config, threads=args.threads, max_points=args.max_points)
    else:
        cone = _cone_from_args(args)
        config = SingularConfig(cone.m, tuple([cone] * len(args.rates)))
    return _render_record(fredholm_index(config, args.rates).as_dict(), args.format)


def cmd_verify(args):
    if args.m_max is None:
        raise _Usage("verify needs --m-max")
    if args.m_max < 3:
        raise _Usage(f"m-max must be >= 3, got {args.m_max}")
    checks = run_battery(args.m_max, threads=args.threads, max_points=args.max_points)
    ok = all(c.passed for c in checks)
    if args.format == "table":
        text = "".join(c.line() + "\n" for c in checks)
        text += f"{sum(c.passed for c in checks)}/{len(checks)} checks passed\n"
    else:
        rows = [[c.name, c.passed, c.detail] for c in checks]
        text = _render_rows(["check", "passed", "detail"], rows, args.format)
    return text, 0 if ok else 1


class _Usage(Exception):
    pass


COMMANDS = {
    "hl-table": (cmd_hl_table, "reproduce the Harvey-Lawson stability table"),
    "hl-spectrum": (cmd_spectrum, "write the Harvey-Lawson link spectrum"),
    "index": (cmd_index, "stability index of a cone"),
    "moduli": (cmd_moduli, "moduli dimension report for a configuration file"),
    "fredholm": (cmd_fredholm, "Fredholm index of the weighted Laplacian"),
    "verify": (cmd_verify, "run the self-check battery"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slcone",
        description="Spectra, stability indices and moduli dimensions of SL cones.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json", "csv"], default="table")
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="worker processes for lattice enumeration")
    common.add_argument("--max-points", type=_positive_int, default=None,
                        help=f"enumeration cap (default {DEFAULT_MAX_POINTS})")
    common.add_argument("--output", "-o", help="write to FILE instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.add_argument("--m", type=int)
        if name == "hl-table":
            p.add_argument("--m-min", type=int)
            p.add_argument("--m-max", type=int)
        if name == "verify":
            p.add_argument("--m-max", type=int)
        if name == "hl-spectrum":
            p.add_argument("--lambda-max", type=int)
        if name in ("index", "fredholm"):
            p.add_argument("--spectrum", metavar="FILE")
            p.add_argument("--b0", type=_positive_int)
            p.add_argument("--dim-g", type=int)
        if name in ("moduli", "fredholm"):
            p.add_argument("--config", metavar="FILE")
        if name == "fredholm":
            p.add_argument("--rates", type=_rates_arg, metavar="LIST",
                           help="comma separated rationals, e.g. 9/4,9/4")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler = COMMANDS[args.command][0]
    try:
        result = handler(args)
    except _Usage as exc:
        parser.error(str(exc))
    except SLConeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    text, code = result if isinstance(result, tuple) else (result, 0)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
