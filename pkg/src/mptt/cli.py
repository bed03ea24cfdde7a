"""Command-line interface.

Every command reads a panel CSV (or a synthetic spec), runs one analysis
and writes JSON/CSV files named ``<prefix>_<role>`` plus a
``<prefix>_<command>_metadata.json`` record holding the resolved
configuration. Outputs are a pure function of inputs and flags.

Exit codes: 0 ok, 2 bad configuration, 3 data/IO error, 4 numerical error.
Failures print one line to stderr: ``mptt: error: <kind>: <Type>: <message>``.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from ._io import dumps_json
from .break_scan import CRITERIA, DEFAULT_TRIM, compare_models, scan
from .exceptions import DataError, NumericalError
from .panel import (
    PanelSchema,
    growth_rates,
    normalize_index,
    panel_to_csv,
    read_panel,
    regime_summary,
    to_log,
)
from .phase import FORMS, classical_fit, extrapolation_gap, fit_table_csv, two_phase_fit
from .regress import IC_CONVENTION
from .report import EmptyReport, emit_report, write_files
from .synth import RNG_ALGORITHM, generate, load_spec, paper_like_spec, spec_to_json

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4
OUTPUT_DIR_ENV = "MPTT_OUTPUT_DIR"


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def parse_window(text):
    start, sep, end = str(text).partition(":")
    try:
        if not sep:
            raise ValueError
        start, end = int(start), int(end)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be START:END, got {text!r}") from None
    if start > end:
        raise argparse.ArgumentTypeError(f"window start {start} is after end {end}")
    return start, end


def _schema(text):
    try:
        return PanelSchema.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = _Parser(prog="mptt", description="Two-phase money-price transmission analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--out", default=None,
                        help=f"output directory (default: ${OUTPUT_DIR_ENV} or the current directory)")
    common.add_argument("--prefix", default="mptt", help="output file name prefix")
    common.add_argument("--format", choices=("both", "json", "csv"), default="both",
                        help="which result files to write (metadata JSON is always written)")

    data = _Parser(add_help=False)
    data.add_argument("--input", required=True, help="panel CSV")
    data.add_argument("--schema", type=_schema, default=PanelSchema(),
                      help="column names, e.g. year=year,price=cpi,money=money_supply")
    data.add_argument("--min-year", type=int)
    data.add_argument("--max-year", type=int)
    data.add_argument("--base-year", type=int,
                      help="normalization year (default: first panel year in the window)")
    data.add_argument("--base-value", type=float, default=100.0)
    data.add_argument("--no-normalize", action="store_true", help="fit raw levels")

    def add(name, help_, *parents):
        return sub.add_parser(name, help=help_, parents=[common, *parents])

    p = add("summary", "regime multiples, growth rates and indexed trajectories", data)
    p.add_argument("--window", type=parse_window, action="append", required=True,
                   help="regime window START:END; repeatable")

    p = add("fit-classical", "one-phase fit", data)
    p.add_argument("--window", type=parse_window, default=(1500, 1600))

    p = add("fit-twophase", "two-phase fit at a fixed transition year", data)
    p.add_argument("--window", type=parse_window, default=(1500, 1700))
    p.add_argument("--tau", type=int, default=1600)
    p.add_argument("--form", choices=FORMS, default="step")

    p = add("scan", "information-criterion break scan", data)
    p.add_argument("--window", type=parse_window, default=(1500, 1700))
    p.add_argument("--trim", type=int, default=DEFAULT_TRIM)
    p.add_argument("--criterion", choices=CRITERIA, default="bic")
    p.add_argument("--form", choices=FORMS, default="step")

    p = add("gap", "classical extrapolation gap", data)
    p.add_argument("--train-window", type=parse_window, default=(1500, 1600))
    p.add_argument("--window", type=parse_window, default=(1500, 1700), help="evaluation window")

    p = add("compare", "one-phase vs two-phase comparison plus plot data", data)
    p.add_argument("--window", type=parse_window, default=(1500, 1700))
    p.add_argument("--tau", type=int, default=1600)
    p.add_argument("--form", choices=FORMS, default="step")

    p = add("synth", "generate a synthetic panel from a planted spec")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="SyntheticSpec JSON file")
    src.add_argument("--paper-like", action="store_true", help="use the built-in canonical spec")
    p.add_argument("--seed", type=int)
    p.add_argument("--sigma", type=float, help="override noise_sigma")
    return parser


def _resolved_config(args):
    cfg = {}
    for key, value in sorted(vars(args).items()):
        if isinstance(value, PanelSchema):
            value = {"year": value.year, "price": value.price, "money": value.money}
        elif isinstance(value, tuple):
            value = list(value)
        elif isinstance(value, list):
            value = [list(v) if isinstance(v, tuple) else v for v in value]
        cfg[key] = value
    return cfg


def _load(args, base_window):
    panel = read_panel(args.input, args.schema, args.min_year, args.max_year)
    if args.no_normalize:
        return panel, None
    base = args.base_year
    if base is None:
        in_window = panel.select(base_window).years if base_window else panel.years
        if len(in_window) == 0:
            in_window = panel.years
        if len(in_window) == 0:
            raise DataError("panel is empty after year filtering")
        base = int(in_window[0])
    norm = {"base_year": base, "base_value": args.base_value}
    return normalize_index(panel, base, args.base_value), norm


def _result_files(args, stem, record, csv_text):
    files = {}
    if args.format in ("both", "json"):
        files[f"{args.prefix}_{stem}.json"] = dumps_json(record)
    if args.format in ("both", "csv") and csv_text is not None:
        files[f"{args.prefix}_{stem}.csv"] = csv_text
    return files


def _plot_files(args, files):
    return files if args.format in ("both", "csv") else {}


def run_command(args):
    """Dispatch ``args`` and return ``(files, metadata_extra)``; nothing is written."""
    cmd = args.command
    config = _resolved_config(args)
    extra = {}

    if cmd == "synth":
        spec = load_spec(args.spec) if args.spec else paper_like_spec()
        changes = {}
        if args.seed is not None:
            changes["seed"] = args.seed
        if args.sigma is not None:
            changes["noise_sigma"] = args.sigma
        spec = spec.with_(**changes) if changes else spec
        panel = generate(spec)
        files = {
            f"{args.prefix}_synthetic_panel.csv": panel_to_csv(panel),
            f"{args.prefix}_synthetic_spec.json": spec_to_json(spec),
        }
        extra["rng_algorithm"] = RNG_ALGORITHM
        extra["noise_note"] = "noise_sigma is a test-design choice, not an empirical estimate"
        return files, extra

    first_window = args.window[0] if cmd == "summary" else getattr(args, "window", None)
    if cmd == "gap":
        first_window = args.train_window
    panel, norm = _load(args, first_window)
    logpanel = to_log(panel)
    extra["normalization"] = norm
    extra["ic_convention"] = IC_CONVENTION
    files = {}

    if cmd == "summary":
        regimes = [regime_summary(panel, s, e) for s, e in args.window]
        span = (min(s for s, _ in args.window), max(e for _, e in args.window))
        report = emit_report(args.prefix, regimes=regimes, indexed_panel=panel.select(span))
        record = {"config": config, "regimes": [r.to_dict() for r in regimes]}
        if args.format in ("both", "json"):
            files[f"{args.prefix}_main_table1_two_regime_summary.json"] = dumps_json(record)
        files.update(_plot_files(args, report))
        growth = growth_rates(logpanel.select(span))
        files.update(_result_files(args, "growth_rates", {"config": config, **growth.to_dict()},
                                   growth.to_csv()))
    elif cmd == "fit-classical":
        fit = classical_fit(logpanel, args.window)
        files.update(_result_files(args, "classical_fit", {"config": config, **fit.to_dict()},
                                   fit_table_csv([fit])))
    elif cmd == "fit-twophase":
        fit = two_phase_fit(logpanel, args.tau, args.window, args.form)
        files.update(_result_files(args, "twophase_fit", {"config": config, **fit.to_dict()},
                                   fit_table_csv([fit])))
    elif cmd == "scan":
        result = scan(logpanel, args.window, trim=args.trim, criterion=args.criterion, form=args.form)
        files.update(_result_files(args, "twophase_break_scan", {"config": config, **result.to_dict()},
                                   result.to_csv()))
    elif cmd == "gap":
        fit = classical_fit(logpanel, args.train_window)
        gap = extrapolation_gap(logpanel, fit, args.window)
        record = {"config": config, "fit": fit.to_dict(), **gap.to_dict()}
        files.update(_result_files(args, "classical_gap", record, gap.to_csv()))
        files.update(_plot_files(args, emit_report(args.prefix, logpanel=logpanel, fits=[fit])))
    elif cmd == "compare":
        cmp_ = compare_models(logpanel, args.window, args.tau, args.form)
        pre = classical_fit(logpanel, (args.window[0], args.tau))
        record = {"config": config, **cmp_.to_dict(), "pre_break_classical": pre.to_dict()}
        files.update(_result_files(args, "twophase_model_summary", record,
                                   fit_table_csv([cmp_.one_phase, cmp_.two_phase])))
        files.update(_plot_files(args, emit_report(
            args.prefix, logpanel=logpanel, fits=[pre, cmp_.two_phase])))
    else:  # pragma: no cover - argparse restricts the choices
        raise ConfigError(f"unknown command {cmd!r}")
    return files, extra


def _fail(kind, exc):
    msg = " ".join(str(exc).split())
    print(f"mptt: error: {kind}: {type(exc).__name__}: {msg}", file=sys.stderr)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise ConfigError("a command is required")
        if getattr(args, "trim", DEFAULT_TRIM) < 2:
            raise ConfigError("--trim must be at least 2")
        out_dir = args.out or os.environ.get(OUTPUT_DIR_ENV) or "."
        files, extra = run_command(args)
    except (ConfigError, EmptyReport) as exc:
        _fail("config", exc)
        return EXIT_CONFIG
    except NumericalError as exc:
        _fail("numerical", exc)
        return EXIT_NUMERIC
    except (DataError, OSError, UnicodeDecodeError) as exc:
        _fail("data", exc)
        return EXIT_DATA
    except ValueError as exc:
        _fail("config", exc)
        return EXIT_CONFIG

    metadata = {
        "command": args.command,
        "version": __version__,
        "config": _resolved_config(args),
        **extra,
        "outputs": sorted(files),
    }
    files[f"{args.prefix}_{args.command}_metadata.json"] = dumps_json(metadata)
    try:
        write_files(out_dir, files)
    except OSError as exc:
        _fail("data", exc)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
