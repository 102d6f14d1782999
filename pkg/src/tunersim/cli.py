"""Command-line interface.

    tunersim run --config PATH|NAME [--out DIR] [--workers N]
    tunersim analyze --trace PATH --delta-t N [--tolerance F]
    tunersim compare RUN_DIR... [--eps-e F] [--eps-theta F] [--format csv|json]
    tunersim plot --trace PATH --quantity Q --scale S [--out DIR]
    tunersim list

Exit codes: 0 success, 1 configuration, parse or argument error, 2 divergence.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from tunersim import __version__
from tunersim.core.errors import DivergenceError
from tunersim.formats.export import read_trace
from tunersim.harness.compare import DEFAULT_EPS_E, DEFAULT_EPS_THETA, compare
from tunersim.harness.engine import analyze_trace, load_run, run_experiment
from tunersim.harness.library import ConfigLibrary, register_builtin_configs, resolve_config
from tunersim.harness.plotdata import PlotQuantity, PlotScale, write_trace_plot_data

logger = logging.getLogger("tunersim")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the configuration error code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _cmd_run(args: argparse.Namespace) -> int:
    config = resolve_config(args.config)
    artifact = run_experiment(config, out_dir=args.out, max_workers=args.workers)
    for report in artifact.report.algorithms:
        line = (
            f"{report.label}: |e_y|={abs(report.final_e_y):.6g}"
            f" ||theta~||={report.final_param_err:.6g}"
        )
        if report.envelope is not None:
            line += f" envelope={'holds' if report.envelope.holds else 'violated'}"
        print(line)
    print(f"artifacts: {artifact.directory}")
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    report = analyze_trace(args.trace, delta_t=args.delta_t, tolerance=args.tolerance)
    print(report.model_dump_json(indent=2))
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    runs = [load_run(directory) for directory in args.runs]
    table = compare(*runs, eps_e=args.eps_e, eps_theta=args.eps_theta)
    sys.stdout.write(table.to_json() if args.format == "json" else table.to_csv())
    return EXIT_OK


def _cmd_plot(args: argparse.Namespace) -> int:
    trace_path = Path(args.trace)
    records = read_trace(trace_path)
    directory = Path(args.out) if args.out else trace_path.parent
    path = write_trace_plot_data(
        records, PlotQuantity(args.quantity), PlotScale(args.scale), directory
    )
    print(path)
    return EXIT_OK


def _cmd_list(args: argparse.Namespace) -> int:
    register_builtin_configs()
    for meta in ConfigLibrary.list_all():
        inferred = f" (inferred: {', '.join(meta.inferred)})" if meta.inferred else ""
        print(f"{meta.name}: {meta.source_kind}, horizon {meta.horizon}, "
              f"{', '.join(meta.algorithms)}{inferred}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the tunersim command."""
    parser = _Parser(
        prog="tunersim",
        description="Online parameter identification with gradient and high-order tuners",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run an experiment config")
    run.add_argument("--config", required=True, help="Config file or bundled config name")
    run.add_argument("--out", default=None, help="Run root directory")
    run.add_argument("--workers", type=int, default=1, help="Algorithms run in parallel")
    run.set_defaults(handler=_cmd_run)

    analyze = commands.add_parser("analyze", help="Analyse a saved trace")
    analyze.add_argument("--trace", required=True, help="trace_<label>.csv or .json")
    analyze.add_argument("--delta-t", type=int, required=True, help="PE window length")
    analyze.add_argument("--tolerance", type=float, default=None, help="Envelope tolerance")
    analyze.set_defaults(handler=_cmd_analyze)

    comp = commands.add_parser("compare", help="Compare run directories")
    comp.add_argument("runs", nargs="+", help="Run directories")
    comp.add_argument("--eps-e", type=float, default=DEFAULT_EPS_E, help="|e_y| threshold")
    comp.add_argument(
        "--eps-theta", type=float, default=DEFAULT_EPS_THETA, help="||theta~|| threshold"
    )
    comp.add_argument("--format", choices=["csv", "json"], default="csv")
    comp.set_defaults(handler=_cmd_compare)

    plot = commands.add_parser("plot", help="Write (k, value) plot data for a trace")
    plot.add_argument("--trace", required=True, help="trace_<label>.csv or .json")
    plot.add_argument("--quantity", choices=[q.value for q in PlotQuantity], required=True)
    plot.add_argument("--scale", choices=[s.value for s in PlotScale], default="linear")
    plot.add_argument("--out", default=None, help="Output directory (default: trace directory)")
    plot.set_defaults(handler=_cmd_plot)

    listing = commands.add_parser("list", help="List bundled configs")
    listing.set_defaults(handler=_cmd_list)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        return int(args.handler(args))
    except DivergenceError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (ValueError, OSError) as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
