"""
ringlight command-line interface.

Commands:
    simulate   integrate a configured run and write its time series
    chart      Re(nu) over a parameter grid
    figures    data behind the photon-yield, occurrence-time and
               entanglement-ratio figures
    optimize   search a family of profiles for the largest Re(nu)

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from ringlight import __version__
from ringlight.cli.config_file import (
    load_chart_request, load_optimize_request, load_run_config,
)
from ringlight.cli.output import dumps_json, write_table, write_text
from ringlight.core.exceptions import EXIT_OK, ConfigError, RinglightError, exit_code_for
from ringlight.core.logging import get_logger, log_context, setup_logging
from ringlight.schemas.reports import FigureSidecar, OptimizeReport
from ringlight.services.figures import FIGURE_ALIASES, FIGURES, build_figure, figure_name
from ringlight.services.floquet import optimize_resonance, stability_chart
from ringlight.services.simulation import simulation_table

logger = get_logger(__name__)

CHART_COLUMNS = ["axis1", "axis2", "re_nu"]


def _assignment(text: str, flag: str) -> Tuple[str, List[float]]:
    name, sep, values = text.partition("=")
    if not sep or not name.strip():
        raise ConfigError(f"{flag} expects NAME=VALUE[,VALUE], got {text!r}")
    try:
        return name.strip(), [float(v) for v in values.split(",")]
    except ValueError:
        raise ConfigError(f"{flag} has a non-numeric value: {text!r}") from None


def _parse_bounds(items: Optional[List[str]]) -> Dict[str, Tuple[float, float]]:
    bounds = {}
    for item in items or []:
        name, values = _assignment(item, "--bound")
        if len(values) != 2:
            raise ConfigError(f"--bound {name} needs exactly two values")
        bounds[name] = (values[0], values[1])
    return bounds


def _parse_fixed(items: Optional[List[str]]) -> Dict[str, float]:
    fixed = {}
    for item in items or []:
        name, values = _assignment(item, "--fix")
        if len(values) != 1:
            raise ConfigError(f"--fix {name} needs exactly one value")
        fixed[name] = values[0]
    return fixed


def _check_threads(threads: Optional[int]) -> Optional[int]:
    if threads is not None and threads < 0:
        raise ConfigError("--threads must be >= 0 (0 = one per CPU)")
    return threads


def cmd_simulate(args: argparse.Namespace) -> int:
    overrides = {
        "run": {"n_periods": args.n_periods, "samples_per_period": args.samples_per_period,
                "method": args.method},
        "bath": {"gamma": args.gamma, "nbar": args.nbar},
        "output": {"path": args.out, "format": args.format},
    }
    config = load_run_config(args.config, overrides)
    frame, parameters = simulation_table(config, threads=_check_threads(args.threads))
    write_table(frame, config.output.path, config.output.format, "simulate", parameters)
    logger.info("simulate finished", **log_context(rows=len(frame), path=config.output.path))
    return EXIT_OK


def cmd_chart(args: argparse.Namespace) -> int:
    overrides = {"family": args.family, "axis1": args.axis1, "axis2": args.axis2,
                 "f0": args.f0, "period": args.period, "block": args.block}
    request = load_chart_request(args.config, overrides)
    chart = stability_chart(request.family, request.axis1.values(), request.axis2.values(),
                            f0=request.f0, period=request.period, block=request.block,
                            threads=_check_threads(args.threads))
    frame = pd.DataFrame(chart.rows(), columns=CHART_COLUMNS)
    parameters = request.model_dump()
    parameters["axis_names"] = list(chart.axis_names)
    write_table(frame, args.out, args.format or "csv", "chart", parameters)
    return EXIT_OK


def cmd_figures(args: argparse.Namespace) -> int:
    names = sorted(FIGURES) if args.which == "all" else [figure_name(args.which)]
    out_dir = Path(args.out or ".")
    fmt = args.format or "csv"
    threads = _check_threads(args.threads)
    for name in names:
        data = build_figure(name, threads=threads)
        data_file = out_dir / f"{name}.{fmt}"
        write_table(data.frame, str(data_file), fmt, name, data.parameters)
        sidecar = FigureSidecar(figure=name, data_file=data_file.name,
                                columns=[str(c) for c in data.frame.columns],
                                parameters=data.parameters)
        write_text(dumps_json(sidecar), str(out_dir / f"{name}.meta.json"))
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    overrides = {"family": args.family, "budget": args.budget, "grid_points": args.grid_points,
                 "bounds": _parse_bounds(args.bound), "fixed": _parse_fixed(args.fix)}
    request = load_optimize_request(args.config, overrides)
    result = optimize_resonance(request.family, request.bounds, request.budget,
                                fixed=request.fixed, grid_points=request.grid_points,
                                threads=_check_threads(args.threads))
    report = OptimizeReport(family=request.family, best_params=result.params,
                            nu=result.nu, evaluations=result.evaluations)
    write_text(dumps_json(report), args.out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "simulate": cmd_simulate,
    "chart": cmd_chart,
    "figures": cmd_figures,
    "optimize": cmd_optimize,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file")
    common.add_argument("--out", help="output file (directory for figures); stdout if omitted")
    common.add_argument("--format", choices=["csv", "json"], help="output format")
    common.add_argument("--threads", type=int, help="worker threads, 0 = one per CPU")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(
        prog="ringlight",
        description="Entangled light from a parametrically modulated ring resonator.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[common], help="integrate a configured run")
    simulate.add_argument("--n-periods", type=float)
    simulate.add_argument("--samples-per-period", type=int)
    simulate.add_argument("--gamma", type=float)
    simulate.add_argument("--nbar", type=float)
    simulate.add_argument("--method", choices=["moments", "propagator"])

    chart = sub.add_parser("chart", parents=[common], help="stability chart of Re(nu)")
    chart.add_argument("--family", choices=["rectangular", "sinusoidal"])
    chart.add_argument("--axis1", help="start, stop[, num]: period (sinusoidal) or f_r")
    chart.add_argument("--axis2", help="start, stop[, num]: h (sinusoidal) or t1*f1")
    chart.add_argument("--f0", type=float)
    chart.add_argument("--period", type=float)
    chart.add_argument("--block", choices=["+", "-"])

    figures = sub.add_parser("figures", parents=[common], help="figure data files")
    figures.add_argument("which", nargs="?", default="all",
                         choices=sorted(FIGURES) + sorted(FIGURE_ALIASES) + ["all"])

    optimize = sub.add_parser("optimize", parents=[common], help="maximize Re(nu)")
    optimize.add_argument("--family", choices=["rectangular", "sinusoidal"])
    optimize.add_argument("--budget", type=int)
    optimize.add_argument("--grid-points", type=int)
    optimize.add_argument("--bound", action="append", metavar="NAME=LO,HI")
    optimize.add_argument("--fix", action="append", metavar="NAME=VALUE")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    logger.info("command started", command=args.command)
    try:
        return COMMANDS[args.command](args)
    except RinglightError as exc:
        code = exit_code_for(exc)
        logger.debug("command failed", command=args.command, exit_code=code,
                     error_type=type(exc).__name__)
        print(f"ringlight {args.command}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
