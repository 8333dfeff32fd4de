from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from src.scenario.runner import run_average, run_paper_repro, run_report, run_trace
from src.scenario.schema import load_scenario
from src.units.constants import MODES
from src.utils.env import constants_mode_override, load_env
from src.utils.errors import EXIT_NUMERIC_DOMAIN_ERROR, EXIT_OK, EXIT_PARSE_ERROR, GravDephaseError
from src.utils.logging import configure_logging


logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        logger.error("%s: %s", self.prog, message)
        raise SystemExit(EXIT_PARSE_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="gravdephase",
        description="Gravitational time-dilation dephasing of superpositions, and its collisional competition.",
    )
    parser.add_argument(
        "--constants",
        choices=MODES,
        default=None,
        help="Constants mode; wins over GRAVDEPHASE_CONSTANTS and the scenario's own key.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_trace = sub.add_parser("trace", help="Visibility trace as CSV.")
    p_trace.add_argument("scenario", help="Scenario JSON path or builtin:<name>.")
    p_trace.add_argument("-o", "--output", default=None, help="CSV path (default: stdout).")

    p_report = sub.add_parser("report", help="Timescales and bounds as JSON.")
    p_report.add_argument("scenario", help="Scenario JSON path or builtin:<name>.")
    p_report.add_argument("-o", "--output", default=None, help="JSON path (default: stdout).")

    p_repro = sub.add_parser("paper-repro", help="Nitrogen-bath crossover estimate with rounded constants.")
    p_repro.add_argument("-o", "--output", default=None, help="JSON path (default: stdout).")

    p_avg = sub.add_parser("average", help="Numeric vs analytic long-time mean of V^2.")
    p_avg.add_argument("scenario", help="Scenario JSON path or builtin:<name>.")
    p_avg.add_argument("--window-periods", type=float, required=True, help="Window in slowest beat periods.")
    p_avg.add_argument("--samples", type=int, required=True, help="Quadrature points (raised if too coarse).")
    p_avg.add_argument("-o", "--output", default=None, help="JSON path (default: stdout).")
    return parser


def _dispatch(args: argparse.Namespace) -> int:
    # CLI flag > env var > scenario document.
    mode: Optional[str] = args.constants or constants_mode_override()

    if args.command == "paper-repro":
        payload = run_paper_repro(args.output)
        return EXIT_OK if payload["passed"] else EXIT_NUMERIC_DOMAIN_ERROR

    s = load_scenario(args.scenario, constants_mode=mode)
    logger.info("Scenario %r: constants=%s N=%d", s.name, s.constants.mode, s.subsystems)

    if args.command == "trace":
        run_trace(s, args.output)
        return EXIT_OK

    if args.command == "report":
        _, issues = run_report(s, args.output)
        if issues:
            logger.error("Validation failed (%d issues):", len(issues))
            for e in issues[:50]:
                logger.error(" - %s", e)
            if len(issues) > 50:
                logger.error(" ... and %d more", len(issues) - 50)
            return EXIT_NUMERIC_DOMAIN_ERROR
        return EXIT_OK

    payload = run_average(s, args.window_periods, args.samples, args.output)
    return EXIT_OK if payload["passed"] else EXIT_NUMERIC_DOMAIN_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_env()
    configure_logging()

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help exits with 0; usage errors with EXIT_PARSE_ERROR.
        return int(e.code or 0)

    try:
        return _dispatch(args)
    except GravDephaseError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return e.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
