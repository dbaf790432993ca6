"""
Walk Teleport Auditor - Application Entry
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from src.cli.commands import EXIT_ERROR, cmd_graph_check, cmd_run, cmd_verify_paper
from src.core.graphshift import PaperVariant
from src.core.models import RunConfig
from src.core.protocol import CONVENTIONS
from src.core.verify import DEFAULT_SAMPLES, DEFAULT_SEED

logger = logging.getLogger(__name__)

VARIANTS = [v.value for v in PaperVariant]


def parse_amplitudes(text: str) -> tuple[complex, ...]:
    """Comma-separated Python complex literals, e.g. '0.6,0.8j,0'"""
    try:
        return tuple(complex(part.strip().replace(" ", "")) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Cannot parse amplitudes '{text}'") from None


def parse_outcome(text: str) -> tuple[int, int]:
    try:
        position, j = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Outcome must be 'POSITION,J', got '{text}'") from None
    return position, j


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walk-teleport",
        description="Simulate and audit two-coin quantum walk teleportation.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify-paper", help="Audit the cycled-path protocol claims")
    verify.add_argument("--variant", choices=VARIANTS, default=PaperVariant.REARRANGED.value)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Random inputs per recovery row")
    verify.add_argument("--format", choices=["text", "json"], default="text")
    verify.add_argument("--out", help="Write the report to a file")

    run = sub.add_parser("run", help="Run a protocol and print its outcome ledger")
    run.add_argument("--protocol", default="paper", help="Builtin name (paper, paper:<variant>, sanity) or JSON path")
    run.add_argument("--variant", choices=VARIANTS, help="Shift variant for the builtin paper protocol")
    run.add_argument("--input", required=True, help="'a0,a1,a2' amplitudes or 'random'")
    run.add_argument("--count", type=int, default=1, help="Number of random inputs")
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--outcome", type=parse_outcome, help="Only this 'POSITION,J' outcome")
    run.add_argument("--convention", choices=list(CONVENTIONS), default="conjugate")
    run.add_argument("--format", choices=["text", "json"], default="text")
    run.add_argument("--out", help="Write the ledger to a file")

    check = sub.add_parser("graph-check", help="Audit a graph's conditional shift")
    check.add_argument("graph", help="Builtin (paper:<variant>, cycle:N, path:N) or graph JSON path")
    check.add_argument("--format", choices=["text", "json"], default="text")
    check.add_argument("--out", help="Write the audit to a file")
    return parser


def _run_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    if args.input.strip().lower() == "random":
        amplitudes, count = None, args.count
    else:
        try:
            amplitudes, count = parse_amplitudes(args.input), None
        except argparse.ArgumentTypeError as e:
            parser.error(str(e))
    try:
        return RunConfig(
            protocol=args.protocol,
            variant=args.variant,
            amplitudes=amplitudes,
            random_count=count,
            seed=args.seed,
            outcome=args.outcome,
            convention=args.convention,
            output_format=args.format,
        )
    except ValueError as e:
        parser.error(str(e))


def run_app(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, configure logging and dispatch"""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        if args.command == "verify-paper":
            return cmd_verify_paper(args.variant, args.seed, args.format, args.out, args.samples)
        if args.command == "run":
            return cmd_run(_run_config(args, parser), args.out)
        return cmd_graph_check(args.graph, args.format, args.out)
    except (ValueError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
