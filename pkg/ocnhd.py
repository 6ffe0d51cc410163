"""ocnhd: history-determinism toolkit for one-counter nets."""

import argparse
import asyncio
import logging
import os
import sys
from collections.abc import Sequence

from commands import (
    CheckHdCommand,
    Command,
    DeterminizeCommand,
    EquivCommand,
    GenerateCommand,
    GoodSetCommand,
    HelpCommand,
    IncludeCommand,
    MemberCommand,
    PlayCommand,
    PrefixCommand,
    SimulateCommand,
    UniversalCommand,
)
from commands.base import EXIT_INCONCLUSIVE, EXIT_INPUT_ERROR, SolverTimedOut, get_timeout
from games import parse_caps
from gadgets import CorpusKind


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def all_commands() -> list[Command]:
    return [
        CheckHdCommand(),
        SimulateCommand(),
        MemberCommand(),
        PrefixCommand(),
        IncludeCommand(),
        EquivCommand(),
        UniversalCommand(),
        GoodSetCommand(),
        DeterminizeCommand(),
        *(GenerateCommand(kind) for kind in CorpusKind),
        PlayCommand(),
        HelpCommand(),
    ]


def build_parser(commands: Sequence[Command]) -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="ocnhd", description="History-determinism of one-counter nets")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in commands:
        p = sub.add_parser(command.name, help=command.help)
        command.add_arguments(p)
        p.set_defaults(handler=command)
    return parser


def check_env() -> None:
    """Validate solver settings up front so a bad value fails before any work."""
    raw_caps = os.environ.get("OCNHD_CAPS", "")
    if raw_caps:
        try:
            parse_caps(raw_caps)
        except ValueError:
            raise SystemExit(
                f"OCNHD_CAPS must be increasing positive integers separated by commas, got {raw_caps!r}"
            ) from None
    get_timeout()


def main(argv: Sequence[str] | None = None) -> int:
    debug = os.environ.get("OCNHD_DEBUG", "false").lower() == "true"
    if debug:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    else:
        logging.disable(logging.CRITICAL)

    check_env()
    parser = build_parser(all_commands())
    args = parser.parse_args(argv)
    try:
        return asyncio.run(args.handler.handle(args))
    except SolverTimedOut as exc:
        print(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
