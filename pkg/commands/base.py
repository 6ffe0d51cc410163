import argparse
import asyncio
import logging
import os
import time
from collections.abc import Callable
from typing import Any, TypeVar

from games import Outcome, parse_caps

logger = logging.getLogger(__name__)

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3

_DEFAULT_TIMEOUT = 120.0
_GRACE = 5.0  # seconds past the cooperative deadline before giving up on the thread

T = TypeVar("T")


def get_timeout() -> float:
    """Seconds allowed per solver call (OCNHD_TIMEOUT)."""
    raw = os.environ.get("OCNHD_TIMEOUT", "")
    if not raw:
        return _DEFAULT_TIMEOUT
    try:
        timeout = float(raw)
    except ValueError:
        raise SystemExit(f"OCNHD_TIMEOUT must be a number of seconds, got {raw!r}") from None
    if timeout <= 0:
        raise SystemExit("OCNHD_TIMEOUT must be positive")
    return timeout


def outcome_exit(outcome: Outcome) -> int:
    if outcome is Outcome.EVE_WINS:
        return EXIT_POSITIVE
    if outcome is Outcome.ADAM_WINS:
        return EXIT_NEGATIVE
    return EXIT_INCONCLUSIVE


def caps_arg(text: str) -> list[int]:
    try:
        return parse_caps(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


class SolverTimedOut(Exception):
    """Raised when a solver thread overruns its deadline and grace period."""


class Command:
    """One CLI verb. Subclasses set name and help, add their arguments and handle a parsed namespace."""

    name = ""
    help = ""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        pass

    async def handle(self, args: argparse.Namespace) -> int:
        raise NotImplementedError

    async def run_solver(self, fn: Callable[..., T], *args: Any, **kwargs: Any) -> T:
        """Run fn in a worker thread with a cooperative deadline keyword."""
        timeout = get_timeout()
        deadline = time.monotonic() + timeout
        try:
            return await asyncio.wait_for(
                asyncio.to_thread(fn, *args, deadline=deadline, **kwargs), timeout + _GRACE
            )
        except asyncio.TimeoutError as exc:
            logger.warning("Solver timed out: %s: %s", type(exc).__name__, exc)
            raise SolverTimedOut(f"{self.name} exceeded {timeout:g}s") from exc


def add_caps_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--caps",
        type=caps_arg,
        default=None,
        help="Comma-separated cap schedule (overrides OCNHD_CAPS)",
    )
