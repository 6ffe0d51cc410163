"""Decision verbs: history-determinism, simulation, language operations, good sets, determinisation."""

import argparse
import asyncio
import json
import logging

from commands.base import (
    EXIT_INCONCLUSIVE,
    EXIT_INPUT_ERROR,
    EXIT_NEGATIVE,
    EXIT_POSITIVE,
    Command,
    add_caps_option,
    outcome_exit,
)
from determinize import CandidateError, determinize
from games import CappedVerdict, Outcome
from hd import AdamWitness, good_set, is_history_deterministic, letter_game_refuter
from langops import NotHistoryDeterministic, hd_equivalence, hd_inclusion, universality
from netfile import load_net, parse_transition, save_net
from nets import Config, Net, NetError, NetKind
from simulation import SimQuery, from_original_sim, simulates

logger = logging.getLogger(__name__)

REFUTER_CAP = 8
REFUTER_DEPTH = 12

_WORDS = {
    Outcome.EVE_WINS: "yes",
    Outcome.ADAM_WINS: "no",
    Outcome.INCONCLUSIVE: "inconclusive",
    Outcome.UNKNOWN: "unknown",
}


def format_verdict(question: str, verdict: CappedVerdict) -> str:
    return f"{question}: {_WORDS[verdict.outcome]} ({verdict})"


def format_witness(witness: AdamWitness) -> str:
    return json.dumps(witness.to_dict(), indent=2, sort_keys=True)


def _require_counter_net(net: Net, path: str) -> None:
    if net.kind is NetKind.OCA:
        raise NetError(f"{path}: this verb takes a net without zero tests")


class CheckHdCommand(Command):
    name = "check-hd"
    help = "Decide history-determinism of a net"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file")
        add_caps_option(parser)

    async def handle(self, args: argparse.Namespace) -> int:
        net = load_net(args.file)
        _require_counter_net(net, args.file)
        verdict = await self.run_solver(is_history_deterministic, net, args.caps)
        print(format_verdict("history-deterministic", verdict))
        if verdict.outcome is Outcome.ADAM_WINS:
            witness = await asyncio.to_thread(
                letter_game_refuter, net, REFUTER_CAP, REFUTER_DEPTH
            )
            if witness is None:
                print(f"no letter-game witness within cap {REFUTER_CAP}, depth {REFUTER_DEPTH}")
            else:
                print(f"Adam witness (depth {witness.depth}):")
                print(format_witness(witness))
        return outcome_exit(verdict.outcome)


class SimulateCommand(Command):
    name = "simulate"
    help = "Decide whether (B, STATE_B, K_B) simulates (A, STATE_A, K_A)"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file_a")
        parser.add_argument("state_a")
        parser.add_argument("k_a", type=int)
        parser.add_argument("file_b")
        parser.add_argument("state_b")
        parser.add_argument("k_b", type=int)
        parser.add_argument(
            "--original-sim",
            action="store_true",
            help="Stuck-player winning condition instead of final states",
        )
        add_caps_option(parser)

    async def handle(self, args: argparse.Namespace) -> int:
        net_a, net_b = load_net(args.file_a), load_net(args.file_b)
        if args.original_sim:
            net_a, net_b = from_original_sim(net_a, net_b)
        query = SimQuery(net_a, Config(args.state_a, args.k_a), net_b, Config(args.state_b, args.k_b))
        verdict = await self.run_solver(simulates, query, args.caps)
        print(format_verdict("simulates", verdict))
        return outcome_exit(verdict.outcome)


class _PairCommand(Command):
    question = ""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file_a")
        parser.add_argument("file_b")
        add_caps_option(parser)

    async def decide(self, net_a: Net, net_b: Net, caps: list[int] | None) -> CappedVerdict:
        raise NotImplementedError

    async def handle(self, args: argparse.Namespace) -> int:
        net_a, net_b = load_net(args.file_a), load_net(args.file_b)
        try:
            verdict = await self.decide(net_a, net_b, args.caps)
        except NotHistoryDeterministic as exc:
            print(f"error: {exc}")
            if exc.witness is not None:
                print(format_witness(exc.witness))
            return EXIT_INPUT_ERROR
        print(format_verdict(self.question, verdict))
        return outcome_exit(verdict.outcome)


class IncludeCommand(_PairCommand):
    name = "include"
    help = "Is L(A) included in L(B)? (both must be history-deterministic)"
    question = "included"

    async def decide(self, net_a: Net, net_b: Net, caps: list[int] | None) -> CappedVerdict:
        return await self.run_solver(hd_inclusion, net_a, net_b, caps)


class EquivCommand(_PairCommand):
    name = "equiv"
    help = "Is L(A) equal to L(B)? (both must be history-deterministic)"
    question = "equivalent"

    async def decide(self, net_a: Net, net_b: Net, caps: list[int] | None) -> CappedVerdict:
        return await self.run_solver(hd_equivalence, net_a, net_b, caps)


class UniversalCommand(Command):
    name = "universal"
    help = "Does the net accept every word? (exact for history-deterministic nets)"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file")
        add_caps_option(parser)

    async def handle(self, args: argparse.Namespace) -> int:
        net = load_net(args.file)
        verdict = await self.run_solver(universality, net, args.caps)
        print(format_verdict("universal", verdict))
        return outcome_exit(verdict.outcome)


class GoodSetCommand(Command):
    name = "good-set"
    help = "Counter values at which a transition is a good move"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file")
        parser.add_argument("transition", help='Rendered transition, e.g. "X b -1 Y"')
        parser.add_argument("--bound", type=int, default=16)
        add_caps_option(parser)

    async def handle(self, args: argparse.Namespace) -> int:
        net = load_net(args.file)
        _require_counter_net(net, args.file)
        gamma = parse_transition(net, args.transition)
        if args.bound < 8:
            raise NetError("--bound must be at least 8")
        result = await self.run_solver(good_set, net, gamma, args.bound, args.caps)
        print(result.render())
        if result.inconclusive or result.semilinear is None:
            return EXIT_INCONCLUSIVE
        return EXIT_POSITIVE


class DeterminizeCommand(Command):
    name = "determinize"
    help = "Build a deterministic automaton with zero tests for a history-deterministic net"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file")
        parser.add_argument("-o", "--output", required=True)
        parser.add_argument("--bound", type=int, default=16)
        parser.add_argument(
            "--max-bound", type=int, default=64, help="Largest bound tried when a good set has no fit"
        )
        parser.add_argument("--check-len", type=int, default=8)
        add_caps_option(parser)

    async def handle(self, args: argparse.Namespace) -> int:
        net = load_net(args.file)
        _require_counter_net(net, args.file)
        try:
            result = await self.run_solver(
                determinize,
                net,
                args.bound,
                args.caps,
                check_len=args.check_len,
                max_bound=args.max_bound,
            )
        except CandidateError as exc:
            print(f"inconclusive: {exc}")
            return EXIT_INCONCLUSIVE
        save_net(result.doca, args.output)
        print(
            f"I={result.threshold} P={result.period}: {len(result.doca.states)} states, "
            f"{len(result.doca.transitions)} transitions -> {args.output}"
        )
        if result.counterexample is not None:
            print(f"differs from the source on: {' '.join(result.counterexample) or '(empty word)'}")
            return EXIT_NEGATIVE
        return EXIT_POSITIVE
