import argparse
import asyncio
import logging

from commands.base import EXIT_INCONCLUSIVE, EXIT_POSITIVE, Command, add_caps_option
from hd import LetterGame, PlayStatus, ResolverError, good_sets, resolver_strategy
from netfile import load_net, parse_word
from nets import NetError, NetKind

logger = logging.getLogger(__name__)

PROMPT = "adam> "

_ENDINGS = {
    PlayStatus.EVE_STUCK: "Eve loses: she has no move and the word can still be accepted",
    PlayStatus.EVE_REJECTS: "Eve loses: the word is accepted but her run is not",
    PlayStatus.DEAD_WORD: "Eve is safe: no extension of this word is accepted",
}


class PlayCommand(Command):
    name = "play"
    help = "Type letters as Adam; the net's resolver answers as Eve"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file")
        parser.add_argument("--bound", type=int, default=16, help="Good-set sample bound")
        add_caps_option(parser)

    async def handle(self, args: argparse.Namespace) -> int:
        net = load_net(args.file)
        if net.kind is not NetKind.OCN:
            raise NetError("play takes a unary net without zero tests")
        goods = await self.run_solver(good_sets, net, args.bound, args.caps)
        game = LetterGame(net, resolver_strategy(net, goods))
        print(f"start {net.initial_config}; letters: {' '.join(net.alphabet)}; Ctrl-D to stop")
        while game.status is PlayStatus.ONGOING:
            try:
                line = await asyncio.to_thread(input, PROMPT)
            except EOFError:
                print()
                break
            if line.strip() in ("quit", "exit"):
                break
            try:
                letters = parse_word(net, line)
            except NetError as exc:
                print(f"error: {exc}")
                continue
            for letter in letters:
                try:
                    step = game.play(letter)
                except ResolverError as exc:
                    print(f"resolver undecided: {exc}")
                    return EXIT_INCONCLUSIVE
                move = step.transition.render() if step.transition else "-"
                where = step.config if step.config is not None else "stuck"
                print(f"{letter}: {move} -> {where}")
                if step.status is not PlayStatus.ONGOING:
                    print(_ENDINGS[step.status])
                    break
        print(f"word: {' '.join(game.word) or '(empty)'}")
        return EXIT_POSITIVE
