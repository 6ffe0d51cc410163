import argparse

from commands.base import EXIT_NEGATIVE, EXIT_POSITIVE, Command
from netfile import load_net, parse_word
from nets import accepts, is_live_prefix


class MemberCommand(Command):
    name = "member"
    help = "Is WORD accepted by the net?"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file")
        parser.add_argument("word", help='Letters run together ("aab"), or separated by commas')

    async def handle(self, args: argparse.Namespace) -> int:
        net = load_net(args.file)
        word = parse_word(net, args.word)
        if accepts(net, word):
            print("accepted")
            return EXIT_POSITIVE
        print("rejected")
        return EXIT_NEGATIVE


class PrefixCommand(Command):
    name = "prefix"
    help = "Can WORD be extended to an accepted word?"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file")
        parser.add_argument("word")

    async def handle(self, args: argparse.Namespace) -> int:
        net = load_net(args.file)
        word = parse_word(net, args.word)
        if is_live_prefix(net, word):
            print("live prefix")
            return EXIT_POSITIVE
        print("dead prefix")
        return EXIT_NEGATIVE
