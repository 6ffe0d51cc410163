import argparse
import asyncio

from commands.base import EXIT_POSITIVE, Command
from gadgets import CorpusKind, write_corpus


class GenerateCommand(Command):
    """gen-afa, gen-socn and gen-doca share everything but the corpus kind."""

    def __init__(self, kind: CorpusKind) -> None:
        self.kind = kind
        self.name = f"gen-{kind.value}"
        self.help = f"Write N labelled {kind.value} gadget instances and a manifest"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("seed", type=int)
        parser.add_argument("count", type=int)
        parser.add_argument("--out", default=None, help="Output directory (default: corpus-KIND-SEED)")

    async def handle(self, args: argparse.Namespace) -> int:
        if args.count < 0:
            raise ValueError("count must be >= 0")
        out = args.out or f"corpus-{self.kind.value}-{args.seed}"
        entries = await asyncio.to_thread(write_corpus, self.kind, args.seed, args.count, out)
        for entry in entries:
            print(entry.render())
        return EXIT_POSITIVE
