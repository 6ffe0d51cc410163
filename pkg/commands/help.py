import argparse

from commands.base import EXIT_POSITIVE, Command

HELP_TEXT = (
    "check-hd FILE - Decide whether a net is history-deterministic (prints Adam's witness if not)\n"
    "simulate FILE_A STATE_A K_A FILE_B STATE_B K_B - Does (B,STATE_B,K_B) simulate (A,STATE_A,K_A)?\n"
    "member FILE WORD / prefix FILE WORD - Exact membership / live-prefix test\n"
    "include FILE_A FILE_B / equiv FILE_A FILE_B - Inclusion and equivalence of HD nets\n"
    "universal FILE - Universality of an HD net\n"
    "good-set FILE TRANSITION --bound B - Counters where a transition is a good move\n"
    "determinize FILE -o OUT - Deterministic automaton with zero tests for an HD net\n"
    "gen-afa / gen-socn / gen-doca SEED N - Labelled gadget corpora\n"
    "play FILE - Play letters against the net's resolver\n"
    "help - Show this message\n"
    "Exit codes: 0 yes, 1 no, 2 inconclusive, 3 input error"
)


class HelpCommand(Command):
    name = "help"
    help = "Show the list of commands"

    async def handle(self, args: argparse.Namespace) -> int:
        print(HELP_TEXT)
        return EXIT_POSITIVE
