from commands.base import Command
from commands.generate import GenerateCommand
from commands.help import HelpCommand
from commands.play import PlayCommand
from commands.verdict import (
    CheckHdCommand,
    DeterminizeCommand,
    EquivCommand,
    GoodSetCommand,
    IncludeCommand,
    SimulateCommand,
    UniversalCommand,
)
from commands.word import MemberCommand, PrefixCommand

__all__ = [
    "CheckHdCommand",
    "Command",
    "DeterminizeCommand",
    "EquivCommand",
    "GenerateCommand",
    "GoodSetCommand",
    "HelpCommand",
    "IncludeCommand",
    "MemberCommand",
    "PlayCommand",
    "PrefixCommand",
    "SimulateCommand",
    "UniversalCommand",
]
