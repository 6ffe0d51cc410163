"""Plain-text net format: parsing with line/column diagnostics and canonical emission.

    ocn                          # or: oca | socn
    alphabet a b $
    state q0 init
    state q1 final
    trans q0 a +1 q0
    trans q0 $ 0 q1              # oca: trans q0 zero $ 0 q1
"""

import logging
import pathlib
import re
from collections.abc import Sequence

from nets import (
    RESERVED_PREFIX,
    Guard,
    Net,
    NetError,
    NetKind,
    Transition,
    format_delta,
    validate_net,
)

logger = logging.getLogger(__name__)

_DELTA_RE = re.compile(r"^[+-]?\d+$")
_STATE_FLAGS = {"init", "final"}


class NetFormatError(NetError):
    """Raised when net text cannot be parsed; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokens(line: str) -> list[tuple[str, int]]:
    """Split a line into (token, 1-based column) pairs, dropping the comment."""
    body = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]


def _parse_delta(text: str, kind: NetKind, line: int, column: int) -> int:
    if not _DELTA_RE.match(text):
        raise NetFormatError(f"malformed delta {text!r}", line, column)
    delta = int(text)
    if kind is not NetKind.SOCN and delta not in (-1, 0, 1):
        raise NetFormatError(f"delta {text} outside -1..+1 for a {kind.value} net", line, column)
    return delta


def parse_net(text: str, allow_reserved: bool = False) -> Net:
    kind: NetKind | None = None
    alphabet: list[str] = []
    states: dict[str, int] = {}
    initial: str | None = None
    finals: set[str] = set()
    pending: list[tuple[list[tuple[str, int]], int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        word, col = toks[0]
        if kind is None:
            try:
                kind = NetKind(word)
            except ValueError:
                raise NetFormatError(
                    f"expected header ocn, oca or socn, got {word!r}", lineno, col
                ) from None
            if len(toks) > 1:
                raise NetFormatError("unexpected text after header", lineno, toks[1][1])
            continue
        if word == "alphabet":
            for letter, lcol in toks[1:]:
                if letter.startswith(RESERVED_PREFIX) and not allow_reserved:
                    raise NetFormatError(f"reserved letter {letter!r}", lineno, lcol)
                if letter in alphabet:
                    raise NetFormatError(f"duplicate letter {letter!r}", lineno, lcol)
                alphabet.append(letter)
        elif word == "state":
            if len(toks) < 2:
                raise NetFormatError("state needs a name", lineno, col)
            name, ncol = toks[1]
            if name in states:
                raise NetFormatError(
                    f"duplicate state {name!r} (first declared on line {states[name]})",
                    lineno,
                    ncol,
                )
            states[name] = lineno
            for flag, fcol in toks[2:]:
                if flag not in _STATE_FLAGS:
                    raise NetFormatError(f"unknown state flag {flag!r}", lineno, fcol)
                if flag == "init":
                    if initial is not None:
                        raise NetFormatError("second initial state", lineno, fcol)
                    initial = name
                else:
                    finals.add(name)
        elif word == "trans":
            pending.append((toks[1:], lineno))
        else:
            raise NetFormatError(f"unknown directive {word!r}", lineno, col)

    if kind is None:
        raise NetFormatError("empty input", 1)
    if initial is None:
        raise NetFormatError("no initial state declared", len(text.splitlines()) or 1)

    transitions = [_parse_trans(toks, kind, lineno, states, alphabet) for toks, lineno in pending]
    net = Net(
        kind=kind,
        states=tuple(states),
        alphabet=tuple(alphabet),
        initial=initial,
        finals=frozenset(finals),
        transitions=tuple(transitions),
    )
    report = validate_net(net)
    if not report.ok:
        raise NetError("; ".join(report.violations))
    return net


def _parse_trans(
    toks: list[tuple[str, int]],
    kind: NetKind,
    lineno: int,
    states: dict[str, int],
    alphabet: list[str],
) -> Transition:
    expected = 5 if kind is NetKind.OCA else 4
    if len(toks) != expected:
        column = toks[0][1] if toks else 1
        raise NetFormatError(f"trans expects {expected} fields, got {len(toks)}", lineno, column)
    guard: Guard | None = None
    if kind is NetKind.OCA:
        (source, scol), (guard_text, gcol), (letter, lcol), (delta_text, dcol), (target, tcol) = toks
        try:
            guard = Guard(guard_text)
        except ValueError:
            raise NetFormatError(f"unknown guard {guard_text!r}", lineno, gcol) from None
    else:
        (source, scol), (letter, lcol), (delta_text, dcol), (target, tcol) = toks
    if source not in states:
        raise NetFormatError(f"unknown state {source!r}", lineno, scol)
    if target not in states:
        raise NetFormatError(f"unknown state {target!r}", lineno, tcol)
    if letter not in alphabet:
        raise NetFormatError(f"unknown letter {letter!r}", lineno, lcol)
    delta = _parse_delta(delta_text, kind, lineno, dcol)
    if guard is Guard.ZERO and delta < 0:
        raise NetFormatError("zero-guarded transition cannot decrement", lineno, dcol)
    return Transition(source, letter, delta, target, guard)


def emit_net(net: Net) -> str:
    """Canonical text: sorted letters, states and transitions."""
    lines = [net.kind.value, "alphabet " + " ".join(net.alphabet)]
    for q in net.states:
        flags = []
        if q == net.initial:
            flags.append("init")
        if q in net.finals:
            flags.append("final")
        lines.append(" ".join(["state", q, *flags]))
    for t in net.transitions:
        lines.append(f"trans {t.render()}")
    return "\n".join(lines) + "\n"


def load_net(path: str | pathlib.Path, allow_reserved: bool = False) -> Net:
    text = pathlib.Path(path).read_text()
    logger.debug("Loading net from %s", path)
    return parse_net(text, allow_reserved=allow_reserved)


def save_net(net: Net, path: str | pathlib.Path) -> None:
    pathlib.Path(path).write_text(emit_net(net))


def parse_transition(net: Net, text: str) -> Transition:
    """Look up a transition of net from its rendered form, e.g. "X b -1 Y"."""
    parts = text.split()
    if net.kind is NetKind.OCA and len(parts) == 5:
        source, guard_text, letter, delta_text, target = parts
        guard: Guard | None = Guard(guard_text) if guard_text in ("zero", "nonzero") else None
    elif len(parts) == 4:
        source, letter, delta_text, target = parts
        guard = None
    else:
        raise NetError(f"cannot read transition {text!r}")
    if not _DELTA_RE.match(delta_text):
        raise NetError(f"malformed delta in {text!r}")
    wanted = f"{source} {guard.value + ' ' if guard else ''}{letter} {format_delta(int(delta_text))} {target}"
    for t in net.transitions:
        if t.render() == wanted:
            return t
    raise NetError(f"no transition {text!r} in net")


def parse_word(net: Net, text: str) -> tuple[str, ...]:
    """Read a word: letters separated by commas or spaces, or run together when all are one character.

    An empty string or "-" is the empty word.
    """
    text = text.strip()
    if text in ("", "-"):
        return ()
    if re.search(r"[,\s]", text):
        letters = tuple(part for part in re.split(r"[,\s]+", text) if part)
    elif text in net.alphabet:
        letters = (text,)
    else:
        letters = tuple(text)
    unknown: Sequence[str] = [a for a in letters if a not in net.alphabet]
    if unknown:
        raise NetError(f"letter {unknown[0]!r} is not in the alphabet")
    return letters
