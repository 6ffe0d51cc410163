"""One-counter nets and automata: data model and exact word semantics."""

import logging
import math
import os
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property

logger = logging.getLogger(__name__)

# Letters introduced by reductions. User nets may not declare them.
DOLLAR = "__dollar"
HASH = "__hash"
HEART = "__heart"
CLUB = "__club"
CAT = "__cat"
ONE = "__one"
RESERVED_LETTERS = frozenset({DOLLAR, HASH, HEART, CLUB, CAT, ONE})
RESERVED_PREFIX = "__"

SINK = "__sink"

_DEFAULT_MAX_DELTA = 2**16


class NetKind(str, Enum):
    OCN = "ocn"
    OCA = "oca"
    SOCN = "socn"


class Guard(str, Enum):
    ZERO = "zero"
    NONZERO = "nonzero"


class NetError(ValueError):
    """Raised when a net is structurally invalid for the requested operation."""


class ReservedLetterError(NetError):
    """Raised when a reduction needs a letter the input net already uses."""

    def __init__(self, letter: str) -> None:
        super().__init__(f"reserved letter {letter!r} already in use")
        self.letter = letter


def get_max_delta() -> int:
    """Largest absolute delta expand_binary accepts (OCNHD_MAX_DELTA)."""
    raw = os.environ.get("OCNHD_MAX_DELTA", "")
    if not raw:
        return _DEFAULT_MAX_DELTA
    try:
        return int(raw)
    except ValueError:
        logger.warning("Ignoring malformed OCNHD_MAX_DELTA=%r", raw)
        return _DEFAULT_MAX_DELTA


def format_delta(delta: int) -> str:
    return f"+{delta}" if delta > 0 else str(delta)


@dataclass(frozen=True)
class Transition:
    source: str
    letter: str
    delta: int
    target: str
    guard: Guard | None = None

    def render(self) -> str:
        """Canonical one-line form, also the tie-breaking sort key."""
        if self.guard is None:
            return f"{self.source} {self.letter} {format_delta(self.delta)} {self.target}"
        return (
            f"{self.source} {self.guard.value} {self.letter} "
            f"{format_delta(self.delta)} {self.target}"
        )

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True, order=True)
class Config:
    state: str
    counter: int

    def __str__(self) -> str:
        return f"({self.state},{self.counter})"


@dataclass(frozen=True)
class Net:
    """A one-counter net (ocn), automaton with zero tests (oca) or succinct net (socn).

    Collections are canonicalised on construction, so two nets with the same
    content compare equal regardless of the order they were built in.
    """

    kind: NetKind
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: str
    finals: frozenset[str]
    transitions: tuple[Transition, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(sorted(set(self.states))))
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(
            self, "transitions", tuple(sorted(set(self.transitions), key=Transition.render))
        )

    @cached_property
    def _by_state_letter(self) -> dict[tuple[str, str], tuple[Transition, ...]]:
        index: dict[tuple[str, str], list[Transition]] = {}
        for t in self.transitions:
            index.setdefault((t.source, t.letter), []).append(t)
        return {key: tuple(ts) for key, ts in index.items()}

    @cached_property
    def _by_state(self) -> dict[str, tuple[Transition, ...]]:
        index: dict[str, list[Transition]] = {}
        for t in self.transitions:
            index.setdefault(t.source, []).append(t)
        return {key: tuple(ts) for key, ts in index.items()}

    def moves(self, state: str, letter: str) -> tuple[Transition, ...]:
        return self._by_state_letter.get((state, letter), ())

    def outgoing(self, state: str) -> tuple[Transition, ...]:
        return self._by_state.get(state, ())

    @property
    def max_delta(self) -> int:
        return max((abs(t.delta) for t in self.transitions), default=0)

    @property
    def initial_config(self) -> Config:
        return Config(self.initial, 0)

    def is_final(self, state: str) -> bool:
        return state in self.finals

    def is_deterministic(self) -> bool:
        """At most one transition per (state, guard, letter)."""
        seen: set[tuple[str, Guard | None, str]] = set()
        for t in self.transitions:
            key = (t.source, t.guard, t.letter)
            if key in seen:
                return False
            seen.add(key)
        return True

    @cached_property
    def credit(self) -> dict[str, float]:
        return min_credit(self)

    def with_changes(self, **changes) -> "Net":
        return replace(self, **changes)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# Validation and construction helpers
# ---------------------------------------------------------------------------


def validate_net(net: Net) -> ValidationReport:
    report = ValidationReport()
    states = set(net.states)
    letters = set(net.alphabet)
    if net.initial not in states:
        report.violations.append(f"initial state {net.initial!r} is not declared")
    for q in sorted(net.finals - states):
        report.violations.append(f"final state {q!r} is not declared")
    for t in net.transitions:
        where = f"transition '{t.render()}'"
        if t.source not in states:
            report.violations.append(f"{where}: source {t.source!r} is not declared")
        if t.target not in states:
            report.violations.append(f"{where}: target {t.target!r} is not declared")
        if t.letter not in letters:
            report.violations.append(f"{where}: letter {t.letter!r} is not in the alphabet")
        if not t.letter:
            report.violations.append(f"{where}: empty letter (epsilon moves are not supported)")
        if net.kind is not NetKind.SOCN and t.delta not in (-1, 0, 1):
            report.violations.append(f"{where}: delta {t.delta} outside -1..+1")
        if net.kind is NetKind.OCA:
            if t.guard is None:
                report.violations.append(f"{where}: oca transition without guard")
            elif t.guard is Guard.ZERO and t.delta < 0:
                report.violations.append(f"{where}: zero-guarded transition decrements")
        elif t.guard is not None:
            report.violations.append(f"{where}: guard on a {net.kind.value} transition")
    return report


def check_net(net: Net) -> Net:
    """Return net unchanged, or raise NetError listing every violation."""
    report = validate_net(net)
    if not report.ok:
        raise NetError("; ".join(report.violations))
    return net


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def require_free_letter(net: Net, letter: str) -> None:
    if letter in net.alphabet:
        raise ReservedLetterError(letter)


def prefix_states(net: Net, prefix: str) -> Net:
    """Copy of net with every state renamed to prefix + name."""

    def rename(q: str) -> str:
        return f"{prefix}{q}"

    return replace(
        net,
        states=tuple(rename(q) for q in net.states),
        initial=rename(net.initial),
        finals=frozenset(rename(q) for q in net.finals),
        transitions=tuple(
            replace(t, source=rename(t.source), target=rename(t.target)) for t in net.transitions
        ),
    )


def complete(net: Net) -> Net:
    """Add a rejecting sink so that every configuration has a successor on every letter.

    A (state, letter) pair counts as covered when it has a transition that is
    enabled at every counter value: a non-negative delta (and for automata an
    unguarded one, or a zero/nonzero pair).
    """
    missing: list[tuple[str, str]] = []
    for q in net.states:
        for a in net.alphabet:
            if not _always_enabled(net.moves(q, a)):
                missing.append((q, a))
    if not missing:
        return net
    sink = fresh_name(SINK, net.states)
    guard_kinds: tuple[Guard | None, ...] = (
        (Guard.ZERO, Guard.NONZERO) if net.kind is NetKind.OCA else (None,)
    )
    added = [Transition(q, a, 0, sink, g) for q, a in missing for g in guard_kinds]
    added += [Transition(sink, a, 0, sink, g) for a in net.alphabet for g in guard_kinds]
    logger.debug("complete: %d missing pairs routed to %s", len(missing), sink)
    return replace(
        net, states=(*net.states, sink), transitions=(*net.transitions, *added)
    )


def _always_enabled(ts: Sequence[Transition]) -> bool:
    zero_ok = any(t.delta >= 0 and t.guard in (None, Guard.ZERO) for t in ts)
    if not zero_ok:
        return False
    return any(t.guard is None for t in ts) or any(
        t.delta >= -1 and t.guard is Guard.NONZERO for t in ts
    )


# ---------------------------------------------------------------------------
# Word semantics
# ---------------------------------------------------------------------------


def enabled(t: Transition, counter: int) -> bool:
    if counter + t.delta < 0:
        return False
    if t.guard is Guard.ZERO:
        return counter == 0
    if t.guard is Guard.NONZERO:
        return counter > 0
    return True


def successors(net: Net, c: Config, letter: str) -> frozenset[Config]:
    return frozenset(
        Config(t.target, c.counter + t.delta)
        for t in net.moves(c.state, letter)
        if enabled(t, c.counter)
    )


def step_set(net: Net, configs: Iterable[Config], letter: str) -> frozenset[Config]:
    out: set[Config] = set()
    for c in configs:
        out |= successors(net, c, letter)
    return frozenset(out)


def reach_set(net: Net, word: Sequence[str], start: Config | None = None) -> frozenset[Config]:
    current = frozenset({start or net.initial_config})
    for letter in word:
        current = step_set(net, current, letter)
        if not current:
            break
    return current


def accepts(net: Net, word: Sequence[str], start: Config | None = None) -> bool:
    return any(c.state in net.finals for c in reach_set(net, word, start))


def min_credit(net: Net) -> dict[str, float]:
    """Least counter value from which each state can reach a final state (math.inf if none).

    Greatest fixpoint of need(q) = min over (q,a,d,q') of max(need(q') - d, max(0, -d)),
    with need = 0 on finals. Deltas may be arbitrary integers.
    """
    if net.kind is NetKind.OCA:
        raise NetError("min_credit is defined for nets without zero tests")
    need: dict[str, float] = {q: (0 if q in net.finals else math.inf) for q in net.states}
    changed = True
    while changed:
        changed = False
        for t in net.transitions:
            if need[t.target] == math.inf:
                continue
            candidate = max(need[t.target] - t.delta, max(0, -t.delta))
            if candidate < need[t.source]:
                need[t.source] = candidate
                changed = True
    return need


def can_reach_final(net: Net, c: Config) -> bool:
    """Some accepting state is reachable from c along some word."""
    if net.kind is NetKind.OCA:
        return _oca_can_reach_final(net, c)
    return c.counter >= net.credit[c.state]


def _oca_can_reach_final(net: Net, c: Config) -> bool:
    # Bounded search; counters above start + |Q|^2 are not explored.
    bound = c.counter + len(net.states) ** 2
    seen = {c}
    queue = deque([c])
    while queue:
        cur = queue.popleft()
        if cur.state in net.finals:
            return True
        for t in net.outgoing(cur.state):
            if not enabled(t, cur.counter):
                continue
            nxt = Config(t.target, cur.counter + t.delta)
            if nxt.counter <= bound and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def is_live_prefix(net: Net, word: Sequence[str], start: Config | None = None) -> bool:
    """word is a prefix of some accepted word."""
    return any(can_reach_final(net, c) for c in reach_set(net, word, start))


# ---------------------------------------------------------------------------
# Succinct nets
# ---------------------------------------------------------------------------


def expand_binary(net: Net, max_delta: int | None = None) -> Net:
    """Unary net with the same language as a succinct net.

    With D = max |delta|, configuration (q, D*c + r) becomes (q@r, c). A step with
    delta d from residue r moves to residue (r + d) mod D and changes the new
    counter by (r + d) // D, which is always -1, 0 or +1. Configurations are in
    bijection, so acceptance and history-determinism carry over.
    """
    if net.kind is NetKind.OCA:
        raise NetError("expand_binary takes a net without zero tests")
    limit = get_max_delta() if max_delta is None else max_delta
    width = net.max_delta
    if width > limit:
        raise NetError(f"delta {width} exceeds the configured limit {limit}")
    if width <= 1:
        return replace(net, kind=NetKind.OCN)

    def name(q: str, r: int) -> str:
        return f"{q}@{r}"

    transitions = []
    for t in net.transitions:
        for r in range(width):
            step, residue = divmod(r + t.delta, width)
            transitions.append(Transition(name(t.source, r), t.letter, step, name(t.target, residue)))
    logger.debug("expand_binary: width %d, %d transitions", width, len(transitions))
    return Net(
        kind=NetKind.OCN,
        states=tuple(name(q, r) for q in net.states for r in range(width)),
        alphabet=net.alphabet,
        initial=name(net.initial, 0),
        finals=frozenset(name(q, r) for q in net.finals for r in range(width)),
        transitions=tuple(transitions),
    )


def expanded_config(net: Net, c: Config) -> Config:
    """Image of a configuration of net under expand_binary."""
    width = max(net.max_delta, 1)
    if width == 1:
        return c
    quotient, residue = divmod(c.counter, width)
    return Config(f"{c.state}@{residue}", quotient)
