"""Labelled hard instances: unary AFA emptiness, succinct reachability games and DOCA inclusion.

Each gadget turns a source problem into a net whose history-determinism
answers it. The sources come with exact (or explicitly bounded) oracles, so
generated corpora carry a label together with the oracle that produced it.
"""

import logging
import pathlib
import random
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, replace
from enum import Enum

import networkx as nx

from netfile import save_net
from nets import (
    CAT,
    HEART,
    Config,
    Guard,
    Net,
    NetKind,
    Transition,
    check_net,
    fresh_name,
    prefix_states,
    require_free_letter,
    step_set,
)

logger = logging.getLogger(__name__)

DOLLAR_LETTER = "$"
HEART_LETTER = "heart"
CLUB_LETTER = "club"
ONE_LETTER = "1"
RUN_LETTER = "a"
GAME_LETTER = "t"

_DOCA_CHECK_LEN = 8


class GadgetError(ValueError):
    """Raised when a gadget source instance violates its structural constraints."""


# ---------------------------------------------------------------------------
# Unary alternating automata
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnaryAfa:
    or_states: frozenset[str]
    and_states: frozenset[str]
    transitions: frozenset[tuple[str, str]]
    initial: str
    finals: frozenset[str]

    def __post_init__(self) -> None:
        if self.or_states & self.and_states:
            raise GadgetError("a state cannot be both existential and universal")
        states = self.states
        if self.initial not in states:
            raise GadgetError(f"initial state {self.initial!r} is not declared")
        if not self.finals <= states:
            raise GadgetError("final states must be declared")
        for p, q in self.transitions:
            if p not in states or q not in states:
                raise GadgetError(f"transition {p}->{q} uses an undeclared state")
            if (p in self.or_states) == (q in self.or_states):
                raise GadgetError(f"transition {p}->{q} does not alternate")

    @property
    def states(self) -> frozenset[str]:
        return self.or_states | self.and_states

    def successors(self, q: str) -> list[str]:
        return sorted(t for s, t in self.transitions if s == q)


def _acc_step(afa: UnaryAfa, acc: frozenset[str]) -> frozenset[str]:
    """States accepting some word one letter longer than the words accepted from acc."""
    out = set()
    for q in afa.states:
        succ = afa.successors(q)
        if q in afa.or_states:
            if any(s in acc for s in succ):
                out.add(q)
        elif all(s in acc for s in succ):
            # vacuous for universal states without successors
            out.add(q)
    return frozenset(out)


def afa_accept_lengths(afa: UnaryAfa, nmax: int) -> set[int]:
    lengths = set()
    acc = frozenset(afa.finals)
    for n in range(nmax + 1):
        if afa.initial in acc:
            lengths.add(n)
        acc = _acc_step(afa, acc)
    return lengths


def afa_empty(afa: UnaryAfa) -> bool:
    """Exact emptiness: the Acc sequence is eventually periodic, so stop at the first repeat."""
    seen: set[frozenset[str]] = set()
    acc = frozenset(afa.finals)
    while acc not in seen:
        if afa.initial in acc:
            return False
        seen.add(acc)
        acc = _acc_step(afa, acc)
    return True


def _or_letter(q: str) -> str:
    return f"a_{q}"


def afa_to_ocn(afa: UnaryAfa) -> Net:
    """All-final net that is history-deterministic exactly when the AFA is empty.

    Adam pumps the counter with '1' to the length of a claimed word, then walks a
    branch of the run tree, naming existential choices by letter while Eve
    resolves universal ones. Reading '$' at a final state with counter 0 forces
    Eve to guess the closing suit.
    """
    q_i = fresh_name("qI", afa.states)
    taken = {*afa.states, q_i}
    names = {}
    for base in ("qclub", "qheart", "qwin1", "qwin2", "qlast"):
        names[base] = fresh_name(base, taken)
        taken.add(names[base])
    q_club, q_heart = names["qclub"], names["qheart"]
    win1, win2, last = names["qwin1"], names["qwin2"], names["qlast"]

    and_letters = [_or_letter(q) for q in sorted(afa.and_states)]
    ts = [
        Transition(q_i, ONE_LETTER, 1, q_i),
        Transition(q_i, DOLLAR_LETTER, 0, afa.initial),
    ]
    for p in sorted(afa.or_states):
        succ = set(afa.successors(p))
        for q in sorted(afa.and_states):
            target = q if q in succ else win1
            ts.append(Transition(p, _or_letter(q), -1, target))
        ts.append(Transition(p, RUN_LETTER, -1, win1))
    for p in sorted(afa.and_states):
        ts += [Transition(p, RUN_LETTER, -1, q) for q in afa.successors(p)]
        ts += [Transition(p, b, -1, win1) for b in and_letters]
    for q in sorted(afa.states):
        if q in afa.finals:
            ts += [
                Transition(q, DOLLAR_LETTER, -1, win2),
                Transition(q, DOLLAR_LETTER, 0, q_club),
                Transition(q, DOLLAR_LETTER, 0, q_heart),
            ]
        else:
            ts.append(Transition(q, DOLLAR_LETTER, 0, win2))
    ts.append(Transition(win1, DOLLAR_LETTER, 0, win2))
    ts += [Transition(win1, b, -1, win1) for b in (*and_letters, RUN_LETTER)]
    ts += [
        Transition(q_heart, HEART_LETTER, 0, last),
        Transition(q_club, CLUB_LETTER, 0, last),
        Transition(win2, HEART_LETTER, 0, last),
        Transition(win2, CLUB_LETTER, 0, last),
    ]
    states = (*afa.states, q_i, q_club, q_heart, win1, win2, last)
    return check_net(
        Net(
            kind=NetKind.OCN,
            states=states,
            alphabet=(DOLLAR_LETTER, HEART_LETTER, CLUB_LETTER, ONE_LETTER, RUN_LETTER, *and_letters),
            initial=q_i,
            finals=frozenset(states),
            transitions=tuple(ts),
        )
    )


# ---------------------------------------------------------------------------
# Succinct one-counter reachability games
# ---------------------------------------------------------------------------


class SocnOutcome(str, Enum):
    OR_WINS = "OrWins"
    AND_WINS = "AndWins"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SocnGame:
    """Reachability game on a unary succinct net: the or-player wants (final, 0)."""

    net: Net
    or_states: frozenset[str]

    def __post_init__(self) -> None:
        if self.net.kind is NetKind.OCA:
            raise GadgetError("reachability games are played on nets without zero tests")
        if len(self.net.alphabet) != 1:
            raise GadgetError("reachability games use a unary alphabet")
        if not self.or_states <= set(self.net.states):
            raise GadgetError("or-states must be states of the net")
        for t in self.net.transitions:
            if (t.source in self.or_states) == (t.target in self.or_states):
                raise GadgetError(f"transition '{t.render()}' does not alternate")

    @property
    def and_states(self) -> frozenset[str]:
        return frozenset(self.net.states) - self.or_states


def _move_letter(index: int) -> str:
    return f"a_{index}"


def socn_to_ocn(game: SocnGame) -> Net:
    """Succinct net that is history-deterministic exactly when the and-player wins the game.

    Words transcribe plays; a main copy follows the game and a deterministic
    win copy accepts every remaining valid transcript once Adam misreports
    Eve's universal choice.
    """
    net = game.net
    index = {t: i for i, t in enumerate(net.transitions)}
    taken = set(net.states)

    def fresh(base: str) -> str:
        name = fresh_name(base, taken)
        taken.add(name)
        return name

    pending = {t: fresh(f"{t.source}/{index[t]}") for t in net.transitions if t.source in game.and_states}
    win = {q: fresh(f"{q}!win") for q in net.states}
    twin = {q: fresh(f"{q}!twin") for q in sorted(game.and_states)}
    q_dollar, q_heart, q_club, last = fresh("q$"), fresh("qheart"), fresh("qclub"), fresh("qlast")

    ts: list[Transition] = []
    for t in net.transitions:
        a_t = _move_letter(index[t])
        if t.source in game.or_states:
            ts.append(Transition(t.source, a_t, t.delta, t.target))
            ts.append(Transition(win[t.source], a_t, t.delta, win[t.target]))
        else:
            p_t = pending[t]
            ts.append(Transition(t.source, RUN_LETTER, 0, p_t))
            ts.append(Transition(p_t, a_t, t.delta, t.target))
            for other in net.outgoing(t.source):
                if other != t:
                    ts.append(
                        Transition(p_t, _move_letter(index[other]), other.delta, win[other.target])
                    )
            ts.append(Transition(twin[t.source], a_t, t.delta, win[t.target]))
    for p in sorted(game.and_states):
        ts.append(Transition(win[p], RUN_LETTER, 0, twin[p]))
    for q in net.states:
        if q in net.finals:
            ts += [
                Transition(q, DOLLAR_LETTER, -1, q_dollar),
                Transition(q, DOLLAR_LETTER, 0, q_club),
                Transition(q, DOLLAR_LETTER, 0, q_heart),
            ]
        else:
            ts.append(Transition(q, DOLLAR_LETTER, 0, q_dollar))
        ts.append(Transition(win[q], DOLLAR_LETTER, 0, q_dollar))
    ts += [
        Transition(q_heart, HEART_LETTER, 0, last),
        Transition(q_club, CLUB_LETTER, 0, last),
        Transition(q_dollar, HEART_LETTER, 0, last),
        Transition(q_dollar, CLUB_LETTER, 0, last),
    ]
    states = (
        *net.states,
        *pending.values(),
        *win.values(),
        *twin.values(),
        q_dollar,
        q_heart,
        q_club,
        last,
    )
    letters = (DOLLAR_LETTER, HEART_LETTER, CLUB_LETTER, RUN_LETTER)
    return check_net(
        Net(
            kind=NetKind.SOCN,
            states=states,
            alphabet=(*letters, *(_move_letter(i) for i in index.values())),
            initial=net.initial,
            finals=frozenset(states),
            transitions=tuple(ts),
        )
    )


def socn_solve_bounded(game: SocnGame, cap: int, depth: int) -> SocnOutcome:
    """Bounded alternating search for an or-strategy reaching (final, 0).

    An and-move that would take the counter below zero ends the play in the
    and-player's favour; or-moves below zero are unavailable. OrWins is exact.
    AndWins means no or-strategy exists within depth steps, and is exact when
    the control graph cannot reach a final state. Unknown is returned instead
    of AndWins when the counter cap cut off part of the search.
    """
    if cap < 1 or depth < 0:
        raise ValueError("cap must be >= 1 and depth >= 0")
    net = game.net
    start = net.initial_config
    if start.state in net.finals and start.counter == 0:
        return SocnOutcome.OR_WINS
    graph = nx.DiGraph()
    graph.add_nodes_from(net.states)
    graph.add_edges_from((t.source, t.target) for t in net.transitions)
    if not any(nx.has_path(graph, net.initial, f) for f in net.finals):
        return SocnOutcome.AND_WINS

    capped = False
    memo: dict[tuple[Config, int], bool] = {}

    def or_wins(c: Config, d: int) -> bool:
        nonlocal capped
        if c.state in net.finals and c.counter == 0:
            return True
        if d == 0:
            return False
        key = (c, d)
        if key in memo:
            return memo[key]
        moves = net.outgoing(c.state)
        if c.state in game.or_states:
            result = False
            for t in moves:
                n = c.counter + t.delta
                if n < 0:
                    continue
                if n > cap:
                    capped = True
                    continue
                if or_wins(Config(t.target, n), d - 1):
                    result = True
                    break
        elif not moves or any(c.counter + t.delta < 0 for t in moves):
            result = False
        else:
            result = True
            for t in moves:
                n = c.counter + t.delta
                if n > cap:
                    capped = True
                    result = False
                    break
                if not or_wins(Config(t.target, n), d - 1):
                    result = False
                    break
        memo[key] = result
        return result

    if or_wins(start, depth):
        return SocnOutcome.OR_WINS
    return SocnOutcome.UNKNOWN if capped else SocnOutcome.AND_WINS


# ---------------------------------------------------------------------------
# Deterministic one-counter automata inclusion
# ---------------------------------------------------------------------------


def doca_inclusion_to_oca(doca_a: Net, doca_b: Net) -> Net:
    """Automaton with zero tests that is history-deterministic iff L(doca_a) is included in L(doca_b)."""
    for net in (doca_a, doca_b):
        if net.kind is not NetKind.OCA:
            raise GadgetError("inputs must be automata with zero tests")
        if not net.is_deterministic():
            raise GadgetError("inputs must be deterministic")
        require_free_letter(net, HEART)
        require_free_letter(net, CAT)
    if doca_a.alphabet != doca_b.alphabet:
        raise GadgetError("inputs must share an alphabet")
    q_cat = fresh_name("__qcat", doca_b.states)
    with_cat = replace(
        doca_b,
        states=(*doca_b.states, q_cat),
        alphabet=(*doca_b.alphabet, CAT),
        finals=doca_b.finals | {q_cat},
        transitions=(
            *doca_b.transitions,
            Transition(doca_b.initial, CAT, 0, q_cat, Guard.ZERO),
            Transition(doca_b.initial, CAT, 0, q_cat, Guard.NONZERO),
        ),
    )
    b = prefix_states(with_cat, "b:")
    a = prefix_states(replace(doca_a, alphabet=with_cat.alphabet), "a:")
    q0 = fresh_name("__q0", (*a.states, *b.states))
    return check_net(
        Net(
            kind=NetKind.OCA,
            states=(*a.states, *b.states, q0),
            alphabet=(*b.alphabet, HEART),
            initial=q0,
            finals=a.finals | b.finals,
            transitions=(
                *a.transitions,
                *b.transitions,
                Transition(q0, HEART, 0, a.initial, Guard.ZERO),
                Transition(q0, HEART, 0, b.initial, Guard.ZERO),
            ),
        )
    )


def inclusion_counterexample(
    net_a: Net, net_b: Net, max_len: int = _DOCA_CHECK_LEN
) -> tuple[str, ...] | None:
    """Shortest word of length <= max_len accepted by net_a and rejected by net_b."""
    start = (frozenset({net_a.initial_config}), frozenset({net_b.initial_config}))
    seen = {start}
    queue = deque([((), *start)])
    while queue:
        word, ra, rb = queue.popleft()
        if any(c.state in net_a.finals for c in ra) and not any(c.state in net_b.finals for c in rb):
            return word
        if len(word) == max_len:
            continue
        for letter in net_a.alphabet:
            nxt = (step_set(net_a, ra, letter), step_set(net_b, rb, letter))
            if nxt[0] and nxt not in seen:
                seen.add(nxt)
                queue.append(((*word, letter), *nxt))
    return None


def doca_inclusion_label(doca_a: Net, doca_b: Net, max_len: int = _DOCA_CHECK_LEN) -> str:
    if inclusion_counterexample(doca_a, doca_b, max_len) is None:
        return "inclusion"
    return "not-inclusion"


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_afa(rng: random.Random, n_states: int = 4) -> UnaryAfa:
    """Random alternating automaton whose universal states all have successors.

    The initial state is never final, so every accepted length is at least 1.
    """
    if n_states < 2:
        raise ValueError("need at least two states")
    names = [f"q{i}" for i in range(n_states)]
    n_or = rng.randint(1, n_states - 1)
    or_states = frozenset(names[:n_or])
    and_states = frozenset(names[n_or:])
    transitions = set()
    for p in names:
        others = sorted(and_states if p in or_states else or_states)
        picks = [q for q in others if rng.random() < 0.5]
        if p in and_states and not picks:
            picks = [rng.choice(others)]
        transitions.update((p, q) for q in picks)
    initial = rng.choice(names)
    finals = frozenset(q for q in names if q != initial and rng.random() < 0.4)
    return UnaryAfa(or_states, and_states, frozenset(transitions), initial, finals)


def random_socn_game(rng: random.Random, n_states: int = 4, max_delta: int = 4) -> SocnGame:
    if n_states < 2:
        raise ValueError("need at least two states")
    names = [f"q{i}" for i in range(n_states)]
    n_or = rng.randint(1, n_states - 1)
    or_states = frozenset(names[:n_or])
    transitions = set()
    for p in names:
        others = sorted(set(names) - or_states if p in or_states else or_states)
        for q in others:
            for _ in range(rng.randint(0, 2)):
                transitions.add(Transition(p, GAME_LETTER, rng.randint(-max_delta, max_delta), q))
    net = Net(
        kind=NetKind.SOCN,
        states=tuple(names),
        alphabet=(GAME_LETTER,),
        initial=names[0],
        finals=frozenset({rng.choice(names)}),
        transitions=tuple(transitions),
    )
    return SocnGame(check_net(net), or_states)


def random_ocn(
    rng: random.Random,
    n_states: int = 3,
    alphabet: Iterable[str] = ("a", "b"),
    deterministic: bool = False,
    density: float = 0.5,
) -> Net:
    """Random unary-delta net; deterministic nets have at most one move per state and letter."""
    letters = tuple(alphabet)
    names = [f"s{i}" for i in range(n_states)]
    transitions = []
    for p in names:
        for a in letters:
            if deterministic:
                count = 1 if rng.random() < 0.8 else 0
            else:
                count = rng.randint(0, 2)
            for _ in range(count):
                transitions.append(Transition(p, a, rng.choice((-1, 0, 1)), rng.choice(names)))
    finals = frozenset(q for q in names if rng.random() < density) or frozenset({names[-1]})
    return check_net(
        Net(
            kind=NetKind.OCN,
            states=tuple(names),
            alphabet=letters,
            initial=names[0],
            finals=finals,
            transitions=tuple(transitions),
        )
    )


def random_doca(rng: random.Random, n_states: int = 3, alphabet: Iterable[str] = ("a", "b")) -> Net:
    """Random deterministic automaton with zero tests: one move per (state, guard, letter)."""
    letters = tuple(alphabet)
    names = [f"d{i}" for i in range(n_states)]
    transitions = []
    for p in names:
        for a in letters:
            transitions.append(Transition(p, a, rng.choice((0, 1)), rng.choice(names), Guard.ZERO))
            transitions.append(
                Transition(p, a, rng.choice((-1, 0, 1)), rng.choice(names), Guard.NONZERO)
            )
    finals = frozenset(q for q in names if rng.random() < 0.5) or frozenset({names[0]})
    return check_net(
        Net(
            kind=NetKind.OCA,
            states=tuple(names),
            alphabet=letters,
            initial=names[0],
            finals=finals,
            transitions=tuple(transitions),
        )
    )


# ---------------------------------------------------------------------------
# Corpora
# ---------------------------------------------------------------------------


class CorpusKind(str, Enum):
    AFA = "afa"
    SOCN = "socn"
    DOCA = "doca"


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    label: str
    oracle: str
    bounds: str

    def render(self) -> str:
        return f"{self.path} {self.label} {self.oracle} {self.bounds}"


_SOCN_CAP = 16
_SOCN_DEPTH = 24
_MAX_DRAWS = 50  # per instance


def _afa_instance(rng: random.Random) -> tuple[Net, str, str, str]:
    afa = random_afa(rng, rng.randint(2, 4))
    label = "hd" if afa_empty(afa) else "not-hd"
    return afa_to_ocn(afa), label, "afa_empty", "exact"


def _socn_instance(rng: random.Random) -> tuple[Net, str, str, str] | None:
    game = random_socn_game(rng, rng.randint(2, 4))
    verdict = socn_solve_bounded(game, _SOCN_CAP, _SOCN_DEPTH)
    if verdict is SocnOutcome.UNKNOWN:
        return None
    label = "not-hd" if verdict is SocnOutcome.OR_WINS else "hd"
    return socn_to_ocn(game), label, "socn_solve_bounded", f"cap={_SOCN_CAP},depth={_SOCN_DEPTH}"


def _doca_instance(rng: random.Random) -> tuple[Net, str, str, str]:
    b = random_doca(rng, rng.randint(1, 3))
    a = b if rng.random() < 0.5 else random_doca(rng, rng.randint(1, 3))
    label = doca_inclusion_label(a, b)
    return doca_inclusion_to_oca(a, b), label, "bounded_inclusion", f"len={_DOCA_CHECK_LEN}"


def generate_corpus(
    kind: CorpusKind, seed: int, count: int
) -> list[tuple[Net, str, str, str]]:
    """count labelled instances; draws whose oracle cannot settle the label are skipped."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        for _ in range(_MAX_DRAWS):
            if kind is CorpusKind.AFA:
                instance = _afa_instance(rng)
            elif kind is CorpusKind.SOCN:
                instance = _socn_instance(rng)
            else:
                instance = _doca_instance(rng)
            if instance is not None:
                out.append(instance)
                break
            logger.debug("instance %d: oracle inconclusive, redrawing", i)
        else:
            logger.warning("instance %d: no settled draw after %d attempts", i, _MAX_DRAWS)
    return out


def write_corpus(
    kind: CorpusKind, seed: int, count: int, out_dir: str | pathlib.Path
) -> list[ManifestEntry]:
    """Write each instance as a net file plus manifest.txt listing path, label, oracle and bounds."""
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (net, label, oracle, bounds) in enumerate(generate_corpus(kind, seed, count)):
        path = out / f"{kind.value}-{seed}-{i:03d}.net"
        save_net(net, path)
        entries.append(ManifestEntry(path.name, label, oracle, bounds))
    manifest = out / "manifest.txt"
    manifest.write_text("".join(e.render() + "\n" for e in entries))
    logger.info("wrote %d %s instances to %s", len(entries), kind.value, out)
    return entries
