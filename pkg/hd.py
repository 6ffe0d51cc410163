"""History-determinism: token game G1, its reduction to simulation, refutation and resolvers."""

import logging
import math
import time
from collections import deque
from collections.abc import Callable, Hashable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any

from games import CappedVerdict, MonotoneArena, Move, Outcome, Player, Position, certified_solve
from nets import (
    HASH,
    Config,
    Net,
    NetKind,
    Transition,
    can_reach_final,
    complete,
    enabled,
    fresh_name,
    require_free_letter,
    reach_set,
    step_set,
)
from semilinear import SemilinearSet, detect_semilinear
from simulation import EVE_SAFE, SimQuery, build_sim_arena

logger = logging.getLogger(__name__)


class ResolverError(Exception):
    """Raised when a resolver decision depends on inconclusive goodness data."""


# ---------------------------------------------------------------------------
# G1 arena
# ---------------------------------------------------------------------------


def _escape_threshold(net: Net, adam_state: str, letter: str) -> int | None:
    """Least Adam counter from which one of his letter-moves can still lead to acceptance.

    None when no counter suffices.
    """
    need = net.credit
    best = math.inf
    for t in net.moves(adam_state, letter):
        if need[t.target] == math.inf:
            continue
        best = min(best, max(need[t.target] - t.delta, max(0, -t.delta)))
    return None if best == math.inf else int(best)


def g1_arena(net: Net) -> MonotoneArena:
    """Rounds: Adam names a letter, Eve moves her token, Adam moves his."""
    if net.kind is NetKind.OCA:
        raise ValueError("g1_arena takes a net without zero tests")
    start = ("round", net.initial, net.initial)
    owner: dict[Hashable, Player] = {start: Player.ADAM, EVE_SAFE: Player.ADAM}
    moves: list[Move] = []
    queue = deque([start])

    def visit(control: Hashable, who: Player) -> None:
        if control not in owner:
            owner[control] = who
            queue.append(control)

    while queue:
        control = queue.popleft()
        kind = control[0]
        if kind == "round":
            _, e, a = control
            for letter in net.alphabet:
                nxt = ("eve", e, a, letter)
                moves.append(Move(control, letter, 0, 0, nxt))
                visit(nxt, Player.EVE)
        elif kind == "eve":
            _, e, a, letter = control
            for u in net.moves(e, letter):
                nxt = ("adam", u.target, a, letter)
                moves.append(Move(control, u, 0, u.delta, nxt))
                visit(nxt, Player.ADAM)
            below = _escape_threshold(net, a, letter)
            moves.append(Move(control, "escape", 0, 0, EVE_SAFE, adam_below=below))
        elif kind == "adam":
            _, e2, a, letter = control
            for t in net.moves(a, letter):
                nxt = ("round", e2, t.target)
                moves.append(Move(control, t, t.delta, 0, nxt))
                visit(nxt, Player.ADAM)

    targets = {
        c
        for c in owner
        if c[0] == "round" and c[2] in net.finals and c[1] not in net.finals
    }
    return MonotoneArena(
        controls=frozenset(owner),
        owner=owner,
        moves=tuple(moves),
        targets=frozenset(targets),
        scale=len(net.states),
    )


def g1_verdict(
    net: Net, caps: Sequence[int] | None = None, deadline: float | None = None
) -> CappedVerdict:
    """Certified winner of G1 played directly on the net's arena."""
    arena = g1_arena(net)
    return certified_solve(arena, Position(("round", net.initial, net.initial), 0, 0), caps, deadline)


# ---------------------------------------------------------------------------
# G1 as a simulation game
# ---------------------------------------------------------------------------


def _lag_net(net: Net, start_letter_state: str) -> tuple[Net, str]:
    """Spoiler side: announces each letter one step before moving on it.

    States q/b remember the pending letter b; q/# marks a final state reached
    on the closing hash.
    """
    s = fresh_name("__s", net.states)

    def pend(q: str, b: str) -> str:
        return f"{q}/{b}"

    transitions = [Transition(s, b, 0, pend(start_letter_state, b)) for b in net.alphabet]
    for t in net.transitions:
        for c in net.alphabet:
            transitions.append(Transition(pend(t.source, t.letter), c, t.delta, pend(t.target, c)))
        if t.target in net.finals:
            transitions.append(
                Transition(pend(t.source, t.letter), HASH, t.delta, pend(t.target, HASH))
            )
    states = [s, *(pend(q, b) for q in net.states for b in net.alphabet)]
    states += [pend(q, HASH) for q in net.finals]
    lag = Net(
        kind=net.kind,
        states=tuple(states),
        alphabet=(*net.alphabet, HASH),
        initial=s,
        finals=frozenset(pend(q, HASH) for q in net.finals),
        transitions=tuple(transitions),
    )
    return lag, s


def _hash_closed(net: Net, extra_states: Sequence[str], extra: Sequence[Transition], initial: str) -> Net:
    """Duplicator side: net plus a final hash state reachable from final states."""
    q_hash = fresh_name("__qhash", [*net.states, *extra_states])
    letters = (*net.alphabet, HASH)
    transitions = [*net.transitions, *extra]
    transitions += [Transition(q, HASH, 0, q_hash) for q in sorted(net.finals)]
    transitions += [Transition(q_hash, b, 0, q_hash) for b in letters]
    return Net(
        kind=net.kind,
        states=(*net.states, *extra_states, q_hash),
        alphabet=letters,
        initial=initial,
        finals=frozenset({q_hash}),
        transitions=tuple(transitions),
    )


def g1_to_sim(net: Net) -> tuple[Net, Net]:
    """(M, M') such that Eve wins G1 on net iff (M, (s,0)) is simulated by (M', (q0,0))."""
    require_free_letter(net, HASH)
    full = complete(net)
    lag, _ = _lag_net(full, full.initial)
    dup = _hash_closed(full, (), (), full.initial)
    return lag, dup


def is_history_deterministic(
    net: Net, caps: Sequence[int] | None = None, deadline: float | None = None
) -> CappedVerdict:
    """EveWins iff the net is history-deterministic."""
    lag, dup = g1_to_sim(net)
    query = SimQuery(lag, lag.initial_config, dup, dup.initial_config)
    arena = build_sim_arena(query, scale=len(net.states))
    verdict = certified_solve(arena, query.position(), caps, deadline)
    logger.info("history-determinism: %s", verdict)
    return verdict


# ---------------------------------------------------------------------------
# Letter game
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdamWitness:
    """Adam's strategy tree: play letter, then follow the branch matching Eve's reply.

    A reply mapped to None ends the play there because the word read is accepted
    while Eve's state is not final. No replies at all means Eve is stuck on a live prefix.
    """

    letter: str
    replies: tuple[tuple[Transition, "AdamWitness | None"], ...] = ()

    @property
    def depth(self) -> int:
        return 1 + max(
            (child.depth for _, child in self.replies if child is not None), default=0
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "letter": self.letter,
            "replies": [
                {"transition": t.render(), "then": None if child is None else child.to_dict()}
                for t, child in self.replies
            ],
        }


def _eve_replies(net: Net, eve: Config, letter: str) -> list[Transition]:
    return [t for t in net.moves(eve.state, letter) if enabled(t, eve.counter)]


def letter_game_refuter(net: Net, cap: int, depth: int) -> AdamWitness | None:
    """Search Adam strategies of at most depth letters that beat every Eve with counter <= cap."""
    if cap < 1 or depth < 1:
        raise ValueError("bounds must be >= 1")
    memo: dict[tuple[Config, frozenset[Config], int], AdamWitness | None] = {}

    def win(eve: Config, runs: frozenset[Config], d: int) -> AdamWitness | None:
        key = (eve, runs, d)
        if key in memo:
            return memo[key]
        memo[key] = None
        found = None
        for letter in net.alphabet:
            after = step_set(net, runs, letter)
            if not any(can_reach_final(net, c) for c in after):
                continue
            replies = _eve_replies(net, eve, letter)
            if not replies:
                found = AdamWitness(letter)
                break
            accepted = any(c.state in net.finals for c in after)
            branches = []
            for t in replies:
                nxt = Config(t.target, eve.counter + t.delta)
                if nxt.counter > cap:
                    break
                if accepted and nxt.state not in net.finals:
                    branches.append((t, None))
                    continue
                sub = win(nxt, after, d - 1) if d > 1 else None
                if sub is None:
                    break
                branches.append((t, sub))
            else:
                found = AdamWitness(letter, tuple(branches))
                break
        memo[key] = found
        return found

    start = net.initial_config
    witness = win(start, frozenset({start}), depth)
    if witness is not None:
        logger.info("letter game refuted with a witness of depth %d", witness.depth)
    return witness


def replay_witness(net: Net, witness: AdamWitness) -> bool:
    """Check a witness against every Eve reply under the exact letter-game rules."""

    def check(node: AdamWitness, eve: Config, runs: frozenset[Config]) -> bool:
        after = step_set(net, runs, node.letter)
        replies = _eve_replies(net, eve, node.letter)
        if {t for t, _ in node.replies} != set(replies):
            return False
        if not replies:
            return any(can_reach_final(net, c) for c in after)
        accepted = any(c.state in net.finals for c in after)
        for t, child in node.replies:
            nxt = Config(t.target, eve.counter + t.delta)
            if child is None:
                if not accepted or nxt.state in net.finals:
                    return False
            elif not check(child, nxt, after):
                return False
        return True

    start = net.initial_config
    return check(witness, start, frozenset({start}))


class PlayStatus(str, Enum):
    ONGOING = "ongoing"
    EVE_STUCK = "eve-stuck"  # Eve has no move on a live prefix: she loses
    EVE_REJECTS = "eve-rejects"  # the word is accepted but Eve's state is not final
    DEAD_WORD = "dead-word"  # no continuation is accepted: Eve can no longer lose


@dataclass
class PlayStep:
    letter: str
    transition: Transition | None
    config: Config | None
    status: PlayStatus


class LetterGame:
    """Replays a letter game against a positional Eve strategy."""

    def __init__(self, net: Net, choose: Callable[[Config, str], Transition | None]) -> None:
        self.net = net
        self.choose = choose
        self.word: list[str] = []
        self.eve: Config | None = net.initial_config
        self.runs = frozenset({net.initial_config})
        self.status = PlayStatus.ONGOING

    def play(self, letter: str) -> PlayStep:
        if letter not in self.net.alphabet:
            raise ValueError(f"letter {letter!r} is not in the alphabet")
        if self.status is not PlayStatus.ONGOING:
            return PlayStep(letter, None, self.eve, self.status)
        self.word.append(letter)
        self.runs = step_set(self.net, self.runs, letter)
        live = any(can_reach_final(self.net, c) for c in self.runs)
        t = self.choose(self.eve, letter) if self.eve is not None else None
        if t is None or not enabled(t, self.eve.counter) or t.letter != letter:
            self.eve = None
            self.status = PlayStatus.EVE_STUCK if live else PlayStatus.DEAD_WORD
            return PlayStep(letter, None, None, self.status)
        self.eve = Config(t.target, self.eve.counter + t.delta)
        if any(c.state in self.net.finals for c in self.runs) and self.eve.state not in self.net.finals:
            self.status = PlayStatus.EVE_REJECTS
        elif not live:
            self.status = PlayStatus.DEAD_WORD
        return PlayStep(letter, t, self.eve, self.status)


# ---------------------------------------------------------------------------
# Good transitions
# ---------------------------------------------------------------------------


class Goodness(str, Enum):
    GOOD = "good"
    NOT_GOOD = "not-good"
    INCONCLUSIVE = "inconclusive"


def good_transition_gadget(net: Net, gamma: Transition) -> tuple[Net, Net, tuple[str, str]]:
    """Nets whose simulation at counter k decides whether gamma is a good first move at k.

    Spoiler's lag net starts from gamma's source; Duplicator starts in a fresh
    state whose only move on gamma's letter is gamma's image, and which copies
    the source's moves on every other letter.
    """
    require_free_letter(net, HASH)
    full = complete(net)
    if gamma not in full.transitions:
        raise ValueError(f"transition '{gamma.render()}' is not in the net")
    lag, s = _lag_net(full, gamma.source)
    s_dup = fresh_name("__s'", full.states)
    first = [Transition(s_dup, gamma.letter, gamma.delta, gamma.target)]
    first += [
        Transition(s_dup, t.letter, t.delta, t.target)
        for t in full.outgoing(gamma.source)
        if t.letter != gamma.letter
    ]
    dup = _hash_closed(full, (s_dup,), first, s_dup)
    return lag, dup, (s, s_dup)


@dataclass
class GoodSet:
    transition: Transition
    samples: tuple[Goodness, ...]
    semilinear: SemilinearSet | None = None

    def is_good(self, k: int) -> Goodness:
        if k < len(self.samples):
            return self.samples[k]
        if self.semilinear is None:
            return Goodness.INCONCLUSIVE
        return Goodness.GOOD if k in self.semilinear else Goodness.NOT_GOOD

    @property
    def inconclusive(self) -> list[int]:
        return [k for k, g in enumerate(self.samples) if g is Goodness.INCONCLUSIVE]

    def render(self) -> str:
        marks = {Goodness.GOOD: "1", Goodness.NOT_GOOD: "0", Goodness.INCONCLUSIVE: "?"}
        bits = "".join(marks[g] for g in self.samples)
        fit = self.semilinear.render() if self.semilinear else "no period found"
        return f"{self.transition.render()}: {bits}  {fit}"


def good_set(
    net: Net,
    gamma: Transition,
    bound: int,
    caps: Sequence[int] | None = None,
    deadline: float | None = None,
    known: Sequence[Goodness] = (),
) -> GoodSet:
    """Goodness of gamma at counters 0..bound, with an eventually periodic fit.

    known holds already sampled goodness for counters 0..len(known)-1; only the
    remaining counters are solved.
    """
    if bound < 8:
        raise ValueError("bound must be at least 8")
    lag, dup, (s, s_dup) = good_transition_gadget(net, gamma)
    arena = build_sim_arena(
        SimQuery(lag, Config(s, 0), dup, Config(s_dup, 0)), scale=len(net.states)
    )
    samples = list(known[: bound + 1])
    for k in range(len(samples), bound + 1):
        if not enabled(gamma, k):
            samples.append(Goodness.NOT_GOOD)
            continue
        verdict = certified_solve(arena, Position(("adam", s, s_dup), k, k), caps, deadline)
        if verdict.outcome is Outcome.EVE_WINS:
            samples.append(Goodness.GOOD)
        elif verdict.outcome is Outcome.ADAM_WINS:
            samples.append(Goodness.NOT_GOOD)
        else:
            logger.warning("goodness of '%s' at %d is inconclusive", gamma.render(), k)
            samples.append(Goodness.INCONCLUSIVE)
    bits = [None if g is Goodness.INCONCLUSIVE else g is Goodness.GOOD for g in samples]
    return GoodSet(gamma, tuple(samples), detect_semilinear(bits))


def good_sets(
    net: Net,
    bound: int,
    caps: Sequence[int] | None = None,
    deadline: float | None = None,
    max_bound: int | None = None,
) -> dict[Transition, GoodSet]:
    """Good sets of every transition.

    Sets without a periodic fit are resampled with a doubled bound, keeping the
    samples already solved, until every set fits, max_bound is reached or the
    deadline passes.
    """
    goods = {t: good_set(net, t, bound, caps, deadline) for t in net.transitions}
    limit = bound if max_bound is None else max_bound
    while bound < limit:
        unfit = [t for t, g in goods.items() if g.semilinear is None]
        if not unfit or (deadline is not None and time.monotonic() > deadline):
            break
        bound = min(2 * bound, limit)
        logger.info("%d good sets without a fit, sampling up to %d", len(unfit), bound)
        for t in unfit:
            goods[t] = good_set(net, t, bound, caps, deadline, known=goods[t].samples)
    return goods


def resolver_move(
    net: Net, goods: Mapping[Transition, GoodSet], config: Config, letter: str
) -> Transition | None:
    """Canonically least enabled transition that is good at config, or None.

    Raises ResolverError when an enabled transition ahead of the first good one
    has unknown goodness.
    """
    for t in net.moves(config.state, letter):
        if not enabled(t, config.counter):
            continue
        verdict = goods[t].is_good(config.counter)
        if verdict is Goodness.GOOD:
            return t
        if verdict is Goodness.INCONCLUSIVE:
            raise ResolverError(f"goodness of '{t.render()}' unknown at {config}")
    return None


def resolver_strategy(
    net: Net, goods: Mapping[Transition, GoodSet]
) -> Callable[[Config, str], Transition | None]:
    """Eve strategy: resolver_move, falling back to the least enabled transition on dead configurations."""

    def choose(config: Config, letter: str) -> Transition | None:
        t = resolver_move(net, goods, config, letter)
        if t is not None:
            return t
        options = [u for u in net.moves(config.state, letter) if enabled(u, config.counter)]
        return options[0] if options else None

    return choose


def residual_counterexample(
    net: Net, t: Transition, counter: int, max_len: int
) -> tuple[str, ...] | None:
    """Shortest word w with t.letter + w accepted from (source, counter) but not from t's target, or vice versa."""
    if not enabled(t, counter):
        raise ValueError(f"'{t.render()}' is not enabled at {counter}")
    left = reach_set(net, (t.letter,), Config(t.source, counter))
    right = frozenset({Config(t.target, counter + t.delta)})
    seen = {(left, right)}
    queue: deque[tuple[tuple[str, ...], frozenset[Config], frozenset[Config]]] = deque(
        [((), left, right)]
    )
    while queue:
        word, lhs, rhs = queue.popleft()
        if any(c.state in net.finals for c in lhs) != any(c.state in net.finals for c in rhs):
            return word
        if len(word) == max_len:
            continue
        for letter in net.alphabet:
            pair = (step_set(net, lhs, letter), step_set(net, rhs, letter))
            if pair not in seen and (pair[0] or pair[1]):
                seen.add(pair)
                queue.append(((*word, letter), *pair))
    return None
