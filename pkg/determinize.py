"""Determinisation of history-deterministic nets into deterministic one-counter automata.

The candidate automaton keeps the original state and a scaled counter. Counter
values up to I live in block states <q,m> (candidate counter 0); larger values
n = i + I + c*P live in periodic states [q,i] with candidate counter c. Because
goodness is eventually periodic with threshold I and period P, whether a
transition is good is a function of the candidate state and of the zero test.
"""

import logging
import math
from collections import deque
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

from hd import GoodSet, Goodness, good_sets
from nets import (
    Config,
    Guard,
    Net,
    NetKind,
    Transition,
    expand_binary,
    step_set,
)
from semilinear import SemilinearSet

logger = logging.getLogger(__name__)

GoodnessOracle = Callable[[Transition, int], Goodness]


class CandidateError(Exception):
    """Raised when the candidate automaton cannot be built from the available goodness data."""


@dataclass(frozen=True)
class ScaledState:
    periodic: bool
    q: str
    index: int

    @property
    def name(self) -> str:
        return f"[{self.q},{self.index}]" if self.periodic else f"<{self.q},{self.index}>"

    def __str__(self) -> str:
        return self.name


def global_period(goods: Mapping[Transition, GoodSet]) -> tuple[int, int]:
    """Common threshold (max) and period (lcm) of every fitted good set."""
    threshold, period = 0, 1
    for t, g in goods.items():
        if g.semilinear is None or g.inconclusive:
            raise CandidateError(f"good set of '{t.render()}' has no conclusive fit")
        threshold = max(threshold, g.semilinear.threshold)
        period = math.lcm(period, g.semilinear.period)
    return threshold, period


def good_oracle(goods: Mapping[Transition, GoodSet]) -> GoodnessOracle:
    def oracle(t: Transition, k: int) -> Goodness:
        return goods[t].is_good(k)

    return oracle


def psi(state: ScaledState, counter: int, threshold: int, period: int) -> Config:
    """Configuration of the source net represented by a candidate configuration."""
    if not state.periodic:
        if counter != 0:
            raise ValueError("block states only occur with counter 0")
        return Config(state.q, state.index)
    return Config(state.q, state.index + threshold + counter * period)


def theta(config: Config, threshold: int, period: int) -> tuple[ScaledState, int]:
    """Inverse of psi."""
    n = config.counter
    if n <= threshold:
        return ScaledState(False, config.state, n), 0
    i = (n - threshold - 1) % period + 1
    return ScaledState(True, config.state, i), (n - threshold - i) // period


def build_candidate(net: Net, threshold: int, period: int, oracle: GoodnessOracle) -> Net:
    """Nondeterministic automaton whose transitions are exactly the good moves of net."""
    if net.kind is NetKind.OCA:
        raise CandidateError("the source must be a net without zero tests")
    if net.max_delta > 1:
        raise CandidateError("expand succinct deltas before building the candidate")
    I, P = threshold, period

    def good(t: Transition, n: int) -> bool:
        if n + t.delta < 0:
            return False
        verdict = oracle(t, n)
        if verdict is Goodness.INCONCLUSIVE:
            raise CandidateError(f"goodness of '{t.render()}' at {n} is unknown")
        return verdict is Goodness.GOOD

    block = {(q, m): ScaledState(False, q, m) for q in net.states for m in range(I + 1)}
    periodic = {(q, i): ScaledState(True, q, i) for q in net.states for i in range(1, P + 1)}
    out: list[Transition] = []

    def add(src: ScaledState, guard: Guard, t: Transition, delta: int, dst: ScaledState) -> None:
        out.append(Transition(src.name, t.letter, delta, dst.name, guard))

    for t in net.transitions:
        q, d, q2 = t.source, t.delta, t.target
        for m in range(I + 1):
            if not good(t, m):
                continue
            j = m + d
            if j <= I:
                add(block[(q, m)], Guard.ZERO, t, 0, block[(q2, j)])
            else:
                add(block[(q, m)], Guard.ZERO, t, 0, periodic[(q2, 1)])
        for i in range(1, P + 1):
            # zero test: n = i + I
            if good(t, i + I):
                j = i + d
                if j < 1:
                    add(periodic[(q, i)], Guard.ZERO, t, 0, block[(q2, I)])
                elif j <= P:
                    add(periodic[(q, i)], Guard.ZERO, t, 0, periodic[(q2, j)])
                else:
                    add(periodic[(q, i)], Guard.ZERO, t, 1, periodic[(q2, 1)])
            # nonzero: n = i + I + c*P with c >= 1
            if good(t, i + I + P):
                j = i + d
                if j < 1:
                    add(periodic[(q, i)], Guard.NONZERO, t, -1, periodic[(q2, P)])
                elif j <= P:
                    add(periodic[(q, i)], Guard.NONZERO, t, 0, periodic[(q2, j)])
                else:
                    add(periodic[(q, i)], Guard.NONZERO, t, 1, periodic[(q2, 1)])

    states = [s.name for s in (*block.values(), *periodic.values())]
    finals = [s.name for s in (*block.values(), *periodic.values()) if s.q in net.finals]
    candidate = Net(
        kind=NetKind.OCA,
        states=tuple(states),
        alphabet=net.alphabet,
        initial=block[(net.initial, 0)].name,
        finals=frozenset(finals),
        transitions=tuple(out),
    )
    logger.info(
        "candidate: I=%d P=%d, %d states, %d transitions",
        I,
        P,
        len(candidate.states),
        len(candidate.transitions),
    )
    return candidate


def prune(candidate: Net) -> Net:
    """Keep the canonically least transition per (state, guard, letter)."""
    kept: dict[tuple[str, Guard | None, str], Transition] = {}
    for t in candidate.transitions:
        kept.setdefault((t.source, t.guard, t.letter), t)
    return candidate.with_changes(transitions=tuple(kept.values()))


def bounded_equiv(a: Net, b: Net, max_len: int) -> tuple[str, ...] | None:
    """Length-lexicographically least word of length <= max_len accepted by exactly one net."""
    if a.alphabet != b.alphabet:
        raise ValueError("nets must share an alphabet")
    start = (frozenset({a.initial_config}), frozenset({b.initial_config}))
    seen = {start}
    queue: deque[tuple[tuple[str, ...], frozenset[Config], frozenset[Config]]] = deque(
        [((), *start)]
    )
    while queue:
        word, ra, rb = queue.popleft()
        if any(c.state in a.finals for c in ra) != any(c.state in b.finals for c in rb):
            return word
        if len(word) == max_len:
            continue
        for letter in a.alphabet:
            pair = (step_set(a, ra, letter), step_set(b, rb, letter))
            if pair not in seen and (pair[0] or pair[1]):
                seen.add(pair)
                queue.append(((*word, letter), *pair))
    return None


@dataclass
class Determinization:
    doca: Net
    threshold: int
    period: int
    goods: dict[Transition, GoodSet]
    counterexample: tuple[str, ...] | None


def determinize(
    net: Net,
    bound: int = 16,
    caps: Sequence[int] | None = None,
    check_len: int = 8,
    deadline: float | None = None,
    max_bound: int = 64,
) -> Determinization:
    """Good sets, common period, candidate, pruning, then a bounded equivalence check.

    Good sets are resampled up to max_bound until each has a periodic fit.
    """
    source = expand_binary(net) if net.kind is NetKind.SOCN else net
    goods = good_sets(source, bound, caps, deadline, max_bound=max(bound, max_bound))
    threshold, period = global_period(goods)
    candidate = build_candidate(source, threshold, period, good_oracle(goods))
    doca = prune(candidate)
    counterexample = bounded_equiv(source, doca, check_len)
    if counterexample is not None:
        logger.warning("determinised automaton differs on %r", counterexample)
    return Determinization(doca, threshold, period, goods, counterexample)


def rephrased(goods: Mapping[Transition, GoodSet], threshold: int, period: int) -> dict[Transition, SemilinearSet]:
    """Every fitted good set restated with the common threshold and period."""
    return {
        t: g.semilinear.rephrase(threshold, period)
        for t, g in goods.items()
        if g.semilinear is not None
    }
