"""Language inclusion, equivalence and universality for history-deterministic nets."""

import logging
from collections.abc import Sequence
from dataclasses import replace

from games import CappedVerdict, Outcome
from hd import AdamWitness, is_history_deterministic, letter_game_refuter
from nets import (
    CAT,
    HEART,
    Config,
    Net,
    NetError,
    NetKind,
    Transition,
    fresh_name,
    prefix_states,
    require_free_letter,
)
from simulation import SimQuery, simulates

logger = logging.getLogger(__name__)

_REFUTE_CAP = 8
_REFUTE_DEPTH = 10


class NotHistoryDeterministic(Exception):
    """Raised when an input that must be history-deterministic is shown not to be."""

    def __init__(self, which: str, witness: AdamWitness | None = None) -> None:
        super().__init__(f"{which} is not history-deterministic")
        self.which = which
        self.witness = witness


def augment_with_cat(net: Net) -> Net:
    """net plus one fresh accepted word: the single reserved cat letter."""
    require_free_letter(net, CAT)
    q_cat = fresh_name("__qcat", net.states)
    return replace(
        net,
        states=(*net.states, q_cat),
        alphabet=(*net.alphabet, CAT),
        finals=net.finals | {q_cat},
        transitions=(*net.transitions, Transition(net.initial, CAT, 0, q_cat)),
    )


def _union_kind(*nets: Net) -> NetKind:
    return NetKind.SOCN if any(n.kind is NetKind.SOCN for n in nets) else NetKind.OCN


def inclusion_gadget(net_a: Net, net_b: Net) -> Net:
    """History-deterministic exactly when L(net_a) is included in L(net_b), for HD inputs.

    A fresh initial state reads the heart letter into either copy; the cat word,
    accepted only by the B copy, punishes committing to A too early.
    """
    if net_a.alphabet != net_b.alphabet:
        raise NetError("inclusion needs nets over the same alphabet")
    for net in (net_a, net_b):
        if net.kind is NetKind.OCA:
            raise NetError("inclusion gadget takes nets without zero tests")
        require_free_letter(net, HEART)
    b = prefix_states(augment_with_cat(net_b), "b:")
    a = prefix_states(replace(net_a, alphabet=b.alphabet), "a:")
    q0 = fresh_name("__q0", (*a.states, *b.states))
    return Net(
        kind=_union_kind(net_a, net_b),
        states=(*a.states, *b.states, q0),
        alphabet=(*b.alphabet, HEART),
        initial=q0,
        finals=a.finals | b.finals,
        transitions=(
            *a.transitions,
            *b.transitions,
            Transition(q0, HEART, 0, a.initial),
            Transition(q0, HEART, 0, b.initial),
        ),
    )


def _require_hd(net: Net, which: str, caps: Sequence[int] | None, deadline: float | None) -> CappedVerdict:
    verdict = is_history_deterministic(net, caps, deadline)
    if verdict.outcome is Outcome.ADAM_WINS:
        raise NotHistoryDeterministic(which, letter_game_refuter(net, _REFUTE_CAP, _REFUTE_DEPTH))
    return verdict


def hd_inclusion(
    net_a: Net,
    net_b: Net,
    caps: Sequence[int] | None = None,
    deadline: float | None = None,
) -> CappedVerdict:
    """EveWins iff L(net_a) is included in L(net_b); both inputs are checked to be HD first."""
    for net, which in ((net_a, "first net"), (net_b, "second net")):
        pre = _require_hd(net, which, caps, deadline)
        if not pre.conclusive:
            logger.warning("could not certify that the %s is history-deterministic", which)
            return CappedVerdict(Outcome.INCONCLUSIVE, pre.cap_used)
    gadget = inclusion_gadget(net_a, net_b)
    return is_history_deterministic(gadget, caps, deadline)


def hd_equivalence(
    net_a: Net,
    net_b: Net,
    caps: Sequence[int] | None = None,
    deadline: float | None = None,
) -> CappedVerdict:
    forward = hd_inclusion(net_a, net_b, caps, deadline)
    if forward.outcome is Outcome.ADAM_WINS:
        return forward
    backward = hd_inclusion(net_b, net_a, caps, deadline)
    if backward.outcome is Outcome.ADAM_WINS:
        return backward
    cap = max(forward.cap_used, backward.cap_used)
    if forward.outcome is Outcome.EVE_WINS and backward.outcome is Outcome.EVE_WINS:
        return CappedVerdict(Outcome.EVE_WINS, cap)
    return CappedVerdict(Outcome.INCONCLUSIVE, cap)


def universal_acceptor(alphabet: Sequence[str]) -> Net:
    """One final state looping on every letter."""
    return Net(
        kind=NetKind.OCN,
        states=("__u",),
        alphabet=tuple(alphabet),
        initial="__u",
        finals=frozenset({"__u"}),
        transitions=tuple(Transition("__u", a, 0, "__u") for a in alphabet),
    )


def universality(
    net: Net, caps: Sequence[int] | None = None, deadline: float | None = None
) -> CappedVerdict:
    """EveWins when the universal acceptor is simulated by net.

    For HD nets this is exactly universality; for other nets EveWins still
    proves universality but AdamWins proves nothing.
    """
    fa = universal_acceptor(net.alphabet)
    query = SimQuery(fa, Config("__u", 0), net, net.initial_config)
    return simulates(query, caps, deadline=deadline, scale=len(net.states))
