"""Simulation games between one-counter nets.

Spoiler plays a letter and a transition of net A; Duplicator answers with a
transition of net B on the same letter. In the final-state game Spoiler wins on
reaching a final A-state while B is non-final, or when Duplicator cannot answer
although Spoiler's run can still reach acceptance. In the stuck game
(``Mode.STUCK``) the only way to lose is to have no move.
"""

import logging
import math
from collections import deque
from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum

from games import (
    CappedVerdict,
    MonotoneArena,
    Move,
    Outcome,
    Player,
    Position,
    certified_solve,
)
from nets import DOLLAR, Config, Net, NetKind, Transition, complete, require_free_letter

logger = logging.getLogger(__name__)

EVE_SAFE = ("eve-safe",)


class SimMode(str, Enum):
    FINAL = "final"
    STUCK = "stuck"


class SimulationError(ValueError):
    """Raised when two nets cannot be played against each other."""


@dataclass(frozen=True)
class SimQuery:
    net_a: Net
    config_a: Config
    net_b: Net
    config_b: Config

    def position(self) -> Position:
        return Position(
            ("adam", self.config_a.state, self.config_b.state),
            self.config_a.counter,
            self.config_b.counter,
        )


def _check_query(q: SimQuery) -> None:
    if q.net_a.alphabet != q.net_b.alphabet:
        raise SimulationError(
            f"alphabets differ: {list(q.net_a.alphabet)} vs {list(q.net_b.alphabet)}"
        )
    for net, c in ((q.net_a, q.config_a), (q.net_b, q.config_b)):
        if net.kind is NetKind.OCA:
            raise SimulationError("simulation games are played on nets without zero tests")
        if c.state not in net.states or c.counter < 0:
            raise SimulationError(f"configuration {c} is not valid in its net")


def build_sim_arena(
    q: SimQuery, mode: SimMode = SimMode.FINAL, scale: int | None = None
) -> MonotoneArena:
    """Arena reachable from the query's state pair; counter 1 is Spoiler's, counter 2 Duplicator's."""
    _check_query(q)
    a, b = q.net_a, q.net_b
    need = a.credit if mode is SimMode.FINAL else {}
    start = ("adam", q.config_a.state, q.config_b.state)
    owner: dict[Hashable, Player] = {start: Player.ADAM}
    moves: list[Move] = []
    queue = deque([start])

    def visit(control: Hashable, who: Player) -> None:
        if control not in owner:
            owner[control] = who
            queue.append(control)

    while queue:
        control = queue.popleft()
        if control == EVE_SAFE:
            continue
        if control[0] == "adam":
            _, pa, pb = control
            for t in a.outgoing(pa):
                nxt = ("eve", t.target, pb, t.letter)
                moves.append(Move(control, t, t.delta, 0, nxt))
                visit(nxt, Player.EVE)
        else:
            _, qa, pb, letter = control
            for u in b.moves(pb, letter):
                nxt = ("adam", qa, u.target)
                moves.append(Move(control, u, 0, u.delta, nxt))
                visit(nxt, Player.ADAM)
            if mode is SimMode.FINAL:
                threshold = need[qa]
                below = None if threshold == math.inf else int(threshold)
                moves.append(Move(control, "escape", 0, 0, EVE_SAFE, adam_below=below))
                visit(EVE_SAFE, Player.ADAM)

    targets: set[Hashable] = set()
    if mode is SimMode.FINAL:
        targets = {
            c
            for c in owner
            if c != EVE_SAFE and c[0] == "adam" and c[1] in a.finals and c[2] not in b.finals
        }
    logger.debug("sim arena: %d controls, %d moves", len(owner), len(moves))
    return MonotoneArena(
        controls=frozenset(owner),
        owner=owner,
        moves=tuple(moves),
        targets=frozenset(targets),
        scale=scale or max(len(a.states), len(b.states)),
    )


def simulates(
    q: SimQuery,
    caps: Sequence[int] | None = None,
    mode: SimMode = SimMode.FINAL,
    deadline: float | None = None,
    scale: int | None = None,
) -> CappedVerdict:
    """EveWins means (net_b, config_b) simulates (net_a, config_a)."""
    arena = build_sim_arena(q, mode, scale)
    return certified_solve(arena, q.position(), caps, deadline)


# ---------------------------------------------------------------------------
# Final-state game <-> stuck game
# ---------------------------------------------------------------------------


def _with_dollar_loops(net: Net) -> Net:
    loops = [Transition(q, DOLLAR, 0, q) for q in sorted(net.finals)]
    return replace(
        net, alphabet=(*net.alphabet, DOLLAR), transitions=(*net.transitions, *loops)
    )


def to_original_sim(net_a: Net, net_b: Net) -> tuple[Net, Net]:
    """Stuck-game instance with the same winner as the final-state game on the inputs."""
    for net in (net_a, net_b):
        require_free_letter(net, DOLLAR)
    return _with_dollar_loops(complete(net_a)), _with_dollar_loops(complete(net_b))


def _all_final_complete(net: Net) -> Net:
    completed = complete(replace(net, finals=frozenset(net.states)))
    return completed


def from_original_sim(net_a: Net, net_b: Net) -> tuple[Net, Net]:
    """Final-state instance with the same winner as the stuck game on the inputs.

    Original states become final and a rejecting sink absorbs every missing move.
    """
    return _all_final_complete(net_a), _all_final_complete(net_b)


# ---------------------------------------------------------------------------
# Frontiers
# ---------------------------------------------------------------------------


@dataclass
class FrontierEntry:
    k: int
    least: int | None  # least certified Duplicator counter, None if none found
    exact: bool = False  # least - 1 (or nothing below 0) was certified losing


@dataclass
class Frontier:
    state_pair: tuple[str, str]
    entries: list[FrontierEntry] = field(default_factory=list)

    def table(self) -> list[int | None]:
        return [e.least for e in self.entries]

    def render(self) -> str:
        cells = []
        for e in self.entries:
            value = "?" if e.least is None else str(e.least)
            cells.append(f"{e.k}:{value}{'' if e.exact else '~'}")
        return f"{self.state_pair[0]} vs {self.state_pair[1]}: " + " ".join(cells)


def frontier(
    net_a: Net,
    net_b: Net,
    state_pair: tuple[str, str],
    kmax: int,
    caps: Sequence[int],
    kprime_max: int | None = None,
    deadline: float | None = None,
) -> Frontier:
    """For k = 0..kmax, the least k' with (net_a,(p,k)) simulated by (net_b,(p',k'))."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    p, p2 = state_pair
    top = kprime_max if kprime_max is not None else kmax + len(net_b.states) * max(caps)
    arena = build_sim_arena(SimQuery(net_a, Config(p, 0), net_b, Config(p2, 0)))
    start = ("adam", p, p2)
    memo: dict[tuple[int, int], Outcome] = {}

    def verdict(k: int, k2: int) -> Outcome:
        if (k, k2) not in memo:
            memo[(k, k2)] = certified_solve(arena, Position(start, k, k2), caps, deadline).outcome
        return memo[(k, k2)]

    result = Frontier(state_pair=state_pair)
    for k in range(kmax + 1):
        lo, hi = 0, top
        least = None
        while lo <= hi:
            mid = (lo + hi) // 2
            if verdict(k, mid) is Outcome.EVE_WINS:
                least = mid
                hi = mid - 1
            else:
                lo = mid + 1
        exact = least is not None and (least == 0 or verdict(k, least - 1) is Outcome.ADAM_WINS)
        result.entries.append(FrontierEntry(k, least, exact))

    # a Duplicator win at (k+1, k') is also one at (k, k')
    for i in range(len(result.entries) - 2, -1, -1):
        cur, nxt = result.entries[i], result.entries[i + 1]
        if nxt.least is not None and (cur.least is None or cur.least > nxt.least):
            logger.warning("frontier at k=%d lowered from %s to %d", cur.k, cur.least, nxt.least)
            cur.least = nxt.least
            cur.exact = False
    known = [e.least for e in result.entries if e.least is not None]
    assert known == sorted(known), "frontier table must be non-decreasing"
    return result
