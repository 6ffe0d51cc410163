"""Reachability games: finite attractors and certified solving of two-counter arenas.

An arena has finitely many controls; a position is (control, k1, k2) with
counter 1 helping Adam and counter 2 helping Eve. Adam wins by reaching a
target control. A player with no enabled move is stuck: a stuck Eve loses and
a stuck Adam lets Eve win.

Infinite arenas are solved through two finite truncations per cap. Both keep
counters exact while k1 <= cap and k2 <= 2*cap + maxdelta; beyond k1 > cap they
track only k2 - k1 in a band of width cap. The pessimistic truncation settles
every approximation in Adam's favour, the optimistic one in Eve's, so an Eve
win of the former and an Adam win of the latter are both certified.
"""

import logging
import os
import time
from collections import deque
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import networkx as nx

logger = logging.getLogger(__name__)

_CAP_MULTIPLIERS = (1, 2, 4, 8, 16)
_DEADLINE_CHECK_EVERY = 4096  # nodes

ADAM_WIN = ("adam-wins",)
EVE_WIN = ("eve-wins",)


class Player(str, Enum):
    EVE = "eve"
    ADAM = "adam"


class Outcome(str, Enum):
    EVE_WINS = "EveWins"
    ADAM_WINS = "AdamWins"
    INCONCLUSIVE = "Inconclusive"
    UNKNOWN = "Unknown"


class Mode(str, Enum):
    PESSIMISTIC = "pessimistic"
    OPTIMISTIC = "optimistic"


class ArenaError(ValueError):
    """Raised when an arena is malformed."""


class SolveTimeout(Exception):
    """Raised when a solve passes its deadline."""


def parse_caps(text: str) -> list[int]:
    caps = [int(part) for part in text.split(",") if part.strip()]
    if not caps or any(c < 1 for c in caps) or caps != sorted(caps):
        raise ValueError(f"cap schedule must be increasing positive integers, got {text!r}")
    return caps


def default_caps(scale: int) -> list[int]:
    """Cap schedule: OCNHD_CAPS when set, else scale * (1, 2, 4, 8, 16)."""
    raw = os.environ.get("OCNHD_CAPS", "")
    if raw:
        return parse_caps(raw)
    return [max(scale, 1) * m for m in _CAP_MULTIPLIERS]


# ---------------------------------------------------------------------------
# Arenas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Move:
    source: Hashable
    label: Hashable
    delta1: int
    delta2: int
    target: Hashable
    adam_below: int | None = None  # Eve move enabled only while k1 < adam_below


@dataclass(frozen=True, order=True)
class Position:
    control: Hashable
    k1: int
    k2: int


@dataclass
class MonotoneArena:
    """Finite control graph whose positions also carry two natural counters.

    Adam moves touch only counter 1, Eve moves only counter 2. ``scale`` is the
    size of the nets the arena was built from; it seeds the default cap schedule.
    """

    controls: frozenset
    owner: Mapping[Hashable, Player]
    moves: tuple[Move, ...]
    targets: frozenset = frozenset()
    scale: int = 1

    def __post_init__(self) -> None:
        self.controls = frozenset(self.controls)
        self.targets = frozenset(self.targets)
        self.moves = tuple(self.moves)
        missing = [c for c in self.controls if c not in self.owner]
        if missing:
            raise ArenaError(f"control {missing[0]!r} has no owner")
        for m in self.moves:
            if m.source not in self.controls or m.target not in self.controls:
                raise ArenaError(f"move {m.label!r} leaves the declared controls")
            if self.owner[m.source] is Player.ADAM:
                if m.delta2 != 0:
                    raise ArenaError(f"Adam move {m.label!r} changes counter 2")
                if m.adam_below is not None:
                    raise ArenaError(f"Adam move {m.label!r} carries an Eve guard")
            elif m.delta1 != 0:
                raise ArenaError(f"Eve move {m.label!r} changes counter 1")
        stray = self.targets - self.controls
        if stray:
            raise ArenaError(f"target {next(iter(stray))!r} is not a control")

    @cached_property
    def _out(self) -> dict[Hashable, tuple[Move, ...]]:
        index: dict[Hashable, list[Move]] = {}
        for m in self.moves:
            index.setdefault(m.source, []).append(m)
        return {c: tuple(ms) for c, ms in index.items()}

    @cached_property
    def max_delta(self) -> int:
        return max((max(abs(m.delta1), abs(m.delta2)) for m in self.moves), default=0)

    def moves_from(self, control: Hashable) -> tuple[Move, ...]:
        return self._out.get(control, ())

    def is_enabled(self, m: Move, k1: int, k2: int) -> bool:
        if k1 + m.delta1 < 0 or k2 + m.delta2 < 0:
            return False
        return m.adam_below is None or k1 < m.adam_below

    def successors(self, p: Position) -> list[tuple[Move, Position]]:
        return [
            (m, Position(m.target, p.k1 + m.delta1, p.k2 + m.delta2))
            for m in self.moves_from(p.control)
            if self.is_enabled(m, p.k1, p.k2)
        ]


# ---------------------------------------------------------------------------
# Finite games
# ---------------------------------------------------------------------------


@dataclass
class Solution:
    attractor: frozenset
    rank: dict[Hashable, int]
    adam_strategy: dict[Hashable, Hashable] = field(default_factory=dict)
    eve_strategy: dict[Hashable, Hashable] = field(default_factory=dict)


@dataclass
class FiniteGame:
    graph: nx.DiGraph
    targets: frozenset
    initial: Hashable

    def owner(self, v: Hashable) -> Player:
        return self.graph.nodes[v]["owner"]


def _canonical(v: Hashable) -> str:
    return repr(v)


def attractor(graph: nx.DiGraph, owner: Mapping[Hashable, Player], targets: Iterable) -> Solution:
    """Adam attractor of targets, with ranks and positional strategies for both players."""
    rank: dict[Hashable, int] = {}
    remaining: dict[Hashable, int] = {}
    queue: deque = deque()
    for v in graph.nodes:
        if v in targets:
            rank[v] = 0
            queue.append(v)
        elif owner[v] is Player.EVE:
            remaining[v] = graph.out_degree(v)
            if remaining[v] == 0:
                rank[v] = 0
                queue.append(v)
    while queue:
        v = queue.popleft()
        for u in graph.predecessors(v):
            if u in rank:
                continue
            if owner[u] is Player.ADAM:
                rank[u] = rank[v] + 1
                queue.append(u)
            else:
                remaining[u] -= 1
                if remaining[u] == 0:
                    rank[u] = rank[v] + 1
                    queue.append(u)

    solution = Solution(attractor=frozenset(rank), rank=rank)
    for v in graph.nodes:
        succs = list(graph.successors(v))
        if not succs or v in targets:
            continue
        if owner[v] is Player.ADAM and v in rank:
            solution.adam_strategy[v] = min(
                (s for s in succs if s in rank), key=lambda s: (rank[s], _canonical(s))
            )
        elif owner[v] is Player.EVE and v not in rank:
            solution.eve_strategy[v] = min((s for s in succs if s not in rank), key=_canonical)
    return solution


def solve_finite_reachability(
    vertices: Iterable[Hashable],
    edges: Iterable[tuple[Hashable, Hashable]],
    owner: Mapping[Hashable, Player],
    targets: Iterable[Hashable],
) -> Solution:
    graph = nx.DiGraph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from(edges)
    return attractor(graph, owner, frozenset(targets))


def solve_game(game: FiniteGame) -> Solution:
    owner = nx.get_node_attributes(game.graph, "owner")
    return attractor(game.graph, owner, game.targets)


# ---------------------------------------------------------------------------
# Truncations
# ---------------------------------------------------------------------------


class _Truncation:
    def __init__(self, arena: MonotoneArena, cap: int, mode: Mode, deadline: float | None):
        if cap < 1:
            raise ValueError("cap must be at least 1")
        self.arena = arena
        self.cap = cap
        self.hi2 = 2 * cap + max(arena.max_delta, 1)
        self.mode = mode
        self.deadline = deadline

    @property
    def pessimistic(self) -> bool:
        return self.mode is Mode.PESSIMISTIC

    def node(self, control: Hashable, k1: int, k2: int) -> Hashable:
        """Abstract node for a concrete position (k1, k2 >= 0)."""
        if control in self.arena.targets:
            return ADAM_WIN
        if k1 > self.cap:
            return self.band(control, k2 - k1)
        if k2 > self.hi2:
            return ("x", control, k1, self.hi2) if self.pessimistic else EVE_WIN
        return ("x", control, k1, k2)

    def band(self, control: Hashable, diff: int) -> Hashable:
        """Abstract node for k1 > cap and k2 = k1 + diff."""
        if control in self.arena.targets:
            return ADAM_WIN
        if diff > self.cap:
            return ("d", control, self.cap) if self.pessimistic else EVE_WIN
        if diff < -self.cap:
            return ADAM_WIN if self.pessimistic else ("d", control, -self.cap)
        return ("d", control, diff)

    def owner(self, v: Hashable) -> Player:
        if v[0] in ("x", "d"):
            return self.arena.owner[v[1]]
        if v[0] == "r":
            return Player.EVE
        return Player.ADAM

    def _drops(self, control: Hashable, diff: int, d1: int) -> list[Hashable]:
        """Exact nodes reachable when an Adam decrement takes k1 from above cap to at most cap."""
        out = []
        for k1 in range(max(0, self.cap + 1 + d1), self.cap + 1):
            k2 = k1 + diff - d1
            if k2 >= 0:
                out.append(self.node(control, k1, k2))
        return out

    def expand(self, v: Hashable) -> list[Hashable]:
        kind = v[0]
        if kind == "r":
            return list(v[4])
        if kind not in ("x", "d"):
            return []
        control = v[1]
        adam_turn = self.arena.owner[control] is Player.ADAM
        out: list[Hashable] = []
        for m in self.arena.moves_from(control):
            if kind == "x":
                _, _, k1, k2 = v
                if not self.arena.is_enabled(m, k1, k2):
                    continue
                out.append(self.node(m.target, k1 + m.delta1, k2 + m.delta2))
            elif adam_turn:
                out.extend(self._band_adam(m, v[2]))
            else:
                succ = self._band_eve(m, v[2])
                if succ is not None:
                    out.append(succ)
        return out

    def _band_adam(self, m: Move, diff: int) -> list[Hashable]:
        d1 = m.delta1
        stay = self.band(m.target, diff - d1)
        if d1 >= 0:
            return [stay]
        if self.pessimistic:
            return [stay, *self._drops(m.target, diff, d1)]
        if self.cap + 1 + d1 < 0:
            return []
        options = tuple(dict.fromkeys([stay, *self._drops(m.target, diff, d1)]))
        if len(options) == 1:
            return [options[0]]
        return [("r", m.target, diff, d1, options)]

    def _band_eve(self, m: Move, diff: int) -> Hashable | None:
        if self.pessimistic:
            if m.adam_below is not None:
                return None
            if max(self.cap + 1 + diff, 0) + m.delta2 < 0:
                return None
        elif m.adam_below is not None and m.adam_below <= self.cap + 1:
            return None
        return self.band(m.target, diff + m.delta2)

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SolveTimeout(f"deadline passed at cap {self.cap}")

    def build(self, initial: Position) -> FiniteGame:
        self._check_deadline()
        root = self.node(initial.control, initial.k1, initial.k2)
        graph = nx.DiGraph()
        graph.add_node(root, owner=self.owner(root))
        queue = deque([root])
        while queue:
            v = queue.popleft()
            if graph.number_of_nodes() % _DEADLINE_CHECK_EVERY == 0:
                self._check_deadline()
            for s in self.expand(v):
                if s not in graph:
                    graph.add_node(s, owner=self.owner(s))
                    queue.append(s)
                graph.add_edge(v, s)
        targets = frozenset({ADAM_WIN}) & frozenset(graph.nodes)
        logger.debug(
            "%s truncation at cap %d: %d nodes, %d edges",
            self.mode.value,
            self.cap,
            graph.number_of_nodes(),
            graph.number_of_edges(),
        )
        return FiniteGame(graph=graph, targets=targets, initial=root)


def pessimistic_truncation(
    arena: MonotoneArena, cap: int, initial: Position, deadline: float | None = None
) -> FiniteGame:
    """Finite game in which Eve winning implies Eve wins the arena from initial."""
    return _Truncation(arena, cap, Mode.PESSIMISTIC, deadline).build(initial)


def optimistic_truncation(
    arena: MonotoneArena, cap: int, initial: Position, deadline: float | None = None
) -> FiniteGame:
    """Finite game in which Adam winning implies Adam wins the arena from initial."""
    return _Truncation(arena, cap, Mode.OPTIMISTIC, deadline).build(initial)


def truncation_winner(game: FiniteGame) -> tuple[Player, Solution]:
    solution = solve_game(game)
    winner = Player.ADAM if game.initial in solution.attractor else Player.EVE
    return winner, solution


# ---------------------------------------------------------------------------
# Certified solving
# ---------------------------------------------------------------------------


@dataclass
class CappedVerdict:
    outcome: Outcome
    cap_used: int
    strategy: dict[Hashable, Hashable] | None = None

    @property
    def conclusive(self) -> bool:
        return self.outcome in (Outcome.EVE_WINS, Outcome.ADAM_WINS)

    def __str__(self) -> str:
        return f"{self.outcome.value} (cap {self.cap_used})"


def certified_solve(
    arena: MonotoneArena,
    initial: Position,
    caps: Iterable[int] | None = None,
    deadline: float | None = None,
) -> CappedVerdict:
    schedule = list(caps) if caps is not None else default_caps(arena.scale)
    if not schedule:
        raise ValueError("cap schedule is empty")
    last = 0
    for cap in schedule:
        try:
            pess = pessimistic_truncation(arena, cap, initial, deadline)
            winner, solution = truncation_winner(pess)
            if winner is Player.EVE:
                logger.info("EveWins certified at cap %d", cap)
                return CappedVerdict(Outcome.EVE_WINS, cap, solution.eve_strategy)
            opt = optimistic_truncation(arena, cap, initial, deadline)
            winner, solution = truncation_winner(opt)
            if winner is Player.ADAM:
                logger.info("AdamWins certified at cap %d", cap)
                return CappedVerdict(Outcome.ADAM_WINS, cap, solution.adam_strategy)
        except SolveTimeout as exc:
            logger.warning("Solver stopped: %s: %s", type(exc).__name__, exc)
            return CappedVerdict(Outcome.INCONCLUSIVE, last)
        logger.info("cap %d inconclusive", cap)
        last = cap
    return CappedVerdict(Outcome.INCONCLUSIVE, last)


def brute_force_bounded(arena: MonotoneArena, initial: Position, cap: int, depth: int) -> Outcome:
    """Explicit bounded search.

    AdamWins when Adam forces a target within depth steps keeping counter 1 within
    cap (an Eve move over cap counts as her escape); EveWins when Eve survives
    depth steps keeping counter 2 within cap (an Adam move over cap counts against
    her). Only the AdamWins answer is a proof about the infinite arena.
    """
    forces: dict[tuple[Hashable, int, int, int], bool] = {}
    survives: dict[tuple[Hashable, int, int, int], bool] = {}

    def adam_forces(p: Position, d: int) -> bool:
        if p.control in arena.targets:
            return True
        if d == 0:
            return False
        key = (p.control, p.k1, p.k2, d)
        if key in forces:
            return forces[key]
        succs = [s for _, s in arena.successors(p)]
        if arena.owner[p.control] is Player.ADAM:
            result = any(s.k1 <= cap and adam_forces(s, d - 1) for s in succs)
        elif not succs:
            result = True
        elif any(s.k2 > cap for s in succs):
            result = False
        else:
            result = all(adam_forces(s, d - 1) for s in succs)
        forces[key] = result
        return result

    def eve_survives(p: Position, d: int) -> bool:
        if p.control in arena.targets:
            return False
        if d == 0:
            return True
        key = (p.control, p.k1, p.k2, d)
        if key in survives:
            return survives[key]
        succs = [s for _, s in arena.successors(p)]
        if arena.owner[p.control] is Player.ADAM:
            result = all(s.k1 <= cap and eve_survives(s, d - 1) for s in succs)
        else:
            result = any(s.k2 <= cap and eve_survives(s, d - 1) for s in succs)
        survives[key] = result
        return result

    if adam_forces(initial, depth):
        return Outcome.ADAM_WINS
    if eve_survives(initial, depth):
        return Outcome.EVE_WINS
    return Outcome.UNKNOWN
