"""Tests for hardness gadgets, their oracles and corpus generation in gadgets.py."""

import random

import pytest

from games import Outcome
from gadgets import (
    CLUB_LETTER,
    DOLLAR_LETTER,
    HEART_LETTER,
    CorpusKind,
    GadgetError,
    ManifestEntry,
    SocnGame,
    SocnOutcome,
    UnaryAfa,
    afa_accept_lengths,
    afa_empty,
    afa_to_ocn,
    doca_inclusion_label,
    doca_inclusion_to_oca,
    generate_corpus,
    inclusion_counterexample,
    random_afa,
    random_doca,
    random_ocn,
    random_socn_game,
    socn_solve_bounded,
    socn_to_ocn,
    write_corpus,
)
from hd import is_history_deterministic, letter_game_refuter, replay_witness
from netfile import emit_net, load_net, parse_net
from nets import HEART, NetKind, Transition, accepts


def _afa(or_states, and_states, edges, initial, finals):
    return UnaryAfa(
        frozenset(or_states), frozenset(and_states), frozenset(edges), initial, frozenset(finals)
    )


def _naive_accepts(afa, q, n):
    if n == 0:
        return q in afa.finals
    succ = afa.successors(q)
    if q in afa.or_states:
        return any(_naive_accepts(afa, s, n - 1) for s in succ)
    return all(_naive_accepts(afa, s, n - 1) for s in succ)


@pytest.fixture
def chain_afa():
    """q0 (or) -> q1 (and) -> q2 (or, final): accepts exactly length 2."""
    return _afa({"q0", "q2"}, {"q1"}, {("q0", "q1"), ("q1", "q2")}, "q0", {"q2"})


@pytest.fixture
def one_step_game(net_text):
    """The or-player moves straight to the final and-state at counter 0."""
    net = net_text("alphabet t", "state q0 init", "state q1 final", "trans q0 t 0 q1", kind="socn")
    return SocnGame(net, frozenset({"q0"}))


@pytest.fixture
def doca_pair(net_text):
    """A accepts a*, B accepts only the empty word."""
    a = net_text(
        "alphabet a",
        "state d0 init final",
        "trans d0 zero a 0 d0",
        "trans d0 nonzero a 0 d0",
        kind="oca",
    )
    b = net_text(
        "alphabet a",
        "state d0 init final",
        "state d1",
        "trans d0 zero a 0 d1",
        "trans d0 nonzero a 0 d1",
        "trans d1 zero a 0 d1",
        "trans d1 nonzero a 0 d1",
        kind="oca",
    )
    return a, b


# ---------------------------------------------------------------------------
# Alternating automata
# ---------------------------------------------------------------------------


class TestUnaryAfa:
    def test_must_alternate(self):
        with pytest.raises(GadgetError, match="alternate"):
            _afa({"p", "q"}, set(), {("p", "q")}, "p", set())

    def test_partition(self):
        with pytest.raises(GadgetError, match="both"):
            _afa({"p"}, {"p"}, set(), "p", set())

    def test_undeclared_initial(self):
        with pytest.raises(GadgetError, match="initial"):
            _afa({"p"}, set(), set(), "x", set())

    def test_accept_lengths(self, chain_afa):
        assert afa_accept_lengths(chain_afa, 6) == {2}
        assert not afa_empty(chain_afa)

    def test_empty_without_finals(self, chain_afa):
        empty = _afa(chain_afa.or_states, chain_afa.and_states, chain_afa.transitions, "q0", set())
        assert afa_accept_lengths(empty, 6) == set()
        assert afa_empty(empty)

    def test_universal_state_without_successors_accepts(self):
        afa = _afa({"q0"}, {"q1"}, {("q0", "q1")}, "q0", set())
        assert afa_accept_lengths(afa, 3) == {2, 3}

    def test_initial_final(self):
        afa = _afa({"q0"}, {"q1"}, {("q0", "q1")}, "q0", {"q0"})
        assert 0 in afa_accept_lengths(afa, 2)

    @pytest.mark.parametrize("seed", range(25))
    def test_emptiness_matches_run_trees(self, seed):
        afa = random_afa(random.Random(seed), 3)
        horizon = 2 ** len(afa.states) + 1
        nonempty = any(_naive_accepts(afa, afa.initial, n) for n in range(horizon))
        assert afa_empty(afa) is not nonempty


class TestAfaToOcn:
    def test_structure(self, chain_afa):
        net = afa_to_ocn(chain_afa)
        assert net.kind is NetKind.OCN
        assert net.finals == frozenset(net.states)
        assert {DOLLAR_LETTER, HEART_LETTER, CLUB_LETTER, "1", "a", "a_q1"} == set(net.alphabet)
        ts = set(net.transitions)
        assert Transition("qI", "1", 1, "qI") in ts
        assert Transition("qI", "$", 0, "q0") in ts
        assert Transition("q0", "a_q1", -1, "q1") in ts
        assert Transition("q2", "a_q1", -1, "qwin1") in ts
        assert Transition("q1", "a", -1, "q2") in ts
        assert Transition("q2", "$", -1, "qwin2") in ts
        assert Transition("q0", "$", 0, "qwin2") in ts

    def test_transcript_of_accepting_run(self, chain_afa):
        net = afa_to_ocn(chain_afa)
        word = ("1", "1", "$", "a_q1", "a", "$", "heart")
        assert accepts(net, word)

    def test_round_trips_through_text(self, chain_afa):
        net = afa_to_ocn(chain_afa)
        assert parse_net(emit_net(net)) == net

    def test_nonempty_afa_gives_refutable_net(self):
        afa = _afa({"q0"}, {"q1"}, {("q0", "q1")}, "q0", {"q1"})
        net = afa_to_ocn(afa)
        witness = letter_game_refuter(net, 8, 6)
        assert witness is not None
        assert replay_witness(net, witness)

    def test_empty_deterministic_afa_gives_hd_net(self):
        # one successor per universal state and no finals: the net is deterministic
        afa = _afa({"q0"}, {"q1"}, {("q0", "q1"), ("q1", "q0")}, "q0", set())
        net = afa_to_ocn(afa)
        assert afa_empty(afa)
        assert is_history_deterministic(net, [4, 8]).outcome is Outcome.EVE_WINS


# ---------------------------------------------------------------------------
# Succinct reachability games
# ---------------------------------------------------------------------------


class TestSocnGame:
    def test_unary_alphabet(self, net_text):
        net = net_text("alphabet t u", "state q0 init", kind="socn")
        with pytest.raises(GadgetError, match="unary"):
            SocnGame(net, frozenset({"q0"}))

    def test_must_alternate(self, net_text):
        net = net_text("alphabet t", "state q0 init", "state q1", "trans q0 t 2 q1", kind="socn")
        with pytest.raises(GadgetError, match="alternate"):
            SocnGame(net, frozenset({"q0", "q1"}))

    def test_and_states(self, one_step_game):
        assert one_step_game.and_states == frozenset({"q1"})


class TestSocnSolveBounded:
    def test_or_wins_in_one_move(self, one_step_game):
        assert socn_solve_bounded(one_step_game, 4, 4) is SocnOutcome.OR_WINS

    def test_initial_final(self, net_text):
        net = net_text("alphabet t", "state q0 init final", kind="socn")
        assert socn_solve_bounded(SocnGame(net, frozenset({"q0"})), 4, 0) is SocnOutcome.OR_WINS

    def test_unreachable_final(self, net_text):
        net = net_text(
            "alphabet t", "state q0 init", "state q1", "state q2 final", "trans q0 t 1 q1",
            kind="socn",
        )
        game = SocnGame(net, frozenset({"q0", "q2"}))
        assert socn_solve_bounded(game, 4, 10) is SocnOutcome.AND_WINS

    def test_and_player_escapes_below_zero(self, net_text):
        net = net_text(
            "alphabet t",
            "state q0 init",
            "state q1",
            "state q2 final",
            "trans q0 t 0 q1",
            "trans q1 t 0 q2",
            "trans q1 t -1 q2",
            kind="socn",
        )
        game = SocnGame(net, frozenset({"q0", "q2"}))
        assert socn_solve_bounded(game, 4, 10) is SocnOutcome.AND_WINS

    def test_needs_counter_to_reach_zero(self, net_text):
        net = net_text(
            "alphabet t",
            "state q0 init",
            "state q1",
            "state q2 final",
            "trans q0 t 3 q1",
            "trans q1 t -3 q2",
            kind="socn",
        )
        game = SocnGame(net, frozenset({"q0", "q2"}))
        assert socn_solve_bounded(game, 4, 4) is SocnOutcome.OR_WINS

    def test_cap_cut_gives_unknown(self, net_text):
        net = net_text(
            "alphabet t",
            "state q0 init",
            "state q1",
            "state q2 final",
            "trans q0 t 9 q1",
            "trans q1 t -9 q2",
            kind="socn",
        )
        game = SocnGame(net, frozenset({"q0", "q2"}))
        assert socn_solve_bounded(game, 4, 4) is SocnOutcome.UNKNOWN

    def test_bounds(self, one_step_game):
        with pytest.raises(ValueError):
            socn_solve_bounded(one_step_game, 0, 4)


class TestSocnToOcn:
    def test_structure(self, one_step_game):
        net = socn_to_ocn(one_step_game)
        assert net.kind is NetKind.SOCN
        assert net.finals == frozenset(net.states)
        assert "a_0" in net.alphabet
        assert Transition("q0", "a_0", 0, "q1") in net.transitions
        assert Transition("q0!win", "a_0", 0, "q1!win") in net.transitions

    def test_win_copy_is_deterministic(self):
        game = random_socn_game(random.Random(3), 4)
        net = socn_to_ocn(game)
        win = [q for q in net.states if q.endswith(("!win", "!twin"))]
        for q in win:
            for letter in net.alphabet:
                assert len(net.moves(q, letter)) <= 1

    def test_or_win_gives_refutable_net(self, one_step_game):
        net = socn_to_ocn(one_step_game)
        witness = letter_game_refuter(net, 8, 4)
        assert witness is not None
        assert witness.letter == "a_0"
        assert replay_witness(net, witness)


# ---------------------------------------------------------------------------
# DOCA inclusion
# ---------------------------------------------------------------------------


class TestDocaInclusion:
    def test_counterexample(self, doca_pair):
        a, b = doca_pair
        assert inclusion_counterexample(a, b) == ("a",)
        assert inclusion_counterexample(b, a) is None

    def test_labels(self, doca_pair):
        a, b = doca_pair
        assert doca_inclusion_label(a, b) == "not-inclusion"
        assert doca_inclusion_label(b, a) == "inclusion"
        assert doca_inclusion_label(a, a) == "inclusion"

    def test_gadget_structure(self, doca_pair):
        a, b = doca_pair
        net = doca_inclusion_to_oca(a, b)
        assert net.kind is NetKind.OCA
        assert net.initial == "__q0"
        assert [t.target for t in net.moves("__q0", HEART)] == ["a:d0", "b:d0"]

    def test_gadget_refuted_when_not_included(self, doca_pair):
        net = doca_inclusion_to_oca(*doca_pair)
        witness = letter_game_refuter(net, 8, 4)
        assert witness is not None
        assert witness.letter == HEART
        assert replay_witness(net, witness)

    def test_requires_determinism(self, net_text, doca_pair):
        nondet = net_text(
            "alphabet a",
            "state d0 init final",
            "trans d0 zero a 0 d0",
            "trans d0 zero a +1 d0",
            kind="oca",
        )
        with pytest.raises(GadgetError, match="deterministic"):
            doca_inclusion_to_oca(nondet, doca_pair[1])

    def test_requires_zero_tests(self, counting_net, doca_pair):
        with pytest.raises(GadgetError):
            doca_inclusion_to_oca(counting_net, doca_pair[1])


# ---------------------------------------------------------------------------
# Random instances and corpora
# ---------------------------------------------------------------------------


class TestRandomInstances:
    @pytest.mark.parametrize("seed", range(5))
    def test_random_afa_shape(self, seed):
        afa = random_afa(random.Random(seed), 4)
        assert afa.initial not in afa.finals
        assert all(afa.successors(q) for q in afa.and_states)

    def test_random_afa_needs_two_states(self):
        with pytest.raises(ValueError):
            random_afa(random.Random(0), 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_deterministic_ocn(self, seed):
        net = random_ocn(random.Random(seed), 4, deterministic=True)
        assert net.is_deterministic()
        assert net.finals

    @pytest.mark.parametrize("seed", range(5))
    def test_random_doca(self, seed):
        net = random_doca(random.Random(seed))
        assert net.kind is NetKind.OCA
        assert net.is_deterministic()

    def test_same_seed_same_instance(self):
        first = random_ocn(random.Random(11))
        second = random_ocn(random.Random(11))
        assert first == second


class TestCorpus:
    def test_afa_labels_follow_oracle(self):
        corpus = generate_corpus(CorpusKind.AFA, seed=1, count=4)
        assert len(corpus) == 4
        for net, label, oracle, bounds in corpus:
            assert label in ("hd", "not-hd")
            assert (oracle, bounds) == ("afa_empty", "exact")
            assert net.finals == frozenset(net.states)

    def test_deterministic_in_seed(self):
        first = [emit_net(n) for n, *_ in generate_corpus(CorpusKind.AFA, seed=5, count=3)]
        second = [emit_net(n) for n, *_ in generate_corpus(CorpusKind.AFA, seed=5, count=3)]
        assert first == second

    def test_socn_labels(self):
        for net, label, oracle, _ in generate_corpus(CorpusKind.SOCN, seed=2, count=3):
            assert label in ("hd", "not-hd")
            assert oracle == "socn_solve_bounded"
            assert net.kind is NetKind.SOCN

    def test_doca_labels(self):
        for net, label, _, bounds in generate_corpus(CorpusKind.DOCA, seed=4, count=3):
            assert label in ("inclusion", "not-inclusion")
            assert bounds == "len=8"
            assert net.kind is NetKind.OCA

    def test_write_corpus(self, tmp_path):
        entries = write_corpus(CorpusKind.AFA, 7, 2, tmp_path / "out")
        manifest = (tmp_path / "out" / "manifest.txt").read_text().splitlines()
        assert manifest == [e.render() for e in entries]
        assert [e.path for e in entries] == ["afa-7-000.net", "afa-7-001.net"]
        for e in entries:
            load_net(tmp_path / "out" / e.path)

    def test_doca_corpus_needs_reserved_letters(self, tmp_path):
        entries = write_corpus(CorpusKind.DOCA, 3, 1, tmp_path)
        net = load_net(tmp_path / entries[0].path, allow_reserved=True)
        assert HEART in net.alphabet

    def test_manifest_entry_render(self):
        entry = ManifestEntry("x.net", "hd", "afa_empty", "exact")
        assert entry.render() == "x.net hd afa_empty exact"
