"""Tests for history-determinism games, refuters and resolvers in hd.py."""

from unittest.mock import patch

import pytest

from games import Outcome
from hd import (
    AdamWitness,
    Goodness,
    GoodSet,
    LetterGame,
    PlayStatus,
    ResolverError,
    g1_arena,
    g1_to_sim,
    g1_verdict,
    good_set,
    good_sets,
    good_transition_gadget,
    is_history_deterministic,
    letter_game_refuter,
    replay_witness,
    residual_counterexample,
    resolver_move,
    resolver_strategy,
)
from netfile import parse_transition
from nets import HASH, Config, Net, NetKind, ReservedLetterError, Transition, enabled
from semilinear import SemilinearSet
from tests.conftest import SMALL_CAPS


@pytest.fixture(scope="module")
def example_goods(example_hd_net):
    """Good sets of the two b-moves out of X, sampled up to 8."""
    down = parse_transition(example_hd_net, "X b -1 Y")
    right = parse_transition(example_hd_net, "X b -1 R")
    return {t: good_set(example_hd_net, t, 8, [16]) for t in (down, right)}


def _first_enabled(net):
    def choose(config, letter):
        options = [t for t in net.moves(config.state, letter) if enabled(t, config.counter)]
        return options[0] if options else None

    return choose


# ---------------------------------------------------------------------------
# Token game and its simulation form
# ---------------------------------------------------------------------------


class TestG1:
    def test_arena_targets(self, fork_net):
        arena = g1_arena(fork_net)
        # both tokens reach f together, so Adam can only win by leaving Eve stuck
        assert arena.targets == frozenset()
        assert ("round", "s0", "s0") in arena.controls

    def test_fork_is_lost(self, fork_net):
        assert g1_verdict(fork_net, SMALL_CAPS).outcome is Outcome.ADAM_WINS

    def test_counting_is_won(self, counting_net):
        assert g1_verdict(counting_net, SMALL_CAPS).outcome is Outcome.EVE_WINS

    def test_rejects_zero_tests(self, net_text):
        oca = net_text("alphabet a", "state p init final", "trans p zero a 0 p", kind="oca")
        with pytest.raises(ValueError):
            g1_arena(oca)

    def test_g1_to_sim_shape(self, counting_net):
        lag, dup = g1_to_sim(counting_net)
        assert HASH in lag.alphabet
        assert lag.alphabet == dup.alphabet
        assert dup.finals == frozenset({"__qhash"})
        assert lag.finals == frozenset({"s0/" + HASH})

    def test_hash_must_be_free(self):
        net = Net(NetKind.OCN, ("p",), ("a", HASH), "p", frozenset({"p"}), ())
        with pytest.raises(ReservedLetterError):
            g1_to_sim(net)


class TestIsHistoryDeterministic:
    def test_counting(self, counting_net):
        assert is_history_deterministic(counting_net, SMALL_CAPS).outcome is Outcome.EVE_WINS

    def test_deterministic(self, deterministic_net):
        verdict = is_history_deterministic(deterministic_net, SMALL_CAPS)
        assert verdict.outcome is Outcome.EVE_WINS

    def test_fork(self, fork_net):
        verdict = is_history_deterministic(fork_net, SMALL_CAPS)
        assert verdict.outcome is Outcome.ADAM_WINS
        assert verdict.cap_used == SMALL_CAPS[0]

    @pytest.mark.parametrize(
        "sample,expected",
        [
            ("counting", Outcome.EVE_WINS),
            ("deterministic", Outcome.EVE_WINS),
            ("succinct", Outcome.EVE_WINS),
            ("example_hd", Outcome.EVE_WINS),
            ("mod7_fork", Outcome.EVE_WINS),
            ("fork", Outcome.ADAM_WINS),
            ("mod7_suits", Outcome.ADAM_WINS),
            ("two_blocks", Outcome.ADAM_WINS),
        ],
    )
    def test_sample_verdicts(self, request, sample, expected):
        net = request.getfixturevalue(f"{sample}_net")
        assert is_history_deterministic(net).outcome is expected

    def test_agrees_with_token_game(self, fork_net, counting_net):
        for net in (fork_net, counting_net):
            assert (
                is_history_deterministic(net, SMALL_CAPS).outcome
                is g1_verdict(net, SMALL_CAPS).outcome
            )


# ---------------------------------------------------------------------------
# Letter game
# ---------------------------------------------------------------------------


class TestLetterGameRefuter:
    def test_fork_witness(self, fork_net):
        witness = letter_game_refuter(fork_net, 8, 3)
        assert witness.letter == "$"
        assert witness.depth == 2
        assert replay_witness(fork_net, witness)

    def test_fork_witness_branches(self, fork_net):
        witness = letter_game_refuter(fork_net, 8, 3)
        answers = {t.target: child.letter for t, child in witness.replies}
        assert answers == {"c": "heart", "h": "club"}

    def test_two_blocks_witness(self, two_blocks_net):
        witness = letter_game_refuter(two_blocks_net, 8, 6)
        assert witness.letter == "$"
        assert witness.depth == 3
        assert replay_witness(two_blocks_net, witness)

    def test_mod7_suits_witness(self, mod7_suits_net):
        witness = letter_game_refuter(mod7_suits_net, 8, 12)
        assert witness is not None
        assert replay_witness(mod7_suits_net, witness)

    def test_two_blocks_witness_at_health_check_depth(self, two_blocks_net):
        witness = letter_game_refuter(two_blocks_net, 8, 12)
        assert witness is not None
        assert replay_witness(two_blocks_net, witness)

    def test_depth_too_small(self, fork_net):
        assert letter_game_refuter(fork_net, 8, 1) is None

    def test_no_witness_for_deterministic_net(self, deterministic_net):
        assert letter_game_refuter(deterministic_net, 4, 5) is None

    def test_bounds_checked(self, fork_net):
        with pytest.raises(ValueError):
            letter_game_refuter(fork_net, 0, 3)

    def test_tampered_witness_fails_replay(self, fork_net):
        witness = letter_game_refuter(fork_net, 8, 3)
        tampered = AdamWitness(witness.letter, witness.replies[:1])
        assert not replay_witness(fork_net, tampered)

    def test_to_dict(self, fork_net):
        data = letter_game_refuter(fork_net, 8, 3).to_dict()
        assert data["letter"] == "$"
        assert data["replies"][0] == {
            "transition": "s0 $ 0 c",
            "then": {"letter": "heart", "replies": []},
        }


class TestLetterGame:
    def test_eve_stuck(self, fork_net):
        game = LetterGame(fork_net, _first_enabled(fork_net))
        first = game.play("$")
        assert first.status is PlayStatus.ONGOING
        assert first.config == Config("c", 0)
        assert game.play("heart").status is PlayStatus.EVE_STUCK
        assert game.word == ["$", "heart"]

    def test_eve_rejects(self, net_text):
        net = net_text(
            "alphabet a", "state s0 init", "state e", "state f final",
            "trans s0 a 0 e", "trans s0 a 0 f",
        )
        game = LetterGame(net, _first_enabled(net))
        step = game.play("a")
        assert step.transition == Transition("s0", "a", 0, "e")
        assert step.status is PlayStatus.EVE_REJECTS

    def test_dead_word(self, deterministic_net):
        game = LetterGame(deterministic_net, _first_enabled(deterministic_net))
        assert game.play("b").status is PlayStatus.DEAD_WORD

    def test_finished_game_ignores_letters(self, deterministic_net):
        game = LetterGame(deterministic_net, _first_enabled(deterministic_net))
        game.play("b")
        step = game.play("a")
        assert step.status is PlayStatus.DEAD_WORD
        assert game.word == ["b"]

    def test_unknown_letter(self, counting_net):
        game = LetterGame(counting_net, _first_enabled(counting_net))
        with pytest.raises(ValueError):
            game.play("z")


# ---------------------------------------------------------------------------
# Good transitions and resolvers
# ---------------------------------------------------------------------------


class TestGoodSets:
    def test_gadget_start_states(self, example_hd_net):
        down = parse_transition(example_hd_net, "X b -1 Y")
        lag, dup, (s, s_dup) = good_transition_gadget(example_hd_net, down)
        assert lag.initial == s
        assert dup.initial == s_dup
        assert dup.moves(s_dup, "b") == (Transition(s_dup, "b", -1, "Y"),)

    def test_gadget_rejects_foreign_transition(self, example_hd_net):
        with pytest.raises(ValueError):
            good_transition_gadget(example_hd_net, Transition("X", "b", 0, "E"))

    def test_down_is_good_above_one(self, example_hd_net, example_goods):
        down = parse_transition(example_hd_net, "X b -1 Y")
        g = example_goods[down]
        assert not g.inconclusive
        assert [x is Goodness.GOOD for x in g.samples] == [k > 1 for k in range(9)]
        assert g.semilinear == SemilinearSet(2, 1, frozenset(), frozenset({0}))

    def test_right_is_good_only_at_one(self, example_hd_net, example_goods):
        right = parse_transition(example_hd_net, "X b -1 R")
        g = example_goods[right]
        assert [x is Goodness.GOOD for x in g.samples] == [k == 1 for k in range(9)]
        assert g.semilinear == SemilinearSet(2, 1, frozenset({1}), frozenset())

    def test_is_good_beyond_samples(self, example_hd_net, example_goods):
        down = parse_transition(example_hd_net, "X b -1 Y")
        assert example_goods[down].is_good(1000) is Goodness.GOOD

    def test_fork_moves_never_good(self, fork_net):
        t = parse_transition(fork_net, "s0 $ 0 c")
        g = good_set(fork_net, t, 8, [4])
        assert set(g.samples) == {Goodness.NOT_GOOD}
        assert g.is_good(50) is Goodness.NOT_GOOD

    def test_bound_too_small(self, fork_net):
        with pytest.raises(ValueError, match="at least 8"):
            good_set(fork_net, fork_net.transitions[0], 7)

    def test_unfit_sets_are_resampled_with_a_doubled_bound(self, counting_net):
        fit = SemilinearSet(0, 7, frozenset(), frozenset({0}))

        def sample(net, t, bound, caps=None, deadline=None, known=()):
            samples = (*known, *(Goodness.GOOD,) * (bound + 1 - len(known)))
            return GoodSet(t, samples, fit if bound >= 32 else None)

        with patch("hd.good_set", side_effect=sample) as mock_good_set:
            goods = good_sets(counting_net, 8, max_bound=64)
        bounds = [c.args[2] for c in mock_good_set.call_args_list]
        assert bounds == [8, 16, 32]
        assert len(mock_good_set.call_args_list[1].kwargs["known"]) == 9
        assert all(g.semilinear == fit for g in goods.values())

    def test_resampling_stops_at_max_bound(self, counting_net):
        def sample(net, t, bound, caps=None, deadline=None, known=()):
            return GoodSet(t, (Goodness.GOOD,) * (bound + 1))

        with patch("hd.good_set", side_effect=sample) as mock_good_set:
            goods = good_sets(counting_net, 8, max_bound=20)
        assert [c.args[2] for c in mock_good_set.call_args_list] == [8, 16, 20]
        assert all(g.semilinear is None for g in goods.values())

    def test_known_samples_are_kept(self, example_hd_net):
        down = parse_transition(example_hd_net, "X b -1 Y")
        known = (Goodness.INCONCLUSIVE,) * 3
        g = good_set(example_hd_net, down, 8, [16], known=known)
        assert g.samples[:3] == known
        assert g.samples[3:] == (Goodness.GOOD,) * 6

    def test_render(self, example_hd_net, example_goods):
        down = parse_transition(example_hd_net, "X b -1 Y")
        assert example_goods[down].render() == (
            "X b -1 Y: 001111111  I=2 P=1 base={} residues={0}"
        )

    def test_inconclusive_without_fit(self):
        t = Transition("p", "a", 0, "p")
        g = GoodSet(t, (Goodness.GOOD, Goodness.INCONCLUSIVE))
        assert g.inconclusive == [1]
        assert g.is_good(5) is Goodness.INCONCLUSIVE


class TestResolver:
    def test_moves_down_above_one(self, example_hd_net, example_goods):
        down = parse_transition(example_hd_net, "X b -1 Y")
        for k in range(2, 9):
            assert resolver_move(example_hd_net, example_goods, Config("X", k), "b") == down

    def test_moves_right_at_one(self, example_hd_net, example_goods):
        right = parse_transition(example_hd_net, "X b -1 R")
        assert resolver_move(example_hd_net, example_goods, Config("X", 1), "b") == right

    def test_nothing_enabled(self, example_hd_net, example_goods):
        assert resolver_move(example_hd_net, example_goods, Config("X", 0), "b") is None

    def test_inconclusive_blocks(self, example_hd_net):
        down = parse_transition(example_hd_net, "X b -1 Y")
        right = parse_transition(example_hd_net, "X b -1 R")
        unknown = (Goodness.INCONCLUSIVE,) * 9
        goods = {down: GoodSet(down, unknown), right: GoodSet(right, unknown)}
        with pytest.raises(ResolverError, match="unknown"):
            resolver_move(example_hd_net, goods, Config("X", 3), "b")

    def test_unknown_earlier_move_is_not_skipped(self, example_hd_net):
        first, second = example_hd_net.moves("X", "b")
        goods = {
            first: GoodSet(first, (Goodness.INCONCLUSIVE,) * 9),
            second: GoodSet(second, (Goodness.GOOD,) * 9),
        }
        with pytest.raises(ResolverError, match=first.render()):
            resolver_move(example_hd_net, goods, Config("X", 3), "b")

    def test_strategy_falls_back_to_least_enabled(self, fork_net):
        goods = {t: GoodSet(t, (Goodness.NOT_GOOD,) * 9) for t in fork_net.transitions}
        choose = resolver_strategy(fork_net, goods)
        assert choose(Config("s0", 0), "$") == Transition("s0", "$", 0, "c")
        assert choose(Config("c", 0), "heart") is None


class TestResidualCounterexample:
    def test_down_loses_at_one(self, example_hd_net):
        down = parse_transition(example_hd_net, "X b -1 Y")
        assert residual_counterexample(example_hd_net, down, 1, 4) == ("b", "$")

    def test_right_keeps_residual_at_one(self, example_hd_net):
        right = parse_transition(example_hd_net, "X b -1 R")
        assert residual_counterexample(example_hd_net, right, 1, 4) is None

    def test_disabled(self, example_hd_net):
        down = parse_transition(example_hd_net, "X b -1 Y")
        with pytest.raises(ValueError, match="not enabled"):
            residual_counterexample(example_hd_net, down, 0, 4)
