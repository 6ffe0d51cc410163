"""Tests for inclusion, equivalence and universality in langops.py."""

import itertools

import pytest

import langops
from games import CappedVerdict, Outcome
from langops import (
    NotHistoryDeterministic,
    augment_with_cat,
    hd_equivalence,
    hd_inclusion,
    inclusion_gadget,
    universal_acceptor,
    universality,
)
from nets import CAT, HEART, Net, NetError, NetKind, ReservedLetterError, Transition, accepts
from tests.conftest import SMALL_CAPS


@pytest.fixture
def only_a(net_text):
    """a* over the alphabet {a, b}."""
    return net_text("alphabet a b", "state s0 init final", "trans s0 a 0 s0")


@pytest.fixture
def all_words(net_text):
    """(a+b)*."""
    return net_text("alphabet a b", "state s0 init final", "trans s0 a 0 s0", "trans s0 b 0 s0")


# ---------------------------------------------------------------------------
# Gadget construction
# ---------------------------------------------------------------------------


class TestAugmentWithCat:
    def test_accepts_cat_and_old_words(self, deterministic_net):
        augmented = augment_with_cat(deterministic_net)
        assert accepts(augmented, (CAT,))
        for n in range(5):
            for word in itertools.product(("a", "b"), repeat=n):
                assert accepts(augmented, word) == accepts(deterministic_net, word)

    def test_cat_must_be_free(self):
        net = Net(NetKind.OCN, ("p",), ("a", CAT), "p", frozenset(), ())
        with pytest.raises(ReservedLetterError):
            augment_with_cat(net)


class TestInclusionGadget:
    def test_shape(self, only_a, all_words):
        gadget = inclusion_gadget(only_a, all_words)
        assert gadget.initial == "__q0"
        assert gadget.moves("__q0", HEART) == (
            Transition("__q0", HEART, 0, "a:s0"),
            Transition("__q0", HEART, 0, "b:s0"),
        )
        assert Transition("b:s0", CAT, 0, "b:__qcat") in gadget.transitions
        assert Transition("a:s0", "a", 0, "a:s0") in gadget.transitions
        assert set(gadget.alphabet) == {"a", "b", CAT, HEART}

    def test_language(self, only_a, all_words):
        gadget = inclusion_gadget(only_a, all_words)
        assert accepts(gadget, (HEART, "b", "a"))
        assert accepts(gadget, (HEART, CAT))
        assert not accepts(gadget, ("a",))

    def test_alphabets_must_match(self, counting_net, fork_net):
        with pytest.raises(NetError, match="same alphabet"):
            inclusion_gadget(counting_net, fork_net)

    def test_rejects_zero_tests(self, net_text):
        oca = net_text("alphabet a", "state p init final", "trans p zero a 0 p", kind="oca")
        with pytest.raises(NetError, match="zero tests"):
            inclusion_gadget(oca, oca)

    def test_succinct_inputs_give_succinct_gadget(self, succinct_net, deterministic_net):
        gadget = inclusion_gadget(succinct_net, deterministic_net)
        assert gadget.kind is NetKind.SOCN


# ---------------------------------------------------------------------------
# Decision procedures
# ---------------------------------------------------------------------------


class TestHdInclusion:
    def test_self_inclusion(self, counting_net):
        assert hd_inclusion(counting_net, counting_net, SMALL_CAPS).outcome is Outcome.EVE_WINS

    def test_included(self, only_a, all_words):
        assert hd_inclusion(only_a, all_words, SMALL_CAPS).outcome is Outcome.EVE_WINS

    def test_not_included(self, only_a, all_words):
        assert hd_inclusion(all_words, only_a, SMALL_CAPS).outcome is Outcome.ADAM_WINS

    def test_input_not_hd(self, fork_net):
        with pytest.raises(NotHistoryDeterministic) as exc:
            hd_inclusion(fork_net, fork_net, SMALL_CAPS)
        assert exc.value.which == "first net"
        assert exc.value.witness is not None
        assert exc.value.witness.letter == "$"

    def test_inconclusive_precheck(self, only_a, all_words, monkeypatch):
        monkeypatch.setattr(
            langops,
            "is_history_deterministic",
            lambda net, caps, deadline: CappedVerdict(Outcome.INCONCLUSIVE, 4),
        )
        verdict = hd_inclusion(only_a, all_words, SMALL_CAPS)
        assert verdict.outcome is Outcome.INCONCLUSIVE
        assert verdict.cap_used == 4


class TestHdEquivalence:
    def test_equivalent(self, counting_net):
        verdict = hd_equivalence(counting_net, counting_net, SMALL_CAPS)
        assert verdict.outcome is Outcome.EVE_WINS

    def test_not_equivalent(self, only_a, all_words):
        verdict = hd_equivalence(only_a, all_words, SMALL_CAPS)
        assert verdict.outcome is Outcome.ADAM_WINS


class TestUniversality:
    def test_acceptor(self):
        fa = universal_acceptor(("a", "b"))
        assert fa.finals == frozenset({"__u"})
        assert len(fa.transitions) == 2

    def test_universal(self, counting_net):
        assert universality(counting_net, SMALL_CAPS).outcome is Outcome.EVE_WINS

    def test_all_words(self, all_words):
        assert universality(all_words, SMALL_CAPS).outcome is Outcome.EVE_WINS

    def test_not_universal(self, deterministic_net, only_a):
        assert universality(deterministic_net, SMALL_CAPS).outcome is Outcome.ADAM_WINS
        assert universality(only_a, SMALL_CAPS).outcome is Outcome.ADAM_WINS
