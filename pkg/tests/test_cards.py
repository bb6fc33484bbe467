import numpy as np
import pytest
from hypothesis import given, strategies as st

from bridgebid.cards import (FULL_DECK, HAND_SIZE, NUM_CARDS, card_index,
                             card_rank, card_suit, deal_from_pbn,
                             deal_random, deal_remainder, deal_to_pbn,
                             decode_hand, encode_hand, hand_cards,
                             hand_from_cards, hand_from_pbn, hand_to_pbn,
                             hcp, is_balanced, suit_lengths)
from conftest import SPADES_ALL


class TestCardIndex:
    def test_paper_ordering_endpoints(self):
        assert card_index(0, 2) == 0      # spade deuce first
        assert card_index(3, 14) == 51    # club ace last
        assert card_index(1, 14) == 25    # heart ace ends the second block

    @given(st.integers(0, 3), st.integers(2, 14))
    def test_bijection(self, suit, rank):
        idx = card_index(suit, rank)
        assert 0 <= idx < NUM_CARDS
        assert card_suit(idx) == suit
        assert card_rank(idx) == rank

    def test_all_52_distinct(self):
        indices = {card_index(s, r) for s in range(4) for r in range(2, 15)}
        assert indices == set(range(52))

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            card_index(4, 2)
        with pytest.raises(ValueError):
            card_index(0, 15)


class TestDealRandom:
    def test_partition(self):
        deal = deal_random(123)
        union = 0
        for hand in deal.hands:
            assert hand.bit_count() == HAND_SIZE
            assert union & hand == 0
            union |= hand
        assert union == FULL_DECK

    def test_deterministic(self):
        assert deal_random(9).hands == deal_random(9).hands
        assert deal_random(9).hands != deal_random(10).hands

    def test_hcp_total_is_40(self):
        for seed in range(50):
            assert sum(hcp(h) for h in deal_random(seed).hands) == 40

    def test_many_deals_partition(self):
        for seed in range(300):
            deal = deal_random(seed)
            assert (deal.north | deal.east | deal.south | deal.west) == FULL_DECK

    def test_remainder_dealing(self):
        deal = deal_random(5)
        used = deal.north | deal.south
        east, west = deal_remainder(77, used, 2)
        assert east.bit_count() == west.bit_count() == 13
        assert east & west == 0
        assert (east | west) == FULL_DECK & ~used
        assert deal_remainder(77, used, 2) == [east, west]


class TestHandFeatures:
    def test_hcp_picture_cards(self):
        hand = hand_from_cards([card_index(0, r) for r in (14, 13, 12, 11)]
                               + [card_index(1, r) for r in range(2, 11)])
        assert hcp(hand) == 10

    def test_hcp_spot_cards_zero(self):
        hand = hand_from_cards([card_index(s, r)
                                for s in range(2) for r in range(2, 9)][:13])
        assert hcp(hand) == 0

    def test_hcp_full_deck(self):
        assert hcp(FULL_DECK) == 40

    def test_hcp_matches_bruteforce(self):
        points = {11: 1, 12: 2, 13: 3, 14: 4}
        for seed in range(30):
            hand = deal_random(seed).north
            expect = sum(points.get(card_rank(c), 0) for c in hand_cards(hand))
            assert hcp(hand) == expect

    def test_suit_lengths(self):
        assert suit_lengths(SPADES_ALL) == (13, 0, 0, 0)
        hand = hand_from_pbn("AKQ32.54.T98.762")
        assert suit_lengths(hand) == (5, 2, 3, 3)
        for seed in range(30):
            assert sum(suit_lengths(deal_random(seed).north)) == 13

    def test_balanced(self):
        assert is_balanced(hand_from_pbn("AKQ2.543.T98.762"))   # 4-3-3-3
        assert is_balanced(hand_from_pbn("AKQ32.54.T98.762"))   # 5-2-3-3
        assert not is_balanced(hand_from_pbn("AKQ32.5.T984.762"))  # singleton
        assert not is_balanced(hand_from_pbn("AKQ32.54.T9.7632"))  # two doubletons


class TestEncoding:
    def test_positions(self):
        deal = deal_random(3)
        vec = encode_hand(deal.north)
        assert vec.shape == (52,)
        assert vec.sum() == 13
        assert all(vec[c] == 1.0 for c in hand_cards(deal.north))

    def test_round_trip(self):
        for seed in range(20):
            hand = deal_random(seed).west
            assert decode_hand(encode_hand(hand)) == hand

    def test_deuce_of_spades_position_zero(self):
        vec = encode_hand(hand_from_cards([0] + list(range(40, 52))))
        assert vec[0] == 1.0


class TestPbnNotation:
    def test_thirteen_spades(self):
        assert hand_to_pbn(SPADES_ALL) == "AKQJT98765432..."
        assert hand_from_pbn("AKQJT98765432...") == SPADES_ALL

    def test_round_trip(self):
        for seed in range(25):
            deal = deal_random(seed)
            assert deal_from_pbn(deal_to_pbn(deal)).hands == deal.hands

    def test_rejects_overlap(self):
        text = "N:AKQJT98765432... E:AKQJT98765432... " \
               "S:.AKQJT98765432.. W:..AKQJT98765432."
        with pytest.raises(ValueError):
            deal_from_pbn(text)

    def test_rejects_bad_rank(self):
        with pytest.raises(ValueError):
            hand_from_pbn("AKX2.543.T98.762")
