import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bridgebid.auction import (Auction, BidState, IllegalBid, encode_state,
                               highest_bid, legal_actions, state_width)
from bridgebid.cards import deal_random
from bridgebid.contracts import NUM_ACTIONS, PASS, contract_index, Strain


def fresh_auction(horizon=4, seed=0):
    deal = deal_random(seed)
    return Auction(deal.north, deal.south, horizon)


class TestLegalActions:
    def test_round_one_everything(self):
        assert legal_actions(0, 1) == list(range(36))

    def test_above_one_heart(self):
        hist = 1 << 3  # 1H
        assert legal_actions(hist, 2) == [0] + list(range(3, 36))

    def test_seven_notrump_top(self):
        hist = 1 << 35
        assert legal_actions(hist, 2) == [0, 35]


class TestStep:
    def test_pass_out(self):
        a = fresh_auction()
        a.step(PASS)
        assert a.done and a.final_contract == PASS

    def test_repeat_terminates(self):
        a = fresh_auction()
        a.step(1)        # 1C
        a.step(1)        # partner repeats -> contract 1C
        assert a.done and a.final_contract == 1

    def test_pass_after_bid(self):
        a = fresh_auction()
        a.step(16)       # 3NT
        a.step(PASS)
        assert a.done and a.final_contract == 16

    def test_horizon_truncation(self):
        a = fresh_auction(horizon=2)
        a.step(1)
        a.step(5)        # higher bid in the final round ends with that bid
        assert a.done and a.final_contract == 5

    def test_hand_alternates(self):
        a = fresh_auction()
        h1 = a.hand_to_act
        a.step(1)
        assert a.hand_to_act != h1
        a.step(2)
        assert a.hand_to_act == h1

    def test_rejects_lower_bid(self):
        a = fresh_auction()
        a.step(10)
        with pytest.raises(IllegalBid):
            a.step(4)

    def test_rejects_after_done(self):
        a = fresh_auction()
        a.step(PASS)
        with pytest.raises(IllegalBid):
            a.step(1)

    @given(st.integers(0, 500), st.integers(2, 5))
    @settings(max_examples=60, deadline=None)
    def test_random_legal_play_invariants(self, seed, horizon):
        from bridgebid.rng import SplitMix64
        rng = SplitMix64(seed)
        a = fresh_auction(horizon=horizon, seed=seed)
        bids_made = []
        while not a.done:
            assert a.round <= horizon
            legal = a.legal_actions()
            assert legal and legal == sorted(set(legal))
            action = legal[rng.randbelow(len(legal))]
            if action != PASS and (not bids_made or action > max(bids_made)):
                bids_made.append(action)
            a.step(action)
        assert a.final_contract is not None
        if bids_made:
            assert a.final_contract == max(bids_made)
        else:
            assert a.final_contract == PASS
        # history bits are exactly the strictly increasing bids made
        assert a.history == sum(1 << b for b in bids_made)


class TestEncodeState:
    def test_round_one_width(self):
        deal = deal_random(1)
        state = BidState(deal.north, 0, 1)
        enc = encode_state(state)
        assert enc.shape == (52,)
        assert enc.sum() == 13
        assert state_width(1) == 52

    def test_later_round_width_and_history(self):
        deal = deal_random(1)
        hist = (1 << 1) | (1 << 3)  # 1C then 1H
        enc = encode_state(BidState(deal.north, hist, 3))
        assert enc.shape == (88,)
        assert state_width(3) == 88
        assert enc[52 + 1] == 1.0 and enc[52 + 3] == 1.0
        assert enc[52:].sum() == 2  # one bit per distinct bid

    def test_pass_bit_never_set(self):
        a = fresh_auction()
        a.step(1)
        enc = encode_state(a.state)
        assert enc[52 + PASS] == 0.0

    def test_highest(self):
        assert highest_bid(0) is None
        assert highest_bid((1 << 5) | (1 << 9)) == 9
