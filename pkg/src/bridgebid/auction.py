"""Bidding states, legality, transitions, and network input encoding.

The auction is the two-player no-competition game: Player 1 (North's
cards) acts in odd rounds, Player 2 (South's) in even rounds, opponents
always pass.  An action is an index into the 36-action ladder; PASS or
repeating the current highest bid ends the auction, as does reaching the
round horizon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cards import encode_hand
from .contracts import NUM_ACTIONS, PASS


class IllegalBid(ValueError):
    pass


@dataclass(frozen=True)
class BidState:
    """What the player to act can see: own hand, joint history, round."""

    hand: int          # 52-bit mask of the acting player's cards
    history: int       # 36-bit mask of bids made so far (PASS bit never set)
    round: int         # 1-based

    @property
    def highest(self) -> int | None:
        return highest_bid(self.history)


def highest_bid(history: int) -> int | None:
    """Largest set index of the history mask, or None if no bid yet."""
    return history.bit_length() - 1 if history else None


def legal_actions(history: int, round: int = 1) -> list[int]:
    """Legal action indices: everything in round 1, else PASS, a repeat of
    the highest bid (both terminate), or any strictly higher bid."""
    if not history:
        return list(range(NUM_ACTIONS))
    top = history.bit_length() - 1
    return [PASS] + list(range(top, NUM_ACTIONS))


def encode_state(state: BidState) -> np.ndarray:
    """Round 1: the 52-dim hand; later rounds: hand plus 36-dim history."""
    hand_vec = encode_hand(state.hand)
    if state.round == 1:
        return hand_vec
    hist_vec = np.zeros(NUM_ACTIONS, dtype=np.float64)
    h = state.history
    while h:
        low = h & -h
        hist_vec[low.bit_length() - 1] = 1.0
        h ^= low
    return np.concatenate([hand_vec, hist_vec])


def state_width(round: int) -> int:
    return 52 if round == 1 else 88


class Auction:
    """Mutable auction driver over a fixed pair of hands.

    ``horizon`` is the total number of bidding rounds (the model depth);
    a bid made in the final round ends the auction with that bid.
    """

    def __init__(self, x1: int, x2: int, horizon: int):
        if x1 & x2:
            raise ValueError("x1 and x2 overlap")
        if not 1 <= horizon:
            raise ValueError("horizon must be positive")
        self.x1 = x1
        self.x2 = x2
        self.horizon = horizon
        self.round = 1
        self.history = 0
        self.done = False
        self.final_contract: int | None = None
        self.actions_taken: list[int] = []

    @property
    def hand_to_act(self) -> int:
        return self.x1 if self.round % 2 == 1 else self.x2

    @property
    def state(self) -> BidState:
        return BidState(self.hand_to_act, self.history, self.round)

    def legal_actions(self) -> list[int]:
        return legal_actions(self.history, self.round)

    def step(self, action: int) -> None:
        """Apply one action; terminal states set done and final_contract."""
        if self.done:
            raise IllegalBid("auction already over")
        top = highest_bid(self.history)
        if action == PASS:
            self.final_contract = top if top is not None else PASS
            self.done = True
        elif top is not None and action == top:
            self.final_contract = top
            self.done = True
        elif top is None or action > top:
            if not 1 <= action < NUM_ACTIONS:
                raise IllegalBid(f"action {action} out of range")
            self.history |= 1 << action
            if self.round >= self.horizon:
                self.final_contract = action
                self.done = True
            else:
                self.round += 1
        else:
            raise IllegalBid(
                f"bid {action} does not beat the current highest {top}")
        self.actions_taken.append(action)
