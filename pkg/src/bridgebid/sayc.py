"""Rule-based opening bids (Standard American style), used when training
variants that force the first call instead of learning it.

Precedence: strong 2C, then the balanced notrump ranges, then five-card
majors, then the better minor, then (optionally) weak two-bids, else PASS.
"""

from __future__ import annotations

from .cards import hcp, is_balanced, suit_lengths
from .contracts import PASS, Strain, contract_index

_SUIT_STRAIN = {0: Strain.SPADES, 1: Strain.HEARTS,
                2: Strain.DIAMONDS, 3: Strain.CLUBS}


def sayc_opening(hand: int, weak_twos: bool = True) -> int:
    """Opening action for a 13-card hand; first matching rule wins.

    With ``weak_twos`` off (the no-competition variant) weak hands pass
    instead of preempting.
    """
    points = hcp(hand)
    spades, hearts, diamonds, clubs = suit_lengths(hand)
    balanced = is_balanced(hand)

    if points >= 22:
        return contract_index(2, Strain.CLUBS)
    if 20 <= points <= 21 and balanced:
        return contract_index(2, Strain.NOTRUMP)
    if 15 <= points <= 17 and balanced:
        return contract_index(1, Strain.NOTRUMP)
    if points >= 12:
        if spades >= 5 or hearts >= 5:
            if spades >= hearts:
                return contract_index(1, Strain.SPADES)
            return contract_index(1, Strain.HEARTS)
        # better minor: longer first, clubs on 3-3, diamonds on 4-4
        if diamonds > clubs or (diamonds == clubs and diamonds >= 4):
            return contract_index(1, Strain.DIAMONDS)
        return contract_index(1, Strain.CLUBS)
    if weak_twos and 5 <= points <= 11:
        # weak two in a 6+ suit (never clubs); longest first, highest on tie
        best_suit = None
        best_len = 5
        for suit, length in ((0, spades), (1, hearts), (2, diamonds)):
            if length >= 6 and length > best_len:
                best_suit, best_len = suit, length
        if best_suit is not None:
            return contract_index(2, _SUIT_STRAIN[best_suit])
    return PASS
