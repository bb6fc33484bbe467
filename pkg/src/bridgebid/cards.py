"""Cards, hands, and deals.

A card is an index 0..51 in the fixed order spades 2..A, hearts 2..A,
diamonds 2..A, clubs 2..A (rank ascending inside each 13-card suit block).
A hand is a plain int used as a 52-bit set over those indices, so the
solver, the encoder, and the scoring code all share one representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import SplitMix64

# Suit indices follow the card-index block order (not the bidding order).
SPADES, HEARTS, DIAMONDS, CLUBS = 0, 1, 2, 3
SUIT_SYMBOLS = "♠♥♦♣"  # spade, heart, diamond, club
SUIT_LETTERS = "SHDC"

# Ranks are ints 2..14 with T=10, J=11, Q=12, K=13, A=14.
RANK_CHARS = "23456789TJQKA"
JACK, QUEEN, KING, ACE = 11, 12, 13, 14

NUM_CARDS = 52
HAND_SIZE = 13
FULL_DECK = (1 << NUM_CARDS) - 1

# Seats, clockwise.  North-South is the bidding pair.
SEAT_N, SEAT_E, SEAT_S, SEAT_W = 0, 1, 2, 3
SEAT_NAMES = "NESW"

HCP_POINTS = {ACE: 4, KING: 3, QUEEN: 2, JACK: 1}


def card_index(suit: int, rank: int) -> int:
    """Index of a card in the fixed deck order; suit 0..3, rank 2..14."""
    if not 0 <= suit <= 3:
        raise ValueError(f"bad suit {suit}")
    if not 2 <= rank <= 14:
        raise ValueError(f"bad rank {rank}")
    return suit * 13 + (rank - 2)


def card_suit(index: int) -> int:
    return index // 13


def card_rank(index: int) -> int:
    return index % 13 + 2


def card_name(index: int, ascii_suits: bool = False) -> str:
    suits = SUIT_LETTERS if ascii_suits else SUIT_SYMBOLS
    return suits[card_suit(index)] + RANK_CHARS[index % 13]


def hand_from_cards(cards) -> int:
    hand = 0
    for c in cards:
        bit = 1 << c
        if hand & bit:
            raise ValueError(f"duplicate card {card_name(c)}")
        hand |= bit
    return hand


def hand_cards(hand: int) -> list[int]:
    """Card indices of a hand, ascending."""
    out = []
    while hand:
        low = hand & -hand
        out.append(low.bit_length() - 1)
        hand ^= low
    return out


def hand_size(hand: int) -> int:
    return hand.bit_count()


# hcp() sits in tight loops (SAYC checks over many hands); use fixed masks.
_HCP_MASKS = [
    (pts, sum(1 << (s * 13 + rank - 2) for s in range(4)))
    for rank, pts in HCP_POINTS.items()
]


def hcp(hand: int) -> int:
    """High card points: A=4, K=3, Q=2, J=1 summed over the hand."""
    return sum(pts * (hand & mask).bit_count() for pts, mask in _HCP_MASKS)


def suit_lengths(hand: int) -> tuple[int, int, int, int]:
    """Card counts per suit, in the order (spades, hearts, diamonds, clubs)."""
    return (
        (hand & 0x1FFF).bit_count(),
        ((hand >> 13) & 0x1FFF).bit_count(),
        ((hand >> 26) & 0x1FFF).bit_count(),
        ((hand >> 39) & 0x1FFF).bit_count(),
    )


def is_balanced(hand: int) -> bool:
    """No void or singleton and at most one doubleton."""
    lengths = suit_lengths(hand)
    return min(lengths) >= 2 and sum(1 for n in lengths if n == 2) <= 1


def encode_hand(hand: int) -> np.ndarray:
    """52-dim 0/1 vector; position j is set iff the hand contains card j."""
    out = np.zeros(NUM_CARDS, dtype=np.float64)
    for c in hand_cards(hand):
        out[c] = 1.0
    return out


def decode_hand(vector: np.ndarray) -> int:
    if len(vector) != NUM_CARDS:
        raise ValueError("expected a 52-dim vector")
    return hand_from_cards(i for i, v in enumerate(vector) if v)


@dataclass(frozen=True)
class Deal:
    """Four 13-card hands partitioning the deck."""

    north: int
    east: int
    south: int
    west: int

    @property
    def hands(self) -> tuple[int, int, int, int]:
        return (self.north, self.east, self.south, self.west)

    def validate(self) -> None:
        hands = self.hands
        union = 0
        total = 0
        for h in hands:
            union |= h
            total += h.bit_count()
        if total != NUM_CARDS or union != FULL_DECK:
            raise ValueError("hands must be disjoint and cover the deck")


def deal_random(seed: int) -> Deal:
    """Uniform random deal, fully determined by ``seed``.

    Fisher-Yates shuffle of the 52 card indices driven by SplitMix64, then
    the shuffled deck is split into four consecutive 13-card blocks for
    North, East, South, West.
    """
    order = list(range(NUM_CARDS))
    SplitMix64(seed).shuffle(order)
    hands = [0, 0, 0, 0]
    for pos, card in enumerate(order):
        hands[pos // 13] |= 1 << card
    return Deal(*hands)


def deal_remainder(seed: int, used: int, n_seats: int = 2) -> list[int]:
    """Deal the cards not in ``used`` evenly into ``n_seats`` hands (seeded)."""
    rest = hand_cards(FULL_DECK & ~used)
    if len(rest) % n_seats:
        raise ValueError("remaining cards do not split evenly")
    SplitMix64(seed).shuffle(rest)
    per = len(rest) // n_seats
    return [hand_from_cards(rest[i * per : (i + 1) * per]) for i in range(n_seats)]


# ---------------------------------------------------------------------------
# Text notation (PBN-style): one hand is four dot-separated suit groups,
# spades first, ranks in any order, e.g. "AKQ32.T98.Q54.76".  A 13-card
# spade suit is "AKQJT98765432...".  A deal is the four hands labelled
# "N:... E:... S:... W:...".
# ---------------------------------------------------------------------------


def hand_to_pbn(hand: int) -> str:
    groups = []
    for s in range(4):
        ranks = [RANK_CHARS[i % 13] for i in hand_cards(hand) if i // 13 == s]
        groups.append("".join(reversed(ranks)))  # descending rank
    return ".".join(groups)


def hand_from_pbn(text: str) -> int:
    groups = text.strip().split(".")
    if len(groups) != 4:
        raise ValueError(f"hand {text!r} must have 4 dot-separated suits")
    cards = []
    for suit, group in enumerate(groups):
        for ch in group.strip():
            if ch == "-":
                continue
            rank = RANK_CHARS.find(ch.upper())
            if rank < 0:
                raise ValueError(f"bad rank character {ch!r} in {text!r}")
            cards.append(suit * 13 + rank)
    return hand_from_cards(cards)


def deal_to_pbn(deal: Deal) -> str:
    return " ".join(
        f"{SEAT_NAMES[i]}:{hand_to_pbn(h)}" for i, h in enumerate(deal.hands)
    )


def deal_from_pbn(text: str) -> Deal:
    """Parse "N:<hand> E:<hand> S:<hand> W:<hand>" (labels in any order)."""
    hands: dict[str, int] = {}
    for token in text.strip().split():
        if len(token) < 2 or token[1] != ":" or token[0].upper() not in SEAT_NAMES:
            raise ValueError(f"bad deal token {token!r}")
        hands[token[0].upper()] = hand_from_pbn(token[2:])
    if sorted(hands) != sorted(SEAT_NAMES):
        raise ValueError("deal must name all four seats exactly once")
    deal = Deal(hands["N"], hands["E"], hands["S"], hands["W"])
    sizes = {h.bit_count() for h in deal.hands}
    union = deal.north | deal.east | deal.south | deal.west
    if len(sizes) != 1:
        raise ValueError("hands must have equal sizes")
    if sum(h.bit_count() for h in deal.hands) != union.bit_count():
        raise ValueError("hands overlap")
    return deal
