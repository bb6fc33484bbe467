"""Cards, hands, and seeded dealing.

Hands are plain ints used as 52-bit sets, ordered spade deuce (bit 0)
through club ace (bit 51).  Dealing is a Fisher-Yates shuffle driven by
SplitMix64, so a 64-bit seed pins the whole deal.
"""

from bridgebid.cards import (card_index, card_name, deal_random, deal_to_pbn,
                             encode_hand, hand_cards, hcp, suit_lengths)

deal = deal_random(seed=2024)
print("A deal, PBN style:")
print(" ", deal_to_pbn(deal))
print()

for seat, hand in zip("NESW", deal.hands):
    lengths = "-".join(str(n) for n in suit_lengths(hand))
    print(f"  {seat}: {hcp(hand):2d} HCP, shape {lengths}")
print()

print("Same seed, same deal:", deal_random(2024).hands == deal.hands)
print("Total HCP in the deck:", sum(hcp(h) for h in deal.hands))
print()

print("Card indexing follows the fixed deck order:")
for suit, rank in [(0, 2), (0, 14), (1, 14), (3, 14)]:
    idx = card_index(suit, rank)
    print(f"  {card_name(idx)} -> index {idx}")
print()

vec = encode_hand(deal.north)
print(f"North as a 52-dim vector: {int(vec.sum())} ones at positions "
      f"{[c for c in hand_cards(deal.north)][:5]}...")
