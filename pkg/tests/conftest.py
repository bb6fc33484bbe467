"""Shared fixtures: constructed deals, synthetic records, reduced deals."""

from __future__ import annotations

import numpy as np
import pytest

from bridgebid.cards import Deal, deal_random
from bridgebid.dataset import DealRecord
from bridgebid.rng import SplitMix64

SPADES_ALL = sum(1 << c for c in range(0, 13))
HEARTS_ALL = sum(1 << c for c in range(13, 26))
DIAMONDS_ALL = sum(1 << c for c in range(26, 39))
CLUBS_ALL = sum(1 << c for c in range(39, 52))


@pytest.fixture
def spades_hearts_deal() -> Deal:
    """North all spades, South all hearts, East/West the minors."""
    return Deal(SPADES_ALL, DIAMONDS_ALL, HEARTS_ALL, CLUBS_ALL)


def reduced_deal(seed: int, size: int) -> Deal:
    """Random deal of ``size`` cards per seat from the full deck."""
    rng = SplitMix64(seed)
    cards = list(range(52))
    rng.shuffle(cards)
    return Deal(*[sum(1 << c for c in cards[k * size:(k + 1) * size])
                  for k in range(4)])


def synthetic_records(n: int, seed: int = 0) -> list[DealRecord]:
    """Records with real deals but fabricated cost vectors.

    The costs satisfy every CostVector invariant (ints in 0..24 with a zero
    minimum) without paying for double-dummy analysis; fine for exercising
    auction/training/evaluation mechanics.
    """
    out = []
    for i in range(n):
        deal = deal_random(seed * 1_000_003 + i)
        rng = SplitMix64(seed + i)
        raw = np.array([rng.randbelow(25) for _ in range(36)], dtype=np.int64)
        raw[rng.randbelow(36)] = 0
        out.append(DealRecord(i, deal.north, deal.south, raw, seed + i))
    return out
