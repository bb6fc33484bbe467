"""Duplicate scoring, IMP conversion, and per-deal cost vectors.

All scoring is non-vulnerable and undoubled: doubles are outside the action
set and vulnerability is never modelled.  The constants below are the
standard duplicate-bridge tables; unit tests pin them against published
values.
"""

from __future__ import annotations

from bisect import bisect_right

import numpy as np

from . import dds
from .cards import Deal, deal_remainder
from .contracts import NUM_ACTIONS, Strain, contract_level, contract_strain
from .rng import stream_seed

# Trick score per odd trick (beyond six) for each strain; notrump's first
# odd trick is worth 40 and the rest 30.
TRICK_VALUE = {
    Strain.CLUBS: 20,
    Strain.DIAMONDS: 20,
    Strain.HEARTS: 30,
    Strain.SPADES: 30,
    Strain.NOTRUMP: 30,
}
NOTRUMP_FIRST_TRICK = 40

PARTSCORE_BONUS = 50
GAME_BONUS = 300          # non-vulnerable
SMALL_SLAM_BONUS = 500    # non-vulnerable
GRAND_SLAM_BONUS = 1000   # non-vulnerable
UNDERTRICK_PENALTY = 50   # non-vulnerable, undoubled

# WBF International Match Point scale: score difference d maps to the
# number of thresholds <= d.  Band k covers [IMP_THRESHOLDS[k-1],
# IMP_THRESHOLDS[k] - 10]; 24 IMPs from 4000 up.
IMP_THRESHOLDS = (
    20, 50, 90, 130, 170, 220, 270, 320, 370, 430, 500, 600, 750, 900,
    1100, 1300, 1500, 1750, 2000, 2250, 2500, 3000, 3500, 4000,
)

# Training target for rule-breaking bids; above every legal normalized cost.
ILLEGAL_COST = 1.2
COST_SCALE = 25.0


def trick_score(level: int, strain: Strain) -> int:
    """Contract (below-the-line) points for bidding and making ``level``."""
    if strain is Strain.NOTRUMP:
        return NOTRUMP_FIRST_TRICK + TRICK_VALUE[strain] * (level - 1)
    return TRICK_VALUE[strain] * level


def contract_score(level: int, strain: Strain | int, tricks: int) -> int:
    """Non-vulnerable undoubled duplicate score from the declarer's side."""
    strain = Strain(strain)
    if not 1 <= level <= 7:
        raise ValueError(f"bad level {level}")
    if not 0 <= tricks <= 13:
        raise ValueError(f"bad trick count {tricks}")
    needed = level + 6
    if tricks < needed:
        return -UNDERTRICK_PENALTY * (needed - tricks)
    base = trick_score(level, strain)
    bonus = GAME_BONUS if base >= 100 else PARTSCORE_BONUS
    if level == 6:
        bonus += SMALL_SLAM_BONUS
    elif level == 7:
        bonus += GRAND_SLAM_BONUS
    return base + bonus + TRICK_VALUE[strain] * (tricks - needed)


def imp(score_diff: float) -> int:
    """IMPs for a non-negative score difference, saturating at 24."""
    if score_diff < 0:
        raise ValueError("score difference must be non-negative")
    return bisect_right(IMP_THRESHOLDS, score_diff)


def normalize(raw: np.ndarray) -> np.ndarray:
    """Map raw IMP costs to [0, 0.96]: subtract the minimum, divide by 25."""
    raw = np.asarray(raw)
    return (raw - raw.min()) / COST_SCALE


def illegal_cost() -> float:
    """Training cost assigned to rule-breaking bids."""
    return ILLEGAL_COST


def _round_half_away(x: float) -> int:
    return int(np.floor(x + 0.5)) if x >= 0 else -int(np.floor(-x + 0.5))


def contract_scores_from_tricks(tricks_by_strain) -> np.ndarray:
    """Scores of the 35 real contracts (index 1..35) given the five
    best-declarer trick counts; PASS (index 0) scores zero."""
    out = np.zeros(NUM_ACTIONS, dtype=np.float64)
    for j in range(1, NUM_ACTIONS):
        level = contract_level(j)
        strain = contract_strain(j)
        out[j] = contract_score(level, strain, tricks_by_strain[strain])
    return out


def cost_vector(x1: int, x2: int, seed: int, n_samples: int = 5) -> np.ndarray:
    """Raw IMP cost of every final contract for the pair holding x1, x2.

    The 26 unseen cards are dealt to East-West ``n_samples`` times (seeded);
    each sample is solved double-dummy with the better of North/South as
    declarer per strain.  Scores are averaged across samples per contract
    first, then each contract's cost is the IMP value of its gap to the
    best average score.
    """
    if x1 & x2:
        raise ValueError("x1 and x2 overlap")
    if x1.bit_count() != 13 or x2.bit_count() != 13:
        raise ValueError("x1 and x2 must hold 13 cards each")
    totals = np.zeros(NUM_ACTIONS, dtype=np.float64)
    hints: list[int] | None = None
    for k in range(n_samples):
        east, west = deal_remainder(stream_seed(seed, k), x1 | x2, 2)
        deal = Deal(x1, east, x2, west)
        tricks = dds.solve_all(deal, hints=hints)
        hints = tricks
        totals += contract_scores_from_tricks(tricks)
    avg = totals / n_samples
    best = avg.max()
    return np.array(
        [imp(_round_half_away(best - avg[j])) for j in range(NUM_ACTIONS)],
        dtype=np.int64,
    )
