"""Contracts and the 36-action bid ordering.

Action index 0 is PASS; indices 1..35 walk the bid ladder
1C, 1D, 1H, 1S, 1NT, 2C, ..., 7NT.  Strains are ordered clubs < diamonds <
hearts < spades < notrump, matching that ladder.
"""

from __future__ import annotations

from enum import IntEnum

from . import cards


class Strain(IntEnum):
    CLUBS = 0
    DIAMONDS = 1
    HEARTS = 2
    SPADES = 3
    NOTRUMP = 4

    @property
    def trump_suit(self) -> int | None:
        """Card-suit index of the trump suit; None for notrump."""
        if self is Strain.NOTRUMP:
            return None
        return _STRAIN_TO_SUIT[self.value]

    @property
    def symbol(self) -> str:
        return ("♣", "♦", "♥", "♠", "NT")[self.value]


# Bid-ladder strain order C,D,H,S maps onto card-suit indices S,H,D,C reversed.
_STRAIN_TO_SUIT = (cards.CLUBS, cards.DIAMONDS, cards.HEARTS, cards.SPADES)

NUM_ACTIONS = 36
PASS = 0
STRAIN_NAMES = ("C", "D", "H", "S", "NT")


def contract_index(level: int, strain: Strain | int) -> int:
    """Index into the 36-action ladder of a level-1..7 contract."""
    if not 1 <= level <= 7:
        raise ValueError(f"bad level {level}")
    return 1 + 5 * (level - 1) + int(strain)


def contract_level(index: int) -> int:
    if not 1 <= index <= 35:
        raise ValueError(f"index {index} is not a contract")
    return (index - 1) // 5 + 1


def contract_strain(index: int) -> Strain:
    if not 1 <= index <= 35:
        raise ValueError(f"index {index} is not a contract")
    return Strain((index - 1) % 5)


def contract_name(index: int) -> str:
    if index == PASS:
        return "PASS"
    return f"{contract_level(index)}{STRAIN_NAMES[contract_strain(index)]}"


def parse_contract(text: str) -> int:
    """Parse "PASS", "P", "1C", "3NT", "7nt" etc. into an action index."""
    t = text.strip().upper()
    if t in ("PASS", "P"):
        return PASS
    if len(t) >= 2 and t[0].isdigit():
        level = int(t[0])
        rest = t[1:]
        names = {"C": 0, "D": 1, "H": 2, "S": 3, "NT": 4, "N": 4}
        if 1 <= level <= 7 and rest in names:
            return contract_index(level, names[rest])
    raise ValueError(f"bad contract {text!r}")
