"""Deterministic, platform-independent randomness for dealing and dataset generation.

The generator is SplitMix64 (Steele, Lea & Flood 2014): state advances by the
64-bit golden-gamma constant and each output is the finalizer mix of the new
state.  It is trivially seedable from any 64-bit integer, has no platform- or
version-dependent behaviour, and supports O(1) random access to the n-th
output, which is what lets every dataset record be regenerated from its id
alone.  Training code uses numpy's PCG64 instead (speed matters there, and
only same-environment determinism is promised); everything that lands in a
dataset file flows through this module.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective avalanche mix of a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


def stream_seed(master_seed: int, index: int) -> int:
    """n-th output of the SplitMix64 stream seeded with ``master_seed``.

    Used to derive independent per-record seeds: record i gets
    ``stream_seed(master_seed, i)`` without generating records 0..i-1.
    """
    return mix64((master_seed + (index + 1) * GOLDEN_GAMMA) & MASK64)


class SplitMix64:
    """Seedable 64-bit generator; uniform integers via rejection sampling."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n).  Rejection sampling, so exactly uniform."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle; provably uniform over permutations."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
