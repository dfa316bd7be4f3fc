"""Deterministic seeded randomness shared by response rendering and
animation selection.

A splitmix-style 64-bit mixer: the same (seed, draw index) pair yields the
same value on every platform and process, which is what reproducible tests
and trace replay need. Production callers derive seeds from the wall clock.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(seed: int) -> int:
    """Mix a 64-bit seed into a pseudo-random 64-bit value."""
    z = (seed + _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class SplitMix64:
    """Sequential generator: each next() advances the internal state by the
    golden gamma and mixes it."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def choice_index(self, n: int) -> int:
        if n <= 0:
            raise ValueError("cannot choose from an empty sequence")
        return self.next_uint64() % n
