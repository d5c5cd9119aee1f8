"""Seeded 64-bit generator used for random contraction ratios.

The generator is SplitMix64.  State advances by the 64-bit golden-ratio
increment and the output is finalized with two xor-multiply rounds:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    out = z ^ (z >> 31)

Uniform doubles take the top 53 bits: u = (out >> 11) * 2^-53.

Experiment cases each get an independent stream: the master stream seeded
with the config seed emits one 64-bit word per case index, and that word
seeds the per-case stream.  This makes case draws independent of execution
order, and the recipe above is enough to reproduce every sequence
bit-for-bit in any language with 64-bit integers.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit stream with SplitMix64 state transition."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0**-53
        return lo + (hi - lo) * u


def case_stream(master_seed: int, case_index: int) -> SplitMix64:
    """Per-case stream: word `case_index` of the master stream seeds it."""
    if case_index < 0:
        raise ValueError("case_index must be nonnegative")
    master = SplitMix64(master_seed)
    word = 0
    for _ in range(case_index + 1):
        word = master.next_u64()
    return SplitMix64(word)
