"""SplitMix64: the fixed pseudo-random generator behind every seeded routine.

State transition: ``s <- s + 0x9E3779B97F4A7C15 (mod 2**64)``; output is the
standard SplitMix64 finaliser of the new state.  Everything else (bounded
integers, Bernoulli trials with rational probability, shuffles) is derived
from ``next_u64`` in documented ways so sequences are reproducible on any
platform.
"""

from __future__ import annotations

from fractions import Fraction
from typing import MutableSequence, Sequence, TypeVar

T = TypeVar("T")

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection of the biased tail."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound

    def bernoulli(self, p: Fraction) -> bool:
        """True with probability exactly p (up to 2**-64 granularity): r*den < num*2**64."""
        p = Fraction(p)
        return self.next_u64() * p.denominator < p.numerator << 64

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        pool = list(items)
        self.shuffle(pool)
        return pool[:k]
