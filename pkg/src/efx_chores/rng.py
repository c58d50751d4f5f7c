"""PCG32 (XSH-RR output, 64-bit LCG state), written out from the reference
algorithm so that seeded instance generation is identical on every platform
and Python version."""
from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

T = TypeVar("T")

_MASK64 = (1 << 64) - 1
_MULT = 6364136223846793005


class Pcg32:
    def __init__(self, seed: int, stream: int = 0):
        self.state = 0
        self.inc = ((stream << 1) | 1) & _MASK64
        self.next_u32()
        self.state = (self.state + (seed & _MASK64)) & _MASK64
        self.next_u32()

    def next_u32(self) -> int:
        old = self.state
        self.state = (old * _MULT + self.inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` without modulo bias."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound > 1 << 32:
            # compose from 32-bit pieces and reject the biased tail
            bits = bound.bit_length()
            while True:
                r = 0
                for _ in range((bits + 31) // 32):
                    r = (r << 32) | self.next_u32()
                r >>= (-bits) % 32
                if r < bound:
                    return r
        threshold = ((1 << 32) - bound) % bound
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % bound

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.below(len(seq))]

    def shuffle(self, seq: MutableSequence) -> None:
        for k in range(len(seq) - 1, 0, -1):
            j = self.below(k + 1)
            seq[k], seq[j] = seq[j], seq[k]

    def sample(self, population: Sequence[T], k: int) -> list[T]:
        pool = list(population)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for idx in range(k):
            j = idx + self.below(len(pool) - idx)
            pool[idx], pool[j] = pool[j], pool[idx]
        return pool[:k]
