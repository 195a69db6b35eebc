"""Portable seeded generator shared by the bootstrap band and the Normal dataset.

The generator is xorshift64* seeded through one splitmix64 step, written out
here so that any implementation can reproduce the same stream bit for bit::

    seeding:   z = (seed + 0x9E3779B97F4A7C15) mod 2**64
               z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
               z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
               state = z ^ (z >> 31)          (0 is replaced by 0x9E3779B97F4A7C15)

    next_u64:  x = state
               x ^= x >> 12
               x ^= (x << 25) mod 2**64
               x ^= x >> 27
               state = x
               return x * 0x2545F4914F6CDD1D mod 2**64

    random():      (next_u64 >> 11) * 2**-53                 in [0, 1)
    randbelow(n):  (next_u64 * n) >> 64                      in [0, n)
    normal pair:   u1 = ((next_u64 >> 11) + 1) * 2**-53      in (0, 1]
                   u2 = (next_u64 >> 11) * 2**-53
                   r = sqrt(-2 ln u1)
                   (r cos(2 pi u2), r sin(2 pi u2))

Negative seeds are reduced modulo 2**64 first.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_TWO_M53 = 2.0**-53


def splitmix64(seed: int) -> int:
    z = (seed + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* stream; see the module docstring for the exact recurrence."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        state = splitmix64(int(seed) & MASK64)
        self.state = state if state else _GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def random(self) -> float:
        return (self.next_u64() >> 11) * _TWO_M53

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next_u64() * n) >> 64

    def normal_pair(self) -> tuple[float, float]:
        u1 = ((self.next_u64() >> 11) + 1) * _TWO_M53
        u2 = (self.next_u64() >> 11) * _TWO_M53
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        return r * math.cos(theta), r * math.sin(theta)

    def normals(self, count: int) -> list[float]:
        out: list[float] = []
        while len(out) < count:
            out.extend(self.normal_pair())
        return out[:count]
