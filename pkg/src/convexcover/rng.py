"""xoshiro256** seeded through splitmix64.

The benchmark generators need bit-for-bit reproducible streams that other
implementations can match, so the algorithm is fixed here instead of
relying on the host language's default generator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import MutableSequence, Sequence, TypeVar

MASK = (1 << 64) - 1
T = TypeVar("T")


def splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK


class Rng:
    def __init__(self, seed: int):
        s = seed & MASK
        words = []
        for _ in range(4):
            s, z = splitmix64(s)
            words.append(z)
        self.s = words

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def bernoulli(self, p: Fraction) -> bool:
        """Exact Bernoulli trial for a rational probability."""
        p = Fraction(p)
        if p <= 0:
            return False
        if p >= 1:
            return True
        return self.below(p.denominator) < p.numerator

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.below(len(seq))]

    def shuffle(self, seq: MutableSequence) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def fork(self, stream: int) -> "Rng":
        """Independent sub-stream derived from this generator's next output."""
        return Rng(self.next_u64() ^ (stream * 0x9E3779B97F4A7C15 & MASK))


def derive_seed(seed: int, *labels: int) -> int:
    s = seed & MASK
    for label in labels:
        s, z = splitmix64(s ^ (label & MASK))
        s = z
    return s
