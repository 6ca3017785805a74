"""Deterministic seeded randomness.

``SeededSource`` wraps :class:`random.Random` (Mersenne Twister, whose
integer draws are identical across platforms) and counts draws so a report
can state exactly how much randomness was consumed.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from typing import Sequence, TypeVar

T = TypeVar("T")

SEED_ENV = "HILBERT90_SEED"
DEFAULT_SEED = 0


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_SEED
    return int(raw) & (2 ** 64 - 1)


class SeededSource:
    __slots__ = ("seed", "counter", "_rng")

    def __init__(self, seed: int | None = None):
        if seed is None:
            seed = default_seed()
        self.seed = int(seed) & (2 ** 64 - 1)
        self.counter = 0
        self._rng = random.Random(self.seed)

    def randint(self, lo: int, hi: int) -> int:
        self.counter += 1
        return self._rng.randint(lo, hi)

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.randint(0, len(seq) - 1)]

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        pool = list(seq)
        out = []
        for _ in range(k):
            out.append(pool.pop(self.randint(0, len(pool) - 1)))
        return out

    def shuffle(self, seq: list[T]) -> list[T]:
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(0, i)
            seq[i], seq[j] = seq[j], seq[i]
        return seq

    def rational(self, num_bound: int = 997, den_bound: int = 97) -> Fraction:
        """Numerator in ``[-num_bound, num_bound]``, denominator in ``[1, den_bound]``."""
        n = self.randint(-num_bound, num_bound)
        d = self.randint(1, den_bound)
        return Fraction(n, d)

    def spawn(self, label: int) -> "SeededSource":
        """Independent child stream, reproducible from ``(seed, label)``."""
        return SeededSource((self.seed * 1_000_003 + label * 7919 + 12345) & (2 ** 64 - 1))

    def __repr__(self) -> str:
        return f"SeededSource(seed={self.seed}, counter={self.counter})"
