"""Seeded random instances.

The generator is Python's ``random.Random`` (Mersenne Twister, MT19937)
seeded with the integer seed alone, so a parameter set always yields the same
file on every platform.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, Interval

__all__ = ["GenParams", "generate"]


@dataclass(frozen=True)
class GenParams:
    n: int
    seed: int = 0
    coord_range: int = 100
    max_len: int = 10
    terminal_fraction: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "terminal_fraction", Fraction(self.terminal_fraction))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.max_len < 1:
            raise ValueError("max_len must be at least 1")
        if self.coord_range < 1:
            raise ValueError("coord_range must be at least 1")
        if not 0 < self.terminal_fraction <= 1:
            raise ValueError("terminal fraction must lie in (0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def generate(p: GenParams) -> Instance:
    """Left endpoints uniform in ``[0, coord_range)``, lengths uniform in ``[1, max_len]``."""
    rng = random.Random(p.seed)
    raw = []
    for _ in range(p.n):
        l = rng.randrange(p.coord_range)
        raw.append((l, l + rng.randint(1, p.max_len)))
    raw.sort(key=lambda lr: lr[1])
    intervals = tuple(Interval(f"p{k + 1}", l, r) for k, (l, r) in enumerate(raw))
    m = math.ceil(p.terminal_fraction * p.n)
    picked = rng.sample(range(p.n), m)
    return Instance(intervals, frozenset(intervals[k].id for k in picked))
