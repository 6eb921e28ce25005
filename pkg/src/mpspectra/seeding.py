"""Per-trial random streams.

Every trial draws from its own Philox-4x64 counter-based generator.  The
128-bit Philox key is a pure function of ``(master, trial)``::

    k0  = splitmix64(master)
    k1  = splitmix64(k0 ^ splitmix64(trial ^ 0x9E3779B97F4A7C15))
    key = (k1 << 64) | k0

so trials can be generated in any order, on any worker, and still reproduce.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """SplitMix64 output function applied to one 64-bit word."""
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class Seed:
    master: int
    trial: int = 0

    def __post_init__(self):
        for name in ("master", "trial"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
            if not 0 <= value <= MASK64:
                raise ValueError(f"{name} must fit in an unsigned 64-bit word, got {value}")
            object.__setattr__(self, name, int(value))

    def key(self) -> int:
        k0 = splitmix64(self.master)
        k1 = splitmix64(k0 ^ splitmix64(self.trial ^ GOLDEN))
        return (k1 << 64) | k0

    def stream(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key()))

    def for_trial(self, trial: int) -> Seed:
        return Seed(self.master, trial)
