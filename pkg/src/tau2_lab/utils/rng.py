###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Version-pinned pseudo-random generator, identical on every platform."""
from __future__ import annotations

__all__ = (
    'Lcg',
)

import math

import numpy as np

from ..constants import *

_MASK_64: int = (1 << 64) - 1


class Lcg:
    """64-bit linear congruential generator.

    ``state <- state * LCG_MULTIPLIER + LCG_INCREMENT (mod 2**64)``; each draw takes the top
    53 bits of the new state, so the stream of doubles is bit-for-bit reproducible.
    """

    __slots__ = ('state',)

    def __init__(self, seed: int) -> None:
        """Seed the generator. The seed is reduced modulo 2**64.

        :raises ValueError: If seed is negative.
        """
        if seed < 0:
            raise ValueError(f'seed must be unsigned, got {seed}')
        self.state: int = seed & _MASK_64

    def __repr__(self) -> str:
        return f'<{type(self).__name__} state={self.state:#018x}>'

    def next_u64(self) -> int:
        """Advance and return the raw 64-bit state."""
        self.state = (self.state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK_64
        return self.state

    def random(self) -> float:
        """Return a double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, low: float, high: float) -> float:
        """Return a double in [low, high)."""
        return low + (high - low) * self.random()

    def coupling(self) -> complex:
        """Return a coupling with modulus in [0.5, 1.5) and phase in [0, 2pi)."""
        modulus = self.uniform(0.5, 1.5)
        phase = self.uniform(0.0, 2.0 * math.pi)
        return complex(modulus * math.cos(phase), modulus * math.sin(phase))

    def couplings(self, count: int) -> np.ndarray:
        """Return ``count`` consecutive couplings as a complex array."""
        return np.array([self.coupling() for _ in range(count)], dtype=complex)

    def complex_vector(self, dim: int) -> np.ndarray:
        """Return a vector with real and imaginary parts uniform in [-1, 1)."""
        values = [complex(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)) for _ in range(dim)]
        return np.array(values, dtype=complex)

    def randrange(self, stop: int) -> int:
        """Return an integer in [0, stop)."""
        return min(int(self.random() * stop), stop - 1)
