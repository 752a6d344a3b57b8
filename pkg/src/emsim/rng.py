"""Seedable deterministic random stream.

The generator is splitmix64 with the published constants below. It was
chosen over library generators because the trace format promises a
byte-identical stream for a given seed on any platform and any runtime
version, and records the algorithm name in the trace header. It is the
only source of randomness anywhere in the simulator; the sole consumer
inside the core is the winner draw on ties.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

ALGORITHM = "splitmix64"


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def getstate(self) -> int:
        return self._state

    def setstate(self, state: int) -> None:
        self._state = state & _MASK64

    def clone(self) -> "SplitMix64":
        g = SplitMix64(0)
        g._state = self._state
        return g

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection sampling."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        # reject draws from the incomplete final bucket of 2**64 % n values
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        v = self.next_u64()
        while v >= limit:
            v = self.next_u64()
        return v % n

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
