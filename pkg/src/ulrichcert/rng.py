"""Deterministic random numbers: SplitMix64 with named substreams.

Every pipeline stage draws from its own substream, derived from the run seed
and the stage name (and attempt number), so changing one stage never shifts
the random draws of another.
"""

import hashlib

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def _mix(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & MASK

    def next_u64(self):
        self.state = (self.state + GAMMA) & MASK
        return _mix(self.state)

    def below(self, n):
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randrange(self, a, b=None):
        if b is None:
            a, b = 0, a
        return a + self.below(b - a)

    def elements(self, p, k):
        """k uniform elements of F_p (0 included)."""
        return [self.below(p) for _ in range(k)]

    def substream(self, *labels):
        return SplitMix64(substream_seed(self.state, *labels))


def substream_seed(seed, *labels):
    h = hashlib.blake2b(digest_size=8)
    h.update(int(seed & MASK).to_bytes(8, "little"))
    for lab in labels:
        h.update(b"\x00" + str(lab).encode())
    return _mix(int.from_bytes(h.digest(), "little"))


def stream(seed, *labels):
    """Generator for (seed, labels); the same inputs always give the same stream."""
    return SplitMix64(substream_seed(seed, *labels))
