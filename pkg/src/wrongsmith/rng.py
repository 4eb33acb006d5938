"""Deterministic PRNG used everywhere randomness is needed.

xoshiro256** seeded through splitmix64, so a 64-bit seed expands to the full
256-bit state. Pure integer arithmetic: the same seed yields the same stream
on every platform, which keeps trained models and generated corpora
bit-reproducible.
"""

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(state):
    """One splitmix64 step; returns (output, next_state)."""
    state = (state + _GOLDEN) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31), state


def mix(*values):
    """Hash any number of integers into one 64-bit seed.

    Used to derive independent per-sentence / per-sample streams from a master
    seed so generation order does not depend on scheduling.
    """
    state = 0
    for v in values:
        state ^= int(v) & _MASK
        out, state = _splitmix64(state)
        state = out
    out, _ = _splitmix64(state)
    return out


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256:
    """xoshiro256** stream with convenience samplers."""

    def __init__(self, seed):
        state = int(seed) & _MASK
        s = []
        for _ in range(4):
            out, state = _splitmix64(state)
            s.append(out)
        self._s = s

    def next_u64(self):
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def uniform(self):
        """Double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_array(self, shape, low=-1.0, high=1.0):
        n = int(np.prod(shape))
        vals = [low + (high - low) * self.uniform() for _ in range(n)]
        return np.array(vals, dtype=np.float64).reshape(shape)

    def randrange(self, n):
        """Integer in [0, n) via multiply-shift (deterministic, bias < 2^-53)."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return (self.next_u64() * n) >> 64

    def shuffle(self, items):
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice_from_probs(self, probs):
        """Inverse-CDF sample over indices in ascending order."""
        r = self.uniform()
        acc = 0.0
        for i, p in enumerate(probs):
            acc += p
            if r < acc:
                return i
        return len(probs) - 1
