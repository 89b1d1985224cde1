"""Deterministic pseudo-random generator for campaigns.

SplitMix64: a 64-bit counter advanced by the golden-gamma constant and
finalized with two xor-shift multiplies. Chosen over the platform RNG so
that campaigns reproduce bit-for-bit across interpreter versions and
machines. Constants follow the widely used reference implementation.
"""

from __future__ import annotations

__all__ = ["SplitMix64", "derive_seed"]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi]; modulo bias is irrelevant at
        the ranges used here and keeps the draw sequence trivially
        portable."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        return lo + self.next_u64() % span

    def choice(self, seq):
        if not seq:
            raise ValueError("empty sequence")
        return seq[self.next_u64() % len(seq)]

    def sample_distinct(self, lo: int, hi: int, count: int) -> list[int]:
        """Draw ``count`` distinct integers from [lo, hi]."""
        if hi - lo + 1 < count:
            raise ValueError("range too small for distinct sample")
        drawn: set[int] = set()
        out: list[int] = []
        while len(out) < count:
            v = self.randint(lo, hi)
            if v not in drawn:
                drawn.add(v)
                out.append(v)
        return out


def derive_seed(seed: int, label: str) -> int:
    """Stable sub-stream seed from a master seed and a text label."""
    acc = seed & _MASK
    for ch in label.encode("utf-8"):
        acc = _mix((acc ^ ch) + _GAMMA & _MASK)
    return acc
