"""Counter-based SplitMix64 stream shared by the numba and numpy kernels.

Draw ``i`` of a stream seeded with ``seed`` is::

    z = seed + (i + 1) * 0x9E3779B97F4A7C15          (mod 2**64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)
    u = (z >> 11) * 2**-53                           in [0, 1)

Being counter-based, any draw can be computed without replaying the stream,
which is what lets the vectorised fallback and the compiled loop agree bit
for bit.
"""
from __future__ import annotations

import numpy as np

from ._accel import njit

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
INV_2_53 = 1.0 / 9007199254740992.0


def as_seed(seed: int) -> int:
    """Reduce an arbitrary Python int to an unsigned 64-bit seed."""
    return int(seed) & MASK64


def mix64(x: int) -> int:
    """Scalar SplitMix64 finaliser on Python ints (used for seed derivation)."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Independent child seed for sub-stream ``index``."""
    return mix64(as_seed(seed) ^ mix64((index + 1) * GOLDEN))


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Draws ``start .. start+count-1`` of the stream as float64."""
    counters = np.arange(count, dtype=np.uint64) + np.uint64(start + 1)
    with np.errstate(over="ignore"):
        z = np.uint64(as_seed(seed)) + counters * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * INV_2_53


@njit(cache=True, nogil=True)
def uniform_at(seed, counter):
    z = seed + (counter + np.uint64(1)) * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z = z ^ (z >> np.uint64(31))
    return np.float64(z >> np.uint64(11)) * INV_2_53
