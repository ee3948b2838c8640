"""Portable deterministic random number generation.

All stochastic operations in this package draw from the SplitMix64 generator
(Steele, Lea & Flood's 64-bit mixer).  The algorithm identity is part of the
external contract: fixtures generated from a seed here can be regenerated
bit-for-bit by any implementation of the same scheme.

Stream layout: the i-th raw 64-bit word (i = 1, 2, ...) is

    mix64(seed + i * 0x9E3779B97F4A7C15)   (mod 2**64)

with the standard SplitMix64 finalizer ``mix64``.  Derived draws:

* uniform in [0, 1):  (word >> 11) * 2**-53
* uniform in (0, 1]:  ((word >> 11) + 1) * 2**-53
* standard normals:   Box-Muller pairs from consecutive (u1, u2) with
  u1 in (0, 1], u2 in [0, 1); an odd request discards the trailing sine term.

Each ``SplitMix64`` instance advances a single counter, so the mapping from
(seed, call sequence) to values is fully deterministic.
"""

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TWO53 = float(2**53)


def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based SplitMix64 stream over a 64-bit seed."""

    def __init__(self, seed):
        if seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._count = 0

    def raw(self, n):
        """Next ``n`` raw 64-bit words as a uint64 array."""
        idx = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        with np.errstate(over="ignore"):
            return _mix64(self._seed + idx * _GOLDEN)

    def uniforms(self, n):
        """``n`` doubles uniform in [0, 1)."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) / _TWO53

    def normals(self, n):
        """``n`` standard normal doubles via Box-Muller."""
        m = (n + 1) // 2
        u1 = ((self.raw(m) >> np.uint64(11)).astype(np.float64) + 1.0) / _TWO53
        u2 = (self.raw(m) >> np.uint64(11)).astype(np.float64) / _TWO53
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        out = np.empty(2 * m)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:n]

    def normal_tensor(self, shape):
        """Tensor of standard normals filled in (i fastest, j, k) order."""
        return self.normals(int(np.prod(shape))).reshape(shape, order="F")

    def uniform_tensor(self, shape):
        """Tensor of uniforms in [0, 1) filled in (i fastest, j, k) order."""
        return self.uniforms(int(np.prod(shape))).reshape(shape, order="F")
