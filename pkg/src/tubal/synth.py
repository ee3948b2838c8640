"""Synthetic data generation and degradation operators.

Every function here is a pure function of (inputs, seed): reruns are
bit-identical.  Randomness comes from :class:`tubal.rng.SplitMix64` with a
documented draw layout, so fixtures are portable across implementations.
"""

import numpy as np

from .errors import DimensionError
from .rng import SplitMix64
from .tensor import as_tensor, t_product


def synth_low_tubal_rank(n1, n2, n3, r, seed):
    """Tensor-product of (n1, r, n3) and (r, n2, n3) standard-normal factors.

    The result has tubal rank r almost surely; r = 0 gives the zero tensor.
    Draw layout: the left factor's entries first, then the right factor's,
    each filled in (i fastest, j, k) order.
    """
    if min(n1, n2, n3) < 1 or r < 0 or r > min(n1, n2):
        raise DimensionError(f"bad generator dims ({n1}, {n2}, {n3}) rank {r}")
    if r == 0:
        return np.zeros((n1, n2, n3))
    gen = SplitMix64(seed)
    p = gen.normal_tensor((n1, r, n3))
    q = gen.normal_tensor((r, n2, n3))
    return t_product(p, q)


def random_mask(dims, rate, seed):
    """Bernoulli(rate) observation mask as a float64 0/1 tensor."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0, 1], got {rate}")
    n1, n2, n3 = dims
    if min(n1, n2, n3) < 1:
        raise DimensionError(f"bad dims {dims}")
    u = SplitMix64(seed).uniform_tensor((n1, n2, n3))
    return (u < rate).astype(np.float64)


def add_salt_pepper(a, p_n, peak, seed):
    """Replace each entry with probability p_n by 0 or ``peak`` (fair coin).

    Draw layout: one uniform per entry for the corruption decision, then one
    per entry for the coin, both in (i fastest, j, k) order.
    """
    a = as_tensor(a)
    if not 0.0 <= p_n <= 1.0:
        raise ValueError(f"p_n must be in [0, 1], got {p_n}")
    gen = SplitMix64(seed)
    hit = gen.uniform_tensor(a.shape) < p_n
    coin = gen.uniform_tensor(a.shape) < 0.5
    return np.where(hit, np.where(coin, 0.0, float(peak)), a)


def add_uniform_noise(a, p_n, seed):
    """Add Uniform[0, 0.1*max|a|) noise to each entry with probability p_n.

    Draw layout as in :func:`add_salt_pepper` (decisions first, then values).
    """
    a = as_tensor(a)
    if not 0.0 <= p_n <= 1.0:
        raise ValueError(f"p_n must be in [0, 1], got {p_n}")
    gen = SplitMix64(seed)
    hit = gen.uniform_tensor(a.shape) < p_n
    level = 0.1 * float(np.max(np.abs(a)))
    noise = gen.uniform_tensor(a.shape) * level
    return a + np.where(hit, noise, 0.0)
