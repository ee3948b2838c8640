"""Independent brute-force oracles shared by the test modules.

Everything here deliberately avoids the library's code paths: the t-product
oracle builds the block-circulant matrix explicitly, the spectral oracles run
a plain full-spectrum SVD loop, and derivatives come from central finite
differences.
"""

import numpy as np


def bcirc(a):
    """Block-circulant matrix of a (n1, m, n3) tensor, (n1*n3) x (m*n3)."""
    n1, m, n3 = a.shape
    out = np.zeros((n1 * n3, m * n3))
    for r in range(n3):
        for c in range(n3):
            out[r * n1:(r + 1) * n1, c * m:(c + 1) * m] = a[:, :, (r - c) % n3]
    return out


def stack_slices(b):
    """Matrix [B1; B2; ...; Bn3] without using the library unfold."""
    return np.concatenate([b[:, :, k] for k in range(b.shape[2])], axis=0)


def tprod_oracle(a, b):
    """t-product via explicit block-circulant matrix multiplication."""
    n1, m, n3 = a.shape
    n2 = b.shape[1]
    prod = bcirc(a) @ stack_slices(b)
    out = np.empty((n1, n2, n3))
    for k in range(n3):
        out[:, :, k] = prod[k * n1:(k + 1) * n1, :]
    return out


def spectral_values_oracle(a):
    """Full-spectrum per-slice singular values, (min(n1,n2), n3)."""
    abar = np.fft.fft(a, axis=2)
    n3 = a.shape[2]
    out = np.empty((min(a.shape[0], a.shape[1]), n3))
    for k in range(n3):
        out[:, k] = np.linalg.svd(abar[:, :, k], compute_uv=False)
    return out


def tnn_oracle(a):
    """Mean over slices of the spectral singular value sums."""
    return float(spectral_values_oracle(a).sum() / a.shape[2])


def tsvt_constant_oracle(y, tau):
    """Soft-threshold every spectral singular value by tau, full spectrum."""
    ybar = np.fft.fft(y, axis=2)
    n1, n2, n3 = y.shape
    out = np.empty_like(ybar)
    for k in range(n3):
        u, s, vh = np.linalg.svd(ybar[:, :, k], full_matrices=False)
        out[:, :, k] = (u * np.maximum(s - tau, 0.0)) @ vh
    x = np.fft.ifft(out, axis=2)
    assert np.linalg.norm(x.imag) <= 1e-9 * max(np.linalg.norm(ybar), 1e-300)
    return x.real


def central_diff(f, t, h=1e-6):
    return (f(t + h) - f(t - h)) / (2.0 * h)


def random_dims(rng, lo=1, hi=6):
    return tuple(int(rng.integers(lo, hi + 1)) for _ in range(3))
