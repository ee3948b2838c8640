"""Proximal building blocks: shrinkage operators and the mask projection.

The weighted variants solve the tangent-line subproblems exactly: with
weights phi'(|previous iterate|)/mu, elementwise shrinkage minimizes the
linearized sparsity bound plus (mu/2)||. - y||_F^2, and singular-value
shrinkage in the spectral domain minimizes the linearized rank bound plus
the same quadratic.
"""

import numpy as np

from .errors import DimensionError
from .tensor import _spectral_svd, as_mask, as_tensor, idft_mode3

WEIGHT_SYMMETRY_ATOL = 1e-12


def soft_threshold(z, tau):
    """Sign-preserving shrinkage sgn(z) * max(|z| - tau, 0), elementwise."""
    z = np.asarray(z, dtype=np.float64)
    tau = np.asarray(tau, dtype=np.float64)
    if np.any(tau < 0):
        raise ValueError("threshold must be nonnegative")
    out = np.sign(z) * np.maximum(np.abs(z) - tau, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def _check_weights(w, shape=None):
    w = np.asarray(w, dtype=np.float64)
    if shape is not None and w.shape != shape:
        raise DimensionError(f"weight shape {w.shape} does not match {shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    return w


def generalized_soft_threshold(x, w):
    """Entrywise soft thresholding with a per-entry weight tensor."""
    x = as_tensor(x)
    w = _check_weights(w, x.shape)
    return soft_threshold(x, w)


def generalized_tsvt(y, w):
    """Weighted tensor singular value thresholding.

    ``w`` is a tensor of the same shape as ``y`` with diagonal support:
    ``w[i, i, k]`` is the threshold applied to the singular value i of
    *spectral* slice k.  Off-diagonal support is an error, and the weights
    must respect the conjugate pairing of spectral slices
    (``w[i, i, k] == w[i, i, (n3 - k) % n3]``), otherwise the result could
    not be real.
    """
    y = as_tensor(y)
    w = _check_weights(w, y.shape)
    n1, n2, n3 = y.shape
    m = min(n1, n2)
    rng = np.arange(m)
    wd = w[rng, rng, :].copy()
    off = w.copy()
    off[rng, rng, :] = 0.0
    if np.any(off != 0.0):
        raise ValueError("weight tensor must have diagonal support only")
    return generalized_tsvt_diag(y, wd)


def generalized_tsvt_diag(y, wd):
    """Weighted t-SVT taking the (min(n1,n2), n3) spectral diagonal weights.

    Thresholds the spectral singular values directly, then recomposes and
    inverse-transforms; spectral singular values are real nonnegative so the
    scalar nonnegative shrinkage case applies.
    """
    y = as_tensor(y)
    n1, n2, n3 = y.shape
    m = min(n1, n2)
    wd = _check_weights(wd, (m, n3))
    scale = WEIGHT_SYMMETRY_ATOL * (1.0 + wd.max(initial=0.0))
    for k in range(1, n3):
        if np.any(np.abs(wd[:, k] - wd[:, n3 - k]) > scale):
            raise ValueError("weights break conjugate symmetry across spectral slices")
    ubar, sdiag, vbar = _spectral_svd(y)
    st = np.maximum(sdiag - wd, 0.0)
    cbar = np.einsum("irk,rk,jrk->ijk", ubar[:, :m, :], st, vbar[:, :m, :].conj())
    return idft_mode3(cbar)


def project_observed(m, o, mask):
    """Keep ``o`` on the observed set (mask == 1) and ``m`` elsewhere."""
    m = as_tensor(m)
    o = as_tensor(o)
    mask = as_mask(mask, m.shape)
    if o.shape != m.shape:
        raise DimensionError(f"shape mismatch: {o.shape} vs {m.shape}")
    return np.where(mask == 1.0, o, m)
