"""Dense 3-way tensor calculus over the mode-3 discrete Fourier transform.

Conventions fixed once for the whole package:

* a tensor is a real float64 array of shape ``(n1, n2, n3)``; frontal slice
  ``k`` is ``a[:, :, k]`` and a tube is ``a[i, j, :]``;
* the spectral form is ``numpy.fft.fft(a, axis=2)``: unnormalized forward,
  ``1/n3`` on the inverse.  The nuclear-norm constant and the gamma-norm
  scaling in :mod:`tubal.penalties` depend on this choice;
* a spectral tensor of a real input satisfies conjugate symmetry along the
  third axis: slice ``k`` equals ``conj(slice (n3 - k) % n3)`` (0-based).

The slice-wise SVD loop honours the ``TUBAL_THREADS`` environment variable
(0 = one worker per CPU, unset = sequential); threaded results are assembled
by slice index and are bit-identical to sequential execution.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, ImagResidueTooLarge, NumericalError

IMAG_RTOL = 1e-9
SYMMETRY_RTOL = 1e-10
TNN_AGREEMENT_RTOL = 1e-9


class TSVDFactors(NamedTuple):
    """Orthogonal ``u``, f-diagonal ``s``, orthogonal ``v`` with a = u*s*v^T."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def as_tensor(a):
    """Validate and return ``a`` as a float64 (n1, n2, n3) array.

    Rejects non-3-way shapes and non-finite entries.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3:
        raise DimensionError(f"expected a 3-way tensor, got shape {a.shape}")
    if min(a.shape) < 1:
        raise DimensionError(f"all dims must be >= 1, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError("tensor entries must be finite (no NaN/Inf)")
    return a


def as_mask(mask, dims=None):
    """Validate a 0/1 observation mask, returned as float64."""
    m = np.asarray(mask, dtype=np.float64)
    if m.ndim != 3:
        raise DimensionError(f"expected a 3-way mask, got shape {m.shape}")
    if dims is not None and m.shape != tuple(dims):
        raise DimensionError(f"mask shape {m.shape} does not match {tuple(dims)}")
    if not np.all((m == 0.0) | (m == 1.0)):
        raise DimensionError("mask entries must be exactly 0 or 1")
    return m


def _thread_count():
    raw = os.environ.get("TUBAL_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    n = int(raw)
    if n < 0:
        raise ValueError("TUBAL_THREADS must be >= 0")
    return (os.cpu_count() or 1) if n == 0 else n


def _map_slices(func, indices):
    workers = _thread_count()
    if workers <= 1 or len(indices) <= 1:
        return [func(k) for k in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, indices))


def _real_part(x, scale=None):
    """Strip an imaginary residue known to be rounding noise; error if not."""
    if not np.iscomplexobj(x):
        return np.asarray(x, dtype=np.float64)
    ref = np.linalg.norm(x) if scale is None else scale
    resid = np.linalg.norm(x.imag)
    if resid > IMAG_RTOL * max(ref, 1e-300):
        raise ImagResidueTooLarge(
            f"imaginary residue {resid:.3e} exceeds {IMAG_RTOL:g} * {ref:.3e}"
        )
    return np.ascontiguousarray(x.real)


def unfold(a):
    """Stack frontal slices into an (n1*n3, n2) matrix [A1; A2; ...; An3]."""
    a = as_tensor(a)
    n1, n2, n3 = a.shape
    return a.transpose(2, 0, 1).reshape(n1 * n3, n2)


def fold(m, dims):
    """Inverse of :func:`unfold` for the given (n1, n2, n3)."""
    n1, n2, n3 = dims
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape != (n1 * n3, n2):
        raise DimensionError(f"expected a {(n1 * n3, n2)} matrix, got {m.shape}")
    return m.reshape(n3, n1, n2).transpose(1, 2, 0)


def dft_mode3(a):
    """Mode-3 DFT of each tube (unnormalized forward transform)."""
    return np.fft.fft(as_tensor(a), axis=2)


def idft_mode3(abar):
    """Inverse mode-3 DFT back to a real tensor.

    The imaginary residue must stay below ``IMAG_RTOL`` times the spectral
    norm of the input; larger residue means the conjugate-symmetry invariant
    was broken upstream and raises :class:`ImagResidueTooLarge`.
    """
    abar = np.asarray(abar)
    if abar.ndim != 3:
        raise DimensionError(f"expected a 3-way spectral tensor, got {abar.shape}")
    x = np.fft.ifft(abar, axis=2)
    return _real_part(x, scale=np.linalg.norm(abar))


def check_spectral_symmetry(abar, rtol=SYMMETRY_RTOL):
    """Verify the conjugate-symmetry invariant of a spectral tensor."""
    abar = np.asarray(abar)
    n3 = abar.shape[2]
    tol = rtol * max(np.linalg.norm(abar), 1e-300)
    worst = np.linalg.norm(abar[:, :, 0].imag)
    for k in range(1, n3):
        worst = max(worst, np.linalg.norm(abar[:, :, k] - abar[:, :, n3 - k].conj()))
    if worst > tol:
        raise NumericalError(f"conjugate symmetry violated by {worst:.3e} > {tol:.3e}")


def t_product(a, b):
    """Tensor-tensor product: slice-wise matrix product in the Fourier domain.

    ``a`` is (n1, m, n3), ``b`` is (m, n2, n3); the result is (n1, n2, n3)
    and equals block-circulant matrix multiplication of the unfolded operands.
    """
    a = as_tensor(a)
    b = as_tensor(b)
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise DimensionError(f"t_product dims do not conform: {a.shape} * {b.shape}")
    abar = np.fft.fft(a, axis=2)
    bbar = np.fft.fft(b, axis=2)
    cbar = np.einsum("imk,mjk->ijk", abar, bbar)
    return idft_mode3(cbar)


def conj_transpose(a):
    """Tensor transpose: slice 1 transposed, slice k swapped with slice n3+2-k."""
    a = as_tensor(a)
    n1, n2, n3 = a.shape
    out = np.empty((n2, n1, n3))
    out[:, :, 0] = a[:, :, 0].T
    for k in range(1, n3):
        out[:, :, k] = a[:, :, n3 - k].T
    return out


def identity_tensor(n, n3):
    """Identity under the t-product: first slice I_n, remaining slices zero."""
    if n < 1 or n3 < 1:
        raise DimensionError("identity_tensor dims must be >= 1")
    out = np.zeros((n, n, n3))
    out[np.arange(n), np.arange(n), 0] = 1.0
    return out


def _half_range(n3):
    # self-conjugate slices: 0 always, n3//2 when n3 is even
    return range(n3 // 2 + 1)


def _spectral_svd(a):
    """Slice-wise SVD in the Fourier domain with conjugate fill.

    Only slices k = 0 .. n3//2 are factorized; the rest are the conjugates of
    their mirrors, which keeps the inverse transform exactly real.  The DC
    slice (and the Nyquist slice for even n3) of a real tensor is real, so it
    gets a real SVD to avoid stray complex phases.

    Returns (ubar, sdiag, vbar) with ubar (n1, n1, n3) complex, vbar
    (n2, n2, n3) complex and sdiag (min(n1, n2), n3) real nonnegative,
    nonincreasing down each column.
    """
    n1, n2, n3 = a.shape
    abar = np.fft.fft(a, axis=2)
    ubar = np.empty((n1, n1, n3), dtype=np.complex128)
    vbar = np.empty((n2, n2, n3), dtype=np.complex128)
    sdiag = np.empty((min(n1, n2), n3))

    def _factor(k):
        m = abar[:, :, k]
        if k == 0 or (n3 % 2 == 0 and k == n3 // 2):
            m = m.real
        return np.linalg.svd(m, full_matrices=True)

    results = _map_slices(_factor, list(_half_range(n3)))
    for k, (u, s, vh) in zip(_half_range(n3), results):
        ubar[:, :, k] = u
        vbar[:, :, k] = vh.conj().T
        sdiag[:, k] = s
    for k in range(n3 // 2 + 1, n3):
        ubar[:, :, k] = ubar[:, :, n3 - k].conj()
        vbar[:, :, k] = vbar[:, :, n3 - k].conj()
        sdiag[:, k] = sdiag[:, n3 - k]
    return ubar, sdiag, vbar


def spectral_singular_values(a):
    """Singular values of every spectral slice, as a (min(n1,n2), n3) array.

    Column k holds the nonincreasing singular values of spectral slice k.
    This is the spectral diagonal that the rank surrogate and the solver
    weights are built from.
    """
    a = as_tensor(a)
    n3 = a.shape[2]
    abar = np.fft.fft(a, axis=2)
    sdiag = np.empty((min(a.shape[0], a.shape[1]), n3))

    def _values(k):
        m = abar[:, :, k]
        if k == 0 or (n3 % 2 == 0 and k == n3 // 2):
            m = m.real
        return np.linalg.svd(m, compute_uv=False)

    results = _map_slices(_values, list(_half_range(n3)))
    for k, s in zip(_half_range(n3), results):
        sdiag[:, k] = s
    for k in range(n3 // 2 + 1, n3):
        sdiag[:, k] = sdiag[:, n3 - k]
    return sdiag


def t_svd(a):
    """Factor ``a = u * s * v^T`` with orthogonal u, v and f-diagonal s.

    Computed from the half-spectrum slice SVDs plus conjugate fill, so the
    returned factors are guaranteed real.
    """
    a = as_tensor(a)
    n1, n2, n3 = a.shape
    ubar, sdiag, vbar = _spectral_svd(a)
    sbar = np.zeros((n1, n2, n3), dtype=np.complex128)
    rng = np.arange(min(n1, n2))
    sbar[rng, rng, :] = sdiag
    u = idft_mode3(ubar)
    s = idft_mode3(sbar)
    v = idft_mode3(vbar)
    return TSVDFactors(u, s, v)


def tensor_nuclear_norm(a):
    """Sum of the first-slice diagonal of s, i.e. TNN.

    Evaluates both equivalent readings -- the first frontal slice of the
    f-diagonal factor and the spectral average ``sum(sdiag)/n3`` -- and
    raises :class:`NumericalError` if they disagree beyond 1e-9 relative.
    """
    a = as_tensor(a)
    n3 = a.shape[2]
    sdiag = spectral_singular_values(a)
    tubes = np.fft.ifft(sdiag, axis=1)
    first_slice = float(_real_part(tubes[:, 0], scale=np.linalg.norm(sdiag)).sum())
    spectral_avg = float(sdiag.sum() / n3)
    if abs(first_slice - spectral_avg) > TNN_AGREEMENT_RTOL * max(1.0, abs(spectral_avg)):
        raise NumericalError(
            f"TNN formulas disagree: {first_slice!r} vs {spectral_avg!r}"
        )
    return first_slice


def tubal_rank(a, tol=1e-9):
    """Max over slices of the count of spectral singular values above cutoff.

    The cutoff is ``tol`` times the largest spectral singular value overall.
    """
    sdiag = spectral_singular_values(a)
    smax = sdiag.max(initial=0.0)
    if smax == 0.0:
        return 0
    return int(np.max(np.sum(sdiag > tol * smax, axis=0)))


def permute_modes(a, perm):
    """Reorder tensor modes; ``perm`` is 1-based, e.g. (3, 1, 2).

    ``perm[i] = j`` places original mode j at position i, so
    ``permute_modes(a, (3, 1, 2))[k, i, j] == a[i, j, k]``.
    """
    a = as_tensor(a)
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != [1, 2, 3]:
        raise DimensionError(f"perm must be a permutation of (1, 2, 3), got {perm}")
    return np.transpose(a, axes=tuple(p - 1 for p in perm))


def invert_perm(perm):
    """Inverse of a 1-based mode permutation."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != [1, 2, 3]:
        raise DimensionError(f"perm must be a permutation of (1, 2, 3), got {perm}")
    inv = [0, 0, 0]
    for pos, p in enumerate(perm):
        inv[p - 1] = pos + 1
    return tuple(inv)
