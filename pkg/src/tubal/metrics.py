"""Image/tensor quality indexes: MSE, PSNR, SSIM, ERGAS, SAM.

All functions treat the first argument as the reference.  Bands are frontal
slices; spectra are mode-3 tubes.  Constants are fixed here so results are
reproducible bit-for-bit: SSIM uses a normalized 11x11 Gaussian window with
sigma 1.5, K1 = 0.01, K2 = 0.03 and the ``peak`` argument as dynamic range;
ERGAS uses the reference band means and a resolution ratio defaulting to 1.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .errors import DegenerateInputError, DimensionError
from .tensor import as_tensor

SAM_TUBE_EPS = 1e-12


@dataclass(frozen=True)
class MetricsReport:
    mse: float
    psnr: float
    ssim: float
    ergas: float
    sam: float
    sam_skipped: int = 0


def _pair(ref, est):
    ref = as_tensor(ref)
    est = as_tensor(est)
    if ref.shape != est.shape:
        raise DimensionError(f"shape mismatch: {ref.shape} vs {est.shape}")
    return ref, est


def mse(ref, est):
    """Mean squared error over all entries."""
    ref, est = _pair(ref, est)
    return float(np.mean((ref - est) ** 2))


def psnr(ref, est, peak=1.0):
    """10*log10(peak^2 / mse); +inf when the inputs are identical."""
    if not peak > 0:
        raise ValueError(f"peak must be > 0, got {peak}")
    err = mse(ref, est)
    if err == 0.0:
        return math.inf
    return float(10.0 * math.log10(peak * peak / err))


def _gaussian_window(size, sigma):
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g = np.exp(-(coords[:, None] ** 2 + coords[None, :] ** 2) / (2.0 * sigma * sigma))
    return g / g.sum()


def _ssim_slice(x, y, peak, size, sigma, k1, k2):
    w = _gaussian_window(size, sigma)
    mu_x = convolve2d(x, w, mode="valid")
    mu_y = convolve2d(y, w, mode="valid")
    xx = convolve2d(x * x, w, mode="valid") - mu_x * mu_x
    yy = convolve2d(y * y, w, mode="valid") - mu_y * mu_y
    xy = convolve2d(x * y, w, mode="valid") - mu_x * mu_y
    c1 = (k1 * peak) ** 2
    c2 = (k2 * peak) ** 2
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * xy + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (xx + yy + c2)
    return float(np.mean(num / den))


def ssim(ref, est, peak=1.0, window=11, sigma=1.5, k1=0.01, k2=0.03):
    """Single-scale SSIM per frontal slice, averaged over windows and slices.

    The window shrinks to the largest odd size that fits when a spatial dim
    is smaller than ``window``.
    """
    ref, est = _pair(ref, est)
    if not peak > 0:
        raise ValueError(f"peak must be > 0, got {peak}")
    n1, n2, n3 = ref.shape
    size = min(window, n1, n2)
    if size % 2 == 0:
        size -= 1
    if size < 1:
        raise DimensionError("image too small for any SSIM window")
    vals = [_ssim_slice(ref[:, :, k], est[:, :, k], peak, size, sigma, k1, k2)
            for k in range(n3)]
    return float(np.mean(vals))


def ergas(ref, est, ratio=1.0):
    """Band-relative RMS error summary: 100*ratio*sqrt(mean_b(mse_b/mean_b^2))."""
    ref, est = _pair(ref, est)
    band_mse = np.mean((ref - est) ** 2, axis=(0, 1))
    band_mean = np.mean(ref, axis=(0, 1))
    if np.any(band_mean == 0.0):
        raise DegenerateInputError("ERGAS undefined: a reference band has mean 0")
    return float(100.0 * ratio * np.sqrt(np.mean(band_mse / band_mean**2)))


def sam(ref, est, with_skipped=False):
    """Mean spectral angle (radians) between corresponding mode-3 tubes.

    Positions where either tube norm is below 1e-12 are skipped; the count of
    skipped positions is available via ``with_skipped=True``.  All positions
    degenerate is an error.
    """
    ref, est = _pair(ref, est)
    n1, n2, _ = ref.shape
    nr = np.sqrt(np.sum(ref * ref, axis=2))
    ne = np.sqrt(np.sum(est * est, axis=2))
    dots = np.sum(ref * est, axis=2)
    valid = (nr >= SAM_TUBE_EPS) & (ne >= SAM_TUBE_EPS)
    skipped = int(n1 * n2 - np.count_nonzero(valid))
    if not np.any(valid):
        raise DegenerateInputError("SAM undefined: every tube is degenerate")
    cosines = np.clip(dots[valid] / (nr[valid] * ne[valid]), -1.0, 1.0)
    angle = float(np.mean(np.arccos(cosines)))
    if with_skipped:
        return angle, skipped
    return angle


def metrics_report(ref, est, peak=1.0, ergas_ratio=1.0):
    """All five indexes in one pass."""
    angle, skipped = sam(ref, est, with_skipped=True)
    return MetricsReport(
        mse=mse(ref, est),
        psnr=psnr(ref, est, peak),
        ssim=ssim(ref, est, peak),
        ergas=ergas(ref, est, ergas_ratio),
        sam=angle,
        sam_skipped=skipped,
    )
