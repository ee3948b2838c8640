"""Folded-concave scalar penalties and the tensor measures built on them.

Two penalty families are supported, both even functions of t that grow like
lam*|t| near zero and go flat beyond gamma*lam:

* scad: lam*|t| on |t| <= lam, quadratic blend on lam < |t| <= gamma*lam,
  constant (gamma+1)*lam^2/2 beyond;
* mcp:  lam*|t| - t^2/(2*gamma) on |t| < gamma*lam, constant gamma*lam^2/2
  beyond.

On top of the scalar functions live the elementwise sparsity measure, the
spectral rank surrogate (the "gamma-norm", always with lam = 1), and the
tangent-line upper bounds used to monitor the majorize-minimize outer loop.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionError
from .tensor import as_tensor, spectral_singular_values

KINDS = ("scad", "mcp")


@dataclass(frozen=True)
class PenaltyParams:
    """Penalty family plus its (lam, gamma) parameters; gamma > 1 strictly."""

    kind: str
    lam: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "kind", str(self.kind).lower())
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.lam > 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if not self.gamma > 1:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")


def _maybe_scalar(out, like):
    if np.isscalar(like) or getattr(like, "ndim", 1) == 0:
        return float(out)
    return out


def penalty_value(params, t):
    """Evaluate the penalty at t (elementwise, even in t)."""
    a = np.abs(np.asarray(t, dtype=np.float64))
    lam, g = params.lam, params.gamma
    gl = g * lam
    if params.kind == "scad":
        mid = (gl * a - 0.5 * (a * a + lam * lam)) / (g - 1.0)
        out = np.where(a <= lam, lam * a, np.where(a <= gl, mid, 0.5 * (g + 1.0) * lam * lam))
    else:
        out = np.where(a < gl, lam * a - a * a / (2.0 * g), 0.5 * g * lam * lam)
    return _maybe_scalar(out, t)


def penalty_derivative(params, t):
    """Right derivative of the penalty on t >= 0 (elementwise).

    Callers pass magnitudes (|entries| or singular values), which keeps the
    derivative single-valued; the value at 0 is lam for both families.
    """
    a = np.asarray(t, dtype=np.float64)
    if np.any(a < 0):
        raise ValueError("penalty_derivative requires t >= 0")
    lam, g = params.lam, params.gamma
    gl = g * lam
    if params.kind == "scad":
        out = np.where(a <= lam, lam, np.where(a <= gl, (gl - a) / (g - 1.0), 0.0))
    else:
        out = np.where(a < gl, lam - a / g, 0.0)
    return _maybe_scalar(out, t)


def sparsity_measure(params, a):
    """Sum of the penalty over all tensor entries."""
    return float(np.sum(penalty_value(params, as_tensor(a))))


def gamma_norm(params, a):
    """Rank surrogate: mean-over-n3 penalty of all spectral singular values.

    The definition fixes lam = 1; only ``params.kind`` and ``params.gamma``
    matter here.  A fresh t-SVD spectrum is computed internally -- solvers
    that already hold the spectrum use :func:`gamma_norm_of_spectrum`, which
    is the same formula.
    """
    return gamma_norm_of_spectrum(params, spectral_singular_values(a))


def gamma_norm_of_spectrum(params, sdiag):
    """Gamma-norm evaluated on a precomputed (m, n3) spectral diagonal."""
    sdiag = np.asarray(sdiag, dtype=np.float64)
    if sdiag.ndim != 2:
        raise DimensionError(f"expected an (m, n3) spectral diagonal, got {sdiag.shape}")
    p1 = replace(params, lam=1.0)
    return float(np.sum(penalty_value(p1, sdiag))) / sdiag.shape[1]


def q_sparsity_value(params, x, x_old):
    """Tangent-line upper bound of the sparsity measure around x_old."""
    x = as_tensor(x)
    x_old = as_tensor(x_old)
    if x.shape != x_old.shape:
        raise DimensionError(f"shape mismatch: {x.shape} vs {x_old.shape}")
    w = penalty_derivative(params, np.abs(x_old))
    return sparsity_measure(params, x_old) + float(np.sum(w * (np.abs(x) - np.abs(x_old))))


def q_rank_value(params, x, x_old):
    """Tangent-line upper bound of the gamma-norm around x_old.

    Both spectra are taken fresh; lam is forced to 1 as in the gamma-norm.
    """
    x = as_tensor(x)
    x_old = as_tensor(x_old)
    if x.shape != x_old.shape:
        raise DimensionError(f"shape mismatch: {x.shape} vs {x_old.shape}")
    sv_old = spectral_singular_values(x_old)
    sv = spectral_singular_values(x)
    p1 = replace(params, lam=1.0)
    w = penalty_derivative(p1, sv_old)
    return gamma_norm_of_spectrum(params, sv_old) + float(np.sum(w * (sv - sv_old))) / x.shape[2]
