"""Tensor completion and tensor robust PCA solvers.

Both tasks share the same two-level structure: an outer majorize-minimize
loop that freezes tangent-line weights at the previous iterate, and an inner
ADMM that solves the resulting convex subproblem with a growing penalty
parameter mu (mu <- min(rho*mu, mu_max) each step, restarted at mu0 for every
subproblem).  The convex solvers are the constant-weight special cases that
the weighted ones collapse to as gamma -> infinity; they double as the
default initialization.

Weights are stored as raw derivative values per outer iteration and divided
by the current mu of each inner step, because the shrinkage step solves a
quadratic with that mu.  Set ``freeze_weight_mu=True`` to divide once by mu0
instead (the literal one-shot reading of the weight formula).
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionError
from .operators import generalized_soft_threshold, generalized_tsvt_diag, project_observed
from .penalties import (
    PenaltyParams,
    gamma_norm_of_spectrum,
    penalty_derivative,
    sparsity_measure,
)
from .rng import SplitMix64
from .tensor import as_mask, as_tensor, invert_perm, permute_modes, spectral_singular_values

INIT_MODES = ("tnn", "provided")


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by all solvers.

    ``penalty`` carries the sparsity penalty (lam, gamma); completion uses its
    gamma for the rank surrogate (lam is irrelevant there, the surrogate fixes
    lam = 1).  For robust PCA ``rank_gamma`` is the low-rank surrogate's gamma
    and defaults to ``penalty.gamma``.
    """

    penalty: PenaltyParams
    rank_gamma: float | None = None
    mu0: float = 1.0
    rho: float = 1.1
    mu_max: float = 1e10
    inner_tol: float = 1e-7
    inner_max_iters: int = 500
    outer_iters: int = 10
    init: str = "tnn"
    twist_perm: tuple[int, int, int] | None = None
    freeze_weight_mu: bool = False
    dual_init_seed: int | None = None

    def __post_init__(self):
        if not self.mu0 > 0:
            raise ValueError(f"mu0 must be > 0, got {self.mu0}")
        if not self.rho >= 1:
            raise ValueError(f"rho must be >= 1, got {self.rho}")
        if not self.mu_max >= self.mu0:
            raise ValueError(f"mu_max must be >= mu0, got {self.mu_max}")
        if not self.inner_tol > 0:
            raise ValueError(f"inner_tol must be > 0, got {self.inner_tol}")
        if self.inner_max_iters < 1 or self.outer_iters < 1:
            raise ValueError("iteration counts must be >= 1")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}, got {self.init!r}")
        if self.twist_perm is not None and sorted(self.twist_perm) != [1, 2, 3]:
            raise ValueError(f"twist_perm must permute (1, 2, 3), got {self.twist_perm}")

    def rank_penalty(self):
        g = self.penalty.gamma if self.rank_gamma is None else self.rank_gamma
        return PenaltyParams(self.penalty.kind, 1.0, g)


@dataclass
class SolveReport:
    """Final iterates plus per-iteration traces of a solve.

    ``objective_trace`` holds the true (non-surrogate) objective at the outer
    iteration boundaries; ``feasibility_trace`` the inf-norm constraint
    residual of every inner step, concatenated across outer iterations.
    """

    estimate: np.ndarray
    sparse: np.ndarray | None
    objective_trace: list
    feasibility_trace: list
    inner_iterations: list
    iterations_used: int
    converged: bool


def default_sparse_lambda(dims):
    """Conventional robust-PCA sparse weight 1/sqrt(max(n1, n2) * n3)."""
    n1, n2, n3 = dims
    return float(1.0 / np.sqrt(max(n1, n2) * n3))


def _weight_denominators(cfg):
    """Yield the mu used for shrinkage and the running mu, per inner step."""
    mu = cfg.mu0
    while True:
        yield (cfg.mu0 if cfg.freeze_weight_mu else mu), mu
        mu = min(cfg.rho * mu, cfg.mu_max)


def admm_tc_inner(o, mask, x_start, raw_weights, cfg):
    """ADMM for one completion subproblem.

    ``raw_weights`` are spectral-diagonal derivative values (m, n3), *not yet*
    divided by mu.  Iterates: M is the weighted t-SVT of X - Y/mu, X is M +
    Y/mu overwritten with O on the observed set, Y accumulates mu*(M - X).
    Stops when the inf-norm of M - X drops to ``cfg.inner_tol`` or at the
    iteration cap (the cap is an outcome, not an error).

    Returns (x, y, trace) with trace the residual per iteration.
    """
    x = x_start
    y = np.zeros_like(x)
    trace = []
    denoms = _weight_denominators(cfg)
    for _ in range(cfg.inner_max_iters):
        w_mu, mu = next(denoms)
        m = generalized_tsvt_diag(x - y / mu, raw_weights / w_mu)
        x = project_observed(m + y / mu, o, mask)
        y = y + mu * (m - x)
        res = float(np.max(np.abs(m - x)))
        trace.append(res)
        if res <= cfg.inner_tol:
            break
    return x, y, trace


def admm_rpca_inner(x, l_start, e_start, raw_rank_weights, raw_sparse_weights, cfg):
    """ADMM for one robust-PCA subproblem (decompose x into L + E).

    ``raw_rank_weights`` is an (m, n3) spectral diagonal, ``raw_sparse_weights``
    a full tensor; both are divided by the running mu at each use.  Stops when
    the inf-norm of L + E - X reaches ``cfg.inner_tol`` or at the cap.

    Returns (l, e, y, trace).
    """
    l, e = l_start, e_start
    if cfg.dual_init_seed is None:
        y = np.zeros_like(x)
    else:
        y = SplitMix64(cfg.dual_init_seed).normal_tensor(x.shape)
    trace = []
    denoms = _weight_denominators(cfg)
    for _ in range(cfg.inner_max_iters):
        w_mu, mu = next(denoms)
        l = generalized_tsvt_diag(x - e - y / mu, raw_rank_weights / w_mu)
        e = generalized_soft_threshold(x - l - y / mu, raw_sparse_weights / w_mu)
        y = y + mu * (l + e - x)
        res = float(np.max(np.abs(l + e - x)))
        trace.append(res)
        if res <= cfg.inner_tol:
            break
    return l, e, y, trace


def _resolve_init(cfg, provided, fallback):
    if provided is not None:
        if cfg.init != "provided":
            raise ValueError("explicit start point requires init='provided'")
        return provided
    if cfg.init == "provided":
        raise ValueError("init='provided' requires a start point")
    return fallback()


def _twisted(solve, cfg, tensors, untwist_fields):
    """Run ``solve`` on mode-permuted inputs and unpermute the estimates."""
    perm = cfg.twist_perm
    inner_cfg = replace(cfg, twist_perm=None)
    report = solve(inner_cfg, *[permute_modes(t, perm) if t is not None else None for t in tensors])
    inv = invert_perm(perm)
    for field in untwist_fields:
        value = getattr(report, field)
        if value is not None:
            setattr(report, field, permute_modes(value, inv))
    return report


def convex_tc(o, mask, cfg=None, x0=None):
    """Tensor completion with the plain nuclear-norm proximal (weights 1/mu).

    This is the gamma -> infinity special case of :func:`lrtc_mm` and its
    default initializer.  Starts from the observed entries (zeros elsewhere)
    unless ``x0`` is provided.
    """
    if cfg is None:
        cfg = SolverConfig(PenaltyParams("mcp", 1.0, 1e8))
    o = as_tensor(o)
    mask = as_mask(mask, o.shape)
    if cfg.twist_perm is not None:
        return _twisted(lambda c, oo, mm, xx: convex_tc(oo, mm, c, xx), cfg,
                        (o, mask, x0), ("estimate",))
    x = _resolve_init(cfg, x0, lambda: np.where(mask == 1.0, o, 0.0))
    x = project_observed(as_tensor(x), o, mask)
    m = min(o.shape[0], o.shape[1])
    raw = np.ones((m, o.shape[2]))
    sv = spectral_singular_values(x)
    trace = [float(sv.sum() / o.shape[2])]
    x, _, res = admm_tc_inner(o, mask, x, raw, cfg)
    trace.append(float(spectral_singular_values(x).sum() / o.shape[2]))
    return SolveReport(
        estimate=x,
        sparse=None,
        objective_trace=trace,
        feasibility_trace=list(res),
        inner_iterations=[len(res)],
        iterations_used=len(res),
        converged=res[-1] <= cfg.inner_tol,
    )


def lrtc_mm(o, mask, cfg, x0=None):
    """Low-tubal-rank tensor completion by MM with weighted t-SVT inner steps.

    Each outer iteration reads the spectral singular values of the previous
    iterate, turns their penalty derivatives (lam = 1) into per-value
    thresholds, and solves the resulting convex subproblem by ADMM.  Exactly
    ``cfg.outer_iters`` outer iterations run; one iteration from a convex
    start is the one-step LLA strategy.
    """
    o = as_tensor(o)
    mask = as_mask(mask, o.shape)
    if cfg.twist_perm is not None:
        return _twisted(lambda c, oo, mm, xx: lrtc_mm(oo, mm, c, xx), cfg,
                        (o, mask, x0), ("estimate",))
    rank_p = cfg.rank_penalty()

    def _convex_start():
        return convex_tc(o, mask, replace(cfg, init="tnn"), None).estimate

    x = _resolve_init(cfg, x0, _convex_start)
    x = project_observed(as_tensor(x), o, mask)
    sv = spectral_singular_values(x)
    objective = [gamma_norm_of_spectrum(rank_p, sv)]
    feasibility = []
    inner_counts = []
    for _ in range(cfg.outer_iters):
        raw = penalty_derivative(rank_p, sv)
        x, _, res = admm_tc_inner(o, mask, x, raw, cfg)
        feasibility.extend(res)
        inner_counts.append(len(res))
        sv = spectral_singular_values(x)
        objective.append(gamma_norm_of_spectrum(rank_p, sv))
    return SolveReport(
        estimate=x,
        sparse=None,
        objective_trace=objective,
        feasibility_trace=feasibility,
        inner_iterations=inner_counts,
        iterations_used=sum(inner_counts),
        converged=feasibility[-1] <= cfg.inner_tol,
    )


def convex_trpca(x, lam=None, cfg=None, l0=None, e0=None):
    """Robust PCA with nuclear-norm and l1 proximals (constant weights).

    ``lam`` defaults to 1/sqrt(max(n1, n2) * n3).  This is the gamma ->
    infinity special case of :func:`trpca_mm` and its default initializer.
    """
    x = as_tensor(x)
    if lam is None:
        lam = default_sparse_lambda(x.shape)
    if cfg is None:
        cfg = SolverConfig(PenaltyParams("mcp", lam, 1e8))
    if cfg.twist_perm is not None:
        return _twisted(lambda c, xx, ll, ee: convex_trpca(xx, lam, c, ll, ee), cfg,
                        (x, l0, e0), ("estimate", "sparse"))
    if (l0 is None) != (e0 is None):
        raise ValueError("provide both l0 and e0 or neither")
    l = _resolve_init(cfg, l0, lambda: np.zeros_like(x))
    e = e0 if e0 is not None else np.zeros_like(x)
    m = min(x.shape[0], x.shape[1])
    raw_rank = np.ones((m, x.shape[2]))
    raw_sparse = np.full(x.shape, lam)

    def _objective(ll, ee):
        tnn = float(spectral_singular_values(ll).sum() / x.shape[2])
        return tnn + lam * float(np.sum(np.abs(ee)))

    trace = [_objective(l, e)]
    l, e, _, res = admm_rpca_inner(x, l, e, raw_rank, raw_sparse, cfg)
    trace.append(_objective(l, e))
    return SolveReport(
        estimate=l,
        sparse=e,
        objective_trace=trace,
        feasibility_trace=list(res),
        inner_iterations=[len(res)],
        iterations_used=len(res),
        converged=res[-1] <= cfg.inner_tol,
    )


def trpca_mm(x, cfg, l0=None, e0=None):
    """Tensor robust PCA by MM with reweighted t-SVT and soft thresholding.

    Rank weights come from the spectral singular values of the previous L,
    sparse weights from the penalty derivative at |previous E| (absolute
    value applied, as the tangent-line subproblem requires).
    """
    x = as_tensor(x)
    if cfg.twist_perm is not None:
        return _twisted(lambda c, xx, ll, ee: trpca_mm(xx, c, ll, ee), cfg,
                        (x, l0, e0), ("estimate", "sparse"))
    if (l0 is None) != (e0 is None):
        raise ValueError("provide both l0 and e0 or neither")
    rank_p = cfg.rank_penalty()
    sparse_p = cfg.penalty

    def _convex_start():
        rep = convex_trpca(x, sparse_p.lam, replace(cfg, init="tnn"))
        return rep.estimate, rep.sparse

    if l0 is not None:
        if cfg.init != "provided":
            raise ValueError("explicit start point requires init='provided'")
        l, e = as_tensor(l0), as_tensor(e0)
    else:
        if cfg.init == "provided":
            raise ValueError("init='provided' requires l0 and e0")
        l, e = _convex_start()
    if l.shape != x.shape or e.shape != x.shape:
        raise DimensionError("start points must match the input shape")

    sv = spectral_singular_values(l)
    objective = [gamma_norm_of_spectrum(rank_p, sv) + sparsity_measure(sparse_p, e)]
    feasibility = []
    inner_counts = []
    for _ in range(cfg.outer_iters):
        raw_rank = penalty_derivative(rank_p, sv)
        raw_sparse = penalty_derivative(sparse_p, np.abs(e))
        l, e, _, res = admm_rpca_inner(x, l, e, raw_rank, raw_sparse, cfg)
        feasibility.extend(res)
        inner_counts.append(len(res))
        sv = spectral_singular_values(l)
        objective.append(gamma_norm_of_spectrum(rank_p, sv) + sparsity_measure(sparse_p, e))
    return SolveReport(
        estimate=l,
        sparse=e,
        objective_trace=objective,
        feasibility_trace=feasibility,
        inner_iterations=inner_counts,
        iterations_used=sum(inner_counts),
        converged=feasibility[-1] <= cfg.inner_tol,
    )
