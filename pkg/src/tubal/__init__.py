"""Low-tubal-rank tensor completion and robust PCA toolkit.

The calculus lives in :mod:`tubal.tensor`, the penalty machinery in
:mod:`tubal.penalties` and :mod:`tubal.operators`, the solvers in
:mod:`tubal.solvers`.  :mod:`tubal.synth`, :mod:`tubal.io` and
:mod:`tubal.metrics` provide data generation, storage and evaluation;
``tubal.cli`` is the command-line front end.
"""

from .errors import (
    DegenerateInputError,
    DimensionError,
    FileFormatError,
    ImagResidueTooLarge,
    NumericalError,
    TubalError,
)
from .io import image_to_tensor, read_tensor, tensor_to_image, write_tensor
from .metrics import MetricsReport, ergas, metrics_report, mse, psnr, sam, ssim
from .operators import (
    generalized_soft_threshold,
    generalized_tsvt,
    generalized_tsvt_diag,
    project_observed,
    soft_threshold,
)
from .penalties import (
    PenaltyParams,
    gamma_norm,
    gamma_norm_of_spectrum,
    penalty_derivative,
    penalty_value,
    q_rank_value,
    q_sparsity_value,
    sparsity_measure,
)
from .rng import SplitMix64
from .solvers import (
    SolveReport,
    SolverConfig,
    admm_rpca_inner,
    admm_tc_inner,
    convex_tc,
    convex_trpca,
    default_sparse_lambda,
    lrtc_mm,
    trpca_mm,
)
from .synth import add_salt_pepper, add_uniform_noise, random_mask, synth_low_tubal_rank
from .tensor import (
    TSVDFactors,
    as_mask,
    as_tensor,
    check_spectral_symmetry,
    conj_transpose,
    dft_mode3,
    fold,
    identity_tensor,
    idft_mode3,
    invert_perm,
    permute_modes,
    spectral_singular_values,
    t_product,
    t_svd,
    tensor_nuclear_norm,
    tubal_rank,
    unfold,
)

__version__ = "0.1.0"
