"""Sandwiched Renyi divergences, weighted Schatten norms, and randomized
verification of divergence and uncertainty inequalities at small dimension."""

from .linalg import (
    EIG_CUTOFF,
    HermitianEig,
    InvalidOrder,
    LayoutMismatch,
    NotHermitian,
    NotPositiveSemidefinite,
    PSD_CLAMP,
    SchmidtForm,
    SystemLayout,
    frac_power,
    herm_eig,
    op_vec,
    partial_trace,
    polar,
    purify,
    schatten_norm,
    schmidt,
    svd,
    tensor,
)
from .states import (
    DensityOperator,
    MeasurementBasis,
    Pmf,
    classical_state,
    cq_state,
    measure,
    measurement_pmf,
    random_density,
    random_onb,
    random_pure,
    stinespring_measure,
    trial_rng,
)
from .entropies import (
    OptimizerConfig,
    OptimizerDiverged,
    OptimizerResult,
    classical_renyi_divergence,
    classical_renyi_entropy,
    cond_entropy_down,
    cond_entropy_up,
    gen_cond_entropy,
    gen_mutual_info,
    mutual_info_down,
    mutual_info_up,
    optimize_density,
    quantum_relative_entropy,
    renyi_entropy,
    sandwiched_divergence,
    weighted_norm,
)
from .orders import (
    Degenerate,
    RenyiTriple,
    classify_case,
    conjugates,
    hatconj,
    hconj,
    ier_condition,
    make_triple,
    noncond_condition,
    sample_triple,
    sdg_condition,
    solve_beta,
    surface_residual,
)

__version__ = "0.1.0"
