"""Scalable Beta-process inference for smooth probability functions.

Learn a smooth function pi: [0,1]^d -> [0,1] from point-wise Bernoulli tests
by sharing each test with every query point within a shrinking l-inf
neighborhood. Plain tests give closed-form Beta posteriors; tests whose
success probability is contextually shifted to ``A pi(x) + B`` give
normalized Beta mixtures with linear-time recursions in the
certainty-invariant case A + B = 1. The harness reproduces convergence-rate,
ablation, runtime, classification, and case-study experiments at desk scale.
"""

from .betamix import UNIFORM, BetaMixture, BetaParams, normalize
from .classification import NO_PRIOR, bayes_optimal, classify, informative_prior, risk
from .dynamic import (
    DynamicDataset,
    exact_posterior_moments,
    flip_dataset,
    posterior_csbp,
    posterior_csbp_flipped,
    posterior_csbp_scheduled,
    posterior_general,
    posterior_simplified,
    update_single,
)
from .harness import (
    DEFAULT_SEED,
    ErrorCurve,
    FatigueChainConfig,
    RehabReport,
    TargetFunction,
    bench_runtime,
    fatigue_beliefs,
    fit_loglog_slope,
    l2_error_at,
    query_grid,
    rehab_simulation,
    run_classification,
    run_convergence,
    sample_dynamic,
    sample_static,
    synth_1d,
    synth_2d,
)
from .neighbors import NeighborIndex, delta_schedule
from .static import StaticDataset, posterior_static, posterior_static_scheduled

__version__ = "0.1.0"

__all__ = [
    "BetaParams",
    "BetaMixture",
    "UNIFORM",
    "NO_PRIOR",
    "normalize",
    "NeighborIndex",
    "delta_schedule",
    "StaticDataset",
    "posterior_static",
    "posterior_static_scheduled",
    "DynamicDataset",
    "update_single",
    "posterior_general",
    "posterior_simplified",
    "posterior_csbp",
    "posterior_csbp_scheduled",
    "posterior_csbp_flipped",
    "flip_dataset",
    "exact_posterior_moments",
    "classify",
    "bayes_optimal",
    "risk",
    "informative_prior",
    "TargetFunction",
    "synth_1d",
    "synth_2d",
    "query_grid",
    "sample_static",
    "sample_dynamic",
    "l2_error_at",
    "run_convergence",
    "fit_loglog_slope",
    "run_classification",
    "bench_runtime",
    "ErrorCurve",
    "FatigueChainConfig",
    "fatigue_beliefs",
    "rehab_simulation",
    "RehabReport",
    "DEFAULT_SEED",
    "__version__",
]
