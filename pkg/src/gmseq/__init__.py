"""Dyadic-variation sequence classes and sine-series convergence diagnostics.

The library has three layers: sequence families (:mod:`gmseq.sequences`),
class-membership profiling against window majorants
(:mod:`gmseq.membership`), and sine-series tail diagnostics built on an
r-step summation-by-parts identity (:mod:`gmseq.series`).  The
:mod:`gmseq.cli` module exposes the experiments as reproducible commands.
"""

from .membership import (
    BetaSpec,
    DefectReport,
    DefectSample,
    RatioReport,
    TailSup,
    beta_star,
    beta_value,
    beta_window_ratio,
    block_asymmetry_partial,
    block_asymmetry_tail,
    classify,
    defect_profile,
    dyadic_grid,
    gm_membership,
    r_variation,
    tail_nbn_sup,
    weak_monotone_bound_check,
    weak_monotone_defect,
)
from .sequences import (
    RealSequence,
    boosted_log_harmonic,
    constant,
    notched_inverse_square,
    power_log,
    punctured_log_harmonic,
    random_uniform,
)
from .series import (
    AbelSuiteResult,
    ConvergenceReport,
    EvalGrid,
    SineSeries,
    SingularityError,
    abel_block_sum,
    abel_identity_residual,
    abel_identity_suite,
    block_sum,
    convergence_report,
    divergence_minorant,
    has_divergence_witness,
    partial_sum,
    partial_sums_checkpointed,
    remainder_profile,
    remainder_sup,
    telescoped_partial_sum_identity,
)
from .summation import kahan_sum, prefix_sums_at

__version__ = "0.1.0"
