"""Simulator and analysis toolkit for post-selected surface-code
magic-state preparation blocks."""

from .buffer import (
    BufferSpec,
    DistillationSpec,
    binom_cdf,
    distill_error,
    prep_error,
    required_capacity,
)
from .experiment import (
    EERCurve,
    ThresholdEstimate,
    TrialTable,
    breakeven,
    cutoff_for_keep,
    eer_curve,
    estimate_threshold,
    run_trials,
    score_diagnostics,
)
from .geometry import (
    MEMORY,
    PREPARATION,
    BlockGraphs,
    BlockParams,
    SyndromeGraph,
    build_block,
    validate_block,
)
from .matching import (
    GapResult,
    WeightAssignment,
    assign_weights,
    logical_gap,
    min_weight_correction,
    surviving_distance,
)
from .noise import (
    Configuration,
    ErrorModel,
    VisibleInfo,
    derive_trial_seed,
    extract_visible,
    sample_configuration,
    true_class,
)
from .rules import (
    RuleConfig,
    default_rules,
    policy_threshold,
    rank_nested,
    score_annular,
    score_gap,
    score_radial_gap,
    score_surviving,
)

__version__ = "0.1.0"

__all__ = [
    "BlockGraphs",
    "BlockParams",
    "BufferSpec",
    "Configuration",
    "DistillationSpec",
    "EERCurve",
    "ErrorModel",
    "GapResult",
    "MEMORY",
    "PREPARATION",
    "RuleConfig",
    "SyndromeGraph",
    "ThresholdEstimate",
    "TrialTable",
    "VisibleInfo",
    "WeightAssignment",
    "assign_weights",
    "binom_cdf",
    "breakeven",
    "build_block",
    "cutoff_for_keep",
    "default_rules",
    "derive_trial_seed",
    "distill_error",
    "eer_curve",
    "estimate_threshold",
    "extract_visible",
    "logical_gap",
    "min_weight_correction",
    "policy_threshold",
    "prep_error",
    "rank_nested",
    "required_capacity",
    "run_trials",
    "sample_configuration",
    "score_annular",
    "score_diagnostics",
    "score_gap",
    "score_radial_gap",
    "score_surviving",
    "surviving_distance",
    "true_class",
    "validate_block",
]
