"""Demographic fairness evaluation for binary biometric verifiers.

Consumes trial score files (group, mated/nonmated label, similarity score),
computes per-group FMR/FNMR, EER and DET data, and evaluates the FDR, IR,
and GARBE fairness metrics across threshold and risk-parameter sweeps,
including an automated functional fairness measure criteria report.
"""

__version__ = "0.1.0"

from .errors import (
    ScoreParseError,
    UnreachableTargetError,
    ValidationError,
    VerifairError,
)
from .trials import Label, Polarity, TrialRecord, TrialSet, dump_scores, parse_scores
from .protocol import (
    ProtocolSpec,
    SyntheticGroupSpec,
    TrialPair,
    dump_protocol,
    generate_protocol,
    generate_synthetic,
)
from .rates import (
    DetPoint,
    EerResult,
    GroupRates,
    RatePair,
    Scope,
    ThresholdResult,
    det_points,
    det_points_by_group,
    group_rate_table,
    pooled_eer,
    rates_at,
    threshold_for_fmr,
)
from .metrics import METRIC_BOUNDS, METRICS, MetricResult, evaluate, fdr, garbe, gini, ir
from .sweep import (
    ComponentSummary,
    CurvePoint,
    DistributionSummary,
    ResolvedTarget,
    SweepCell,
    SweepGrid,
    SweepResult,
    default_grid,
    garbe_curve_data,
    linear_spaced,
    log_spaced,
    resolve_targets,
    run_sweep,
    summarize_components,
)
from .ffmc import DEFAULT_SCALE_RATIO_LIMIT, FfmcReport, MetricCriteria, ffmc_report

__all__ = [
    "__version__",
    "VerifairError",
    "ScoreParseError",
    "ValidationError",
    "UnreachableTargetError",
    "Label",
    "Polarity",
    "TrialRecord",
    "TrialSet",
    "parse_scores",
    "dump_scores",
    "ProtocolSpec",
    "SyntheticGroupSpec",
    "TrialPair",
    "generate_protocol",
    "dump_protocol",
    "generate_synthetic",
    "Scope",
    "RatePair",
    "GroupRates",
    "DetPoint",
    "ThresholdResult",
    "EerResult",
    "rates_at",
    "threshold_for_fmr",
    "pooled_eer",
    "group_rate_table",
    "det_points",
    "det_points_by_group",
    "METRICS",
    "METRIC_BOUNDS",
    "MetricResult",
    "fdr",
    "ir",
    "garbe",
    "gini",
    "evaluate",
    "SweepGrid",
    "SweepCell",
    "SweepResult",
    "ResolvedTarget",
    "CurvePoint",
    "DistributionSummary",
    "ComponentSummary",
    "default_grid",
    "log_spaced",
    "linear_spaced",
    "resolve_targets",
    "run_sweep",
    "summarize_components",
    "garbe_curve_data",
    "DEFAULT_SCALE_RATIO_LIMIT",
    "FfmcReport",
    "MetricCriteria",
    "ffmc_report",
]
