"""Functional fairness measure criteria: an automated pass/fail report.

Three checks per metric, over a full sweep of (FMR target, alpha) cells:

* Criterion 1 (intuitive component scales): the medians of the FPD and FND
  components must sit within a configurable factor of each other (default
  10x). Components on wildly different scales make the alpha weighting
  uninterpretable.
* Criterion 2 (defined boundaries): a static property of each metric's
  definition. FDR and GARBE live in [0, 1]; IR has no upper bound.
* Criterion 3 (computable under zero errors): the metric value must be
  computable in every grid cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError
from .metrics import METRIC_BOUNDS, METRICS
from .sweep import SweepCell, summarize_components

DEFAULT_SCALE_RATIO_LIMIT = 10.0


@dataclass(frozen=True)
class ScaleCheck:
    """Criterion 1: FPD/FND median magnitudes within ``limit`` of each other.

    ratio is None when it cannot be formed (a single zero median, or a
    component with no computable values), which fails the check.
    """

    passed: bool
    median_fpd: float | None
    median_fnd: float | None
    ratio: float | None


@dataclass(frozen=True)
class BoundsCheck:
    """Criterion 2: declared value range; upper None means unbounded."""

    passed: bool
    lower: float
    upper: float | None


@dataclass(frozen=True)
class ComputabilityCheck:
    """Criterion 3: fraction of grid cells with a computable value."""

    passed: bool
    computable_cells: int
    total_cells: int

    @property
    def computable_fraction(self) -> float:
        return self.computable_cells / self.total_cells


@dataclass(frozen=True)
class MetricCriteria:
    metric: str
    scale: ScaleCheck
    bounds: BoundsCheck
    computability: ComputabilityCheck


@dataclass(frozen=True)
class FfmcReport:
    scale_ratio_limit: float
    per_metric: dict[str, MetricCriteria]


def _scale_check(
    median_fpd: float | None, median_fnd: float | None, limit: float
) -> ScaleCheck:
    if median_fpd is None or median_fnd is None:
        return ScaleCheck(False, median_fpd, median_fnd, None)
    lo, hi = sorted((median_fpd, median_fnd))
    if hi == 0.0:
        # Both components identically zero: same scale by any standard.
        return ScaleCheck(True, median_fpd, median_fnd, 1.0)
    if lo == 0.0:
        return ScaleCheck(False, median_fpd, median_fnd, None)
    ratio = hi / lo
    return ScaleCheck(ratio <= limit, median_fpd, median_fnd, ratio)


def ffmc_report(
    cells: Iterable[SweepCell],
    scale_ratio_limit: float = DEFAULT_SCALE_RATIO_LIMIT,
) -> FfmcReport:
    """Evaluate the three criteria for every metric present in ``cells``."""
    if scale_ratio_limit < 1.0:
        raise ValidationError("scale ratio limit must be >= 1")
    cells = list(cells)
    if not cells:
        raise ValidationError("no sweep results to evaluate")
    metrics_present = [m for m in METRICS if any(c.metric == m for c in cells)]
    summaries = summarize_components(cells)

    per_metric = {}
    for metric in metrics_present:
        summary = summaries.get(metric)
        scale = _scale_check(
            summary.fpd.median if summary and summary.fpd else None,
            summary.fnd.median if summary and summary.fnd else None,
            scale_ratio_limit,
        )
        lower, upper = METRIC_BOUNDS[metric]
        bounds = BoundsCheck(passed=upper is not None, lower=lower, upper=upper)
        total = sum(1 for c in cells if c.metric == metric)
        computable = sum(1 for c in cells if c.metric == metric and c.computable)
        computability = ComputabilityCheck(
            passed=computable == total,
            computable_cells=computable,
            total_cells=total,
        )
        per_metric[metric] = MetricCriteria(metric, scale, bounds, computability)
    return FfmcReport(scale_ratio_limit=scale_ratio_limit, per_metric=per_metric)
