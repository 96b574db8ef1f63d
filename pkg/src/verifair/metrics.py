"""Fairness metrics over per-group error rates: FDR, IR, and GARBE.

All three summarize demographic disparity at one threshold, weighted by a
risk parameter alpha in [0, 1] that trades false-match-side against
false-non-match-side unfairness:

* FDR (fairness discrepancy rate): 1 minus the alpha-weighted sum of the
  maximum pairwise FMR difference and the maximum pairwise FNMR difference.
  1 means fully fair, 0 fully unfair. Always computable.
* IR (inequity rate): the alpha-weighted geometric mean of max/min FMR and
  max/min FNMR ratios. 1 means fully fair; unbounded above, and undefined
  whenever a required minimum rate is zero.
* GARBE (Gini aggregation rate for biometric equitability): the
  alpha-weighted sum of normalized Gini coefficients of the per-group FMR
  and FNMR values. 0 means fully fair, 1 fully unfair. Always computable.

Results carry the two aggregated components as ``fpd`` (false positive
differential, FMR side) and ``fnd`` (false negative differential, FNMR
side). A component or value that is undefined is represented as None and
flagged via ``computable`` — never as NaN or infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .rates import GroupRates

METRICS = ("fdr", "ir", "garbe")

#: Theoretical value range per metric; None means unbounded on that side.
METRIC_BOUNDS: dict[str, tuple[float, float | None]] = {
    "fdr": (0.0, 1.0),
    "ir": (1.0, None),
    "garbe": (0.0, 1.0),
}


@dataclass(frozen=True)
class MetricResult:
    """A fairness metric evaluated at one (threshold, alpha) cell."""

    metric: str
    value: float | None
    fpd: float | None
    fnd: float | None
    alpha: float
    threshold: float

    @property
    def computable(self) -> bool:
        return self.value is not None


def _check_inputs(rates: GroupRates, alpha: float) -> None:
    if rates.n < 2:
        raise ValidationError(f"fairness metrics need >= 2 groups, got {rates.n}")
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must be in [0, 1], got {alpha}")


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def gini(values: Sequence[float | Fraction]) -> float:
    """Normalized Gini coefficient of n >= 2 nonnegative values.

    Mean absolute pairwise difference over twice the mean, scaled by
    n/(n-1) to correct the small-sample downward bias, which makes the
    two-point extreme {0, x} reach exactly 1. An all-zero input has zero
    mean and is defined as perfectly equitable (0); this is what keeps
    GARBE computable when a rate vanishes everywhere.
    """
    vals = sorted(float(v) for v in values)
    n = len(vals)
    if n < 2:
        raise ValidationError(f"gini needs >= 2 values, got {n}")
    if vals[0] < 0:
        raise ValidationError("gini is undefined for negative values")
    total = sum(vals)
    if total == 0.0:
        return 0.0
    # Rank form: sum_i (2i - n - 1) x_(i) equals half the double sum of
    # absolute pairwise differences for sorted x.
    weighted = sum((2 * i - n - 1) * x for i, x in enumerate(vals, start=1))
    return _clamp01((n / (n - 1)) * weighted / (n * total))


def fdr(rates: GroupRates, alpha: float) -> MetricResult:
    """Fairness discrepancy rate at the rates' threshold."""
    _check_inputs(rates, alpha)
    fmrs = rates.fmr_values()
    fnmrs = rates.fnmr_values()
    fpd = float(max(fmrs) - min(fmrs))
    fnd = float(max(fnmrs) - min(fnmrs))
    value = _clamp01(1.0 - (alpha * fpd + (1.0 - alpha) * fnd))
    return MetricResult("fdr", value, fpd, fnd, alpha, rates.threshold)


def ir(rates: GroupRates, alpha: float) -> MetricResult:
    """Inequity rate at the rates' threshold.

    A ratio component with a zero minimum is not computable, and poisons
    the value whenever its exponent is nonzero (alpha > 0 for the FMR
    side, alpha < 1 for the FNMR side). A component whose maximum and
    minimum are both zero is defined as 1: no inequity in an error mode
    that never occurs.
    """
    _check_inputs(rates, alpha)

    def ratio(values: tuple[Fraction, ...]) -> float | None:
        high, low = max(values), min(values)
        if low == 0:
            return 1.0 if high == 0 else None
        return float(high / low)

    fpd = ratio(rates.fmr_values())
    fnd = ratio(rates.fnmr_values())
    needs_fpd = alpha > 0.0
    needs_fnd = alpha < 1.0
    if (needs_fpd and fpd is None) or (needs_fnd and fnd is None):
        value = None
    else:
        value = 1.0
        if needs_fpd:
            value *= fpd ** alpha
        if needs_fnd:
            value *= fnd ** (1.0 - alpha)
        value = max(value, 1.0)
    return MetricResult("ir", value, fpd, fnd, alpha, rates.threshold)


def garbe(rates: GroupRates, alpha: float) -> MetricResult:
    """Gini aggregation rate for biometric equitability at the rates' threshold."""
    _check_inputs(rates, alpha)
    fpd = gini(rates.fmr_values())
    fnd = gini(rates.fnmr_values())
    value = _clamp01(alpha * fpd + (1.0 - alpha) * fnd)
    return MetricResult("garbe", value, fpd, fnd, alpha, rates.threshold)


_METRIC_FUNCS = {"fdr": fdr, "ir": ir, "garbe": garbe}


def evaluate(metric: str, rates: GroupRates, alpha: float) -> MetricResult:
    """Evaluate one metric by name."""
    try:
        func = _METRIC_FUNCS[metric]
    except KeyError:
        raise ValidationError(
            f"unknown metric {metric!r}; expected one of {', '.join(METRICS)}"
        ) from None
    return func(rates, alpha)
