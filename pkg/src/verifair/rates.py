"""Error rates at decision thresholds: FMR/FNMR, EER, and DET operating points.

Decision rule: a trial is accepted iff score >= threshold (ties accept), so

    FMR(t)  = #{nonmated trials with score >= t} / #nonmated
    FNMR(t) = #{mated trials with score <  t} / #mated

Rates are carried as exact fractions of trial counts and only converted to
floats inside downstream formulas; this keeps zero-rate detection exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from .errors import UnreachableTargetError, ValidationError
from .trials import TrialSet


class Scope(str, Enum):
    POOLED = "pooled"
    GROUP = "group"


POOLED_KEY = "pooled"

RateLike = Union[Fraction, float, int, str]


def _as_fraction(value: RateLike) -> Fraction:
    frac = Fraction(value)
    if not 0 <= frac <= 1:
        raise ValidationError(f"rate {value!r} outside [0, 1]")
    return frac


@dataclass(frozen=True)
class RatePair:
    """FMR and FNMR at one threshold, as exact trial-count fractions."""

    fmr: Fraction
    fnmr: Fraction
    n_mated: int | None = None
    n_nonmated: int | None = None


@dataclass(frozen=True)
class GroupRates:
    """Per-group FMR/FNMR at a single threshold."""

    threshold: float
    per_group: dict[str, RatePair]

    @property
    def n(self) -> int:
        return len(self.per_group)

    @property
    def groups(self) -> tuple[str, ...]:
        return tuple(self.per_group)

    def fmr_values(self) -> tuple[Fraction, ...]:
        return tuple(pair.fmr for pair in self.per_group.values())

    def fnmr_values(self) -> tuple[Fraction, ...]:
        return tuple(pair.fnmr for pair in self.per_group.values())

    @classmethod
    def from_values(
        cls,
        threshold: float,
        fmr: Mapping[str, RateLike],
        fnmr: Mapping[str, RateLike],
    ) -> "GroupRates":
        """Build directly from known rate values (e.g. published tables).

        Pass rates as strings or Fractions to keep decimal values exact;
        floats are converted via their binary expansion.
        """
        if set(fmr) != set(fnmr):
            raise ValidationError("fmr and fnmr mappings must cover the same groups")
        per_group = {
            group: RatePair(_as_fraction(fmr[group]), _as_fraction(fnmr[group]))
            for group in fmr
        }
        return cls(threshold=float(threshold), per_group=per_group)


@dataclass(frozen=True)
class DetPoint:
    """One DET operating point; threshold may be +/-inf at the sentinels."""

    threshold: float
    fmr: float
    fnmr: float


@dataclass(frozen=True)
class ThresholdResult:
    """A threshold resolved for a target pooled FMR.

    ``achieved_fmr`` is the empirical rate actually obtained; exact equality
    with the target is generally impossible on quantized rates.
    ``quantized_to_zero`` marks targets below the smallest positive
    achievable rate, where the only admissible FMR is exactly 0.
    """

    threshold: float
    achieved_fmr: Fraction
    target: float
    quantized_to_zero: bool = False


@dataclass(frozen=True)
class EerResult:
    eer: float
    threshold: float


def _pair_at(mated: np.ndarray, nonmated: np.ndarray, threshold: float) -> RatePair:
    n_m, n_n = len(mated), len(nonmated)
    false_matches = n_n - int(np.searchsorted(nonmated, threshold, side="left"))
    false_nonmatches = int(np.searchsorted(mated, threshold, side="left"))
    return RatePair(
        fmr=Fraction(false_matches, n_n),
        fnmr=Fraction(false_nonmatches, n_m),
        n_mated=n_m,
        n_nonmated=n_n,
    )


def rates_at(trials: TrialSet, threshold: float, scope: Scope = Scope.GROUP) -> GroupRates:
    """FMR/FNMR at ``threshold``, per group or pooled.

    Pooled scope returns a single pseudo-group keyed ``"pooled"``.
    """
    scope = Scope(scope)
    if scope is Scope.POOLED:
        per_group = {
            POOLED_KEY: _pair_at(trials.mated_scores(), trials.nonmated_scores(), threshold)
        }
    else:
        per_group = {
            group: _pair_at(trials.mated_scores(group), trials.nonmated_scores(group), threshold)
            for group in trials.groups
        }
    return GroupRates(threshold=float(threshold), per_group=per_group)


def threshold_for_fmr(trials: TrialSet, target: float) -> ThresholdResult:
    """Smallest observed nonmated score t* with pooled FMR(t*) <= target.

    The achieved FMR is the largest empirical rate not exceeding the target.
    When even a single false match overshoots the target (the smallest
    positive achievable rate is above it), raises UnreachableTargetError;
    the exception carries the quantized-to-zero fallback result whose
    threshold sits just above the largest nonmated score.
    """
    if not 0.0 < target < 1.0:
        raise ValidationError(f"target FMR must be in (0, 1), got {target}")
    nonmated = trials.nonmated_scores()
    n = len(nonmated)
    # Largest false-match count whose rate stays at or below the target,
    # compared exactly against the target's binary expansion.
    allowed = int(Fraction(target) * n)
    values = np.unique(nonmated)
    counts_ge = n - np.searchsorted(nonmated, values, side="left")
    admissible = counts_ge <= allowed
    if not admissible.any():
        smallest_positive = Fraction(int(counts_ge[-1]), n)
        fallback = ThresholdResult(
            threshold=float(np.nextafter(values[-1], np.inf)),
            achieved_fmr=Fraction(0),
            target=float(target),
            quantized_to_zero=True,
        )
        raise UnreachableTargetError(
            f"target FMR {target} unreachable: smallest positive achievable rate is "
            f"{float(smallest_positive):.6g} ({counts_ge[-1]}/{n}); "
            "closest achievable rate at or below the target is 0",
            result=fallback,
        )
    idx = int(np.argmax(admissible))
    return ThresholdResult(
        threshold=float(values[idx]),
        achieved_fmr=Fraction(int(counts_ge[idx]), n),
        target=float(target),
    )


def _operating_points(mated: np.ndarray, nonmated: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thresholds (distinct observed scores), FMR and FNMR at each."""
    thresholds = np.unique(np.concatenate([mated, nonmated]))
    n_m, n_n = len(mated), len(nonmated)
    fmr = (n_n - np.searchsorted(nonmated, thresholds, side="left")) / n_n
    fnmr = np.searchsorted(mated, thresholds, side="left") / n_m
    return thresholds, fmr, fnmr


def pooled_eer(trials: TrialSet) -> EerResult:
    """Equal error rate over all groups combined.

    Sweeps the observed scores, finds the adjacent operating points where
    FMR - FNMR changes sign, and linearly interpolates both rates (and the
    threshold) to the crossing. EER is the mean of the two interpolated
    rates, which coincide at the crossing by construction.
    """
    mated, nonmated = trials.mated_scores(), trials.nonmated_scores()
    thresholds, fmr, fnmr = _operating_points(mated, nonmated)
    # Sentinel just above the top score: FMR drops to 0, FNMR reaches 1.
    thresholds = np.append(thresholds, np.nextafter(thresholds[-1], np.inf))
    fmr = np.append(fmr, 0.0)
    fnmr = np.append(fnmr, 1.0)
    diff = fmr - fnmr
    crossing = int(np.argmax(diff <= 0.0))
    if diff[crossing] == 0.0:
        return EerResult(
            eer=float((fmr[crossing] + fnmr[crossing]) / 2.0),
            threshold=float(thresholds[crossing]),
        )
    lo, hi = crossing - 1, crossing
    t = diff[lo] / (diff[lo] - diff[hi])
    eer_fmr = fmr[lo] + t * (fmr[hi] - fmr[lo])
    eer_fnmr = fnmr[lo] + t * (fnmr[hi] - fnmr[lo])
    threshold = thresholds[lo] + t * (thresholds[hi] - thresholds[lo])
    return EerResult(eer=float((eer_fmr + eer_fnmr) / 2.0), threshold=float(threshold))


def group_rate_table(trials: TrialSet) -> GroupRates:
    """Per-group FMR/FNMR at the threshold of the pooled EER."""
    return rates_at(trials, pooled_eer(trials).threshold, Scope.GROUP)


def _det_series(mated: np.ndarray, nonmated: np.ndarray) -> list[DetPoint]:
    thresholds, fmr, fnmr = _operating_points(mated, nonmated)
    points = [DetPoint(float("-inf"), 1.0, 0.0)]
    points.extend(
        DetPoint(float(t), float(a), float(b)) for t, a, b in zip(thresholds, fmr, fnmr)
    )
    points.append(DetPoint(float("inf"), 0.0, 1.0))
    return points


def det_points(trials: TrialSet) -> list[DetPoint]:
    """Pooled DET operating points: one per distinct observed score plus
    the accept-everything / reject-everything sentinels at -inf / +inf."""
    return _det_series(trials.mated_scores(), trials.nonmated_scores())


def det_points_by_group(trials: TrialSet) -> dict[str, list[DetPoint]]:
    """DET operating points computed separately per demographic group."""
    return {
        group: _det_series(trials.mated_scores(group), trials.nonmated_scores(group))
        for group in trials.groups
    }
